#!/usr/bin/env python3
# Copyright 2026 The Bitsalvage Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates JSON outputs against docs/schemas.

Usage: check_schemas.py SCHEMA_DIR SCHEMA_FILE:JSON_FILE [...]
Exits 0 without checking when the jsonschema package is missing.
"""

import json
import pathlib
import sys

try:
    import jsonschema
    import referencing
except ImportError:
    print("jsonschema not installed; schema check skipped")
    sys.exit(0)


def main(argv):
    schema_dir = pathlib.Path(argv[1])
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], referencing.Resource.from_contents(schema)))
    registry = referencing.Registry().with_resources(resources)
    failed = 0
    for pair in argv[2:]:
        schema_name, doc_path = pair.split(":", 1)
        schema = json.loads((schema_dir / schema_name).read_text())
        validator = jsonschema.Draft202012Validator(schema, registry=registry)
        errors = list(validator.iter_errors(json.loads(pathlib.Path(doc_path).read_text())))
        for e in errors[:5]:
            print(f"{doc_path}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failed += bool(errors)
    print(f"{len(argv) - 2 - failed}/{len(argv) - 2} documents valid")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
