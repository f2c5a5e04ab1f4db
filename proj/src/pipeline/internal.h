// Copyright 2026 The Bitsalvage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BITSALVAGE_PIPELINE_INTERNAL_H_
#define BITSALVAGE_PIPELINE_INTERNAL_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bitsalvage/common/image.h"
#include "bitsalvage/pipeline/commands.h"

namespace bitsalvage::pipeline::internal {

// Runs fn(0) .. fn(count - 1) on up to `jobs` threads. fn must only touch
// its own slot of any shared output.
void ParallelFor(size_t count, int jobs, const std::function<void(size_t)>& fn);

nlohmann::json ReadJson(const fs::path& path);
void WriteJson(const fs::path& path, const nlohmann::json& doc);

// Error object {"code", "message"} for a caught exception.
nlohmann::json ErrorJson(const std::exception& e);

// One input of a batch: display name, JPEG path and, when known, the path
// of the pristine original.
struct BatchItem {
  std::string name;
  fs::path jpeg;
  std::optional<fs::path> original;
};

// Items from <dir>/manifest.json (corpus or corrupted kind) or, without a
// manifest, every *.jpg / *.jpeg in dir sorted by name.
std::vector<BatchItem> LoadBatch(const fs::path& dir);

// Originals keyed by name: a manifest file (its "source" entries) or a
// directory of rasters named <name>.png / .ppm / .pgm.
std::optional<fs::path> FindOriginal(const fs::path& originals, const std::string& name);

// "psnr_y"/"ssim_y" entries and the corpus means over files that have them.
nlohmann::json MetricSummary(const nlohmann::json& files);

// name,status,psnr_y,ssim_y rows.
void WriteCsv(const fs::path& path, const nlohmann::json& files);

}  // namespace bitsalvage::pipeline::internal

#endif  // BITSALVAGE_PIPELINE_INTERNAL_H_
