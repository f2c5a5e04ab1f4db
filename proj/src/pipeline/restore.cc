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

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image_io.h"
#include "bitsalvage/jpeg/decoder.h"
#include "bitsalvage/metrics/metrics.h"
#include "bitsalvage/robust/robust_decoder.h"
#include "pipeline/internal.h"

namespace bitsalvage::pipeline {

using internal::ErrorJson;
using internal::WriteJson;

RestoreMode ParseRestoreMode(const std::string& name) {
  if (name == "standard") return RestoreMode::kStandard;
  if (name == "robust") return RestoreMode::kRobust;
  if (name == "sca") return RestoreMode::kSca;
  throw Error(ErrorCode::kInvalidArgument, "unknown restore mode: " + name);
}

std::string RestoreModeName(RestoreMode mode) {
  switch (mode) {
    case RestoreMode::kStandard: return "standard";
    case RestoreMode::kRobust: return "robust";
    case RestoreMode::kSca: return "sca";
  }
  return "?";
}

namespace {

struct Restored {
  nlohmann::json entry;   // goes into report.json
  nlohmann::json detail = nlohmann::json::object();  // extra fields for reports/<name>.json only
};

Restored RestoreOne(const internal::BatchItem& item, const RestoreOptions& options) {
  Restored r;
  nlohmann::json& e = r.entry;
  e["name"] = item.name;
  try {
    const std::vector<uint8_t> bytes = ReadFileBytes(item.jpeg);
    const jpeg::JpegHeader header = jpeg::ParseHeaders(bytes);
    const jpeg::ScanBits bits = jpeg::ScanBits::FromStuffed(jpeg::ScanPayload(bytes, header));
    const fs::path stages = options.out_dir / "stages" / item.name;

    ImageBuffer output;
    e["status"] = "ok";
    if (options.mode == RestoreMode::kStandard) {
      try {
        const jpeg::StandardScan scan = jpeg::DecodeScanStandard(header, bits);
        output = jpeg::ReconstructPixels(scan.grids, header).ToDisplay();
      } catch (const jpeg::DecodeError& abort) {
        e["status"] = "aborted";
        e["abort"] = {{"kind", jpeg::FailureKindName(abort.failure().kind)},
                      {"mcu_index", abort.mcu_index()},
                      {"bit_address", abort.failure().bit_address}};
        output = jpeg::ReconstructPixels(abort.partial_grids(), header).ToDisplay();
      }
    } else {
      const robust::RobustScan scan = robust::RobustDecodeScan(header, bits);
      e["sync"] = robust::ToJson(scan.log, false);
      if (options.sync_entries) r.detail["sync"] = robust::ToJson(scan.log, true);
      const ImageBuffer working = jpeg::ReconstructPixels(scan.grids, header);
      if (options.mode == RestoreMode::kRobust) {
        output = working.ToDisplay();
      } else {
        const sca::ScaResult result = sca::RunSca(working, options.sca);
        e["segments"] = sca::ToJson(result.map);
        if (options.dump_stages) {
          fs::create_directories(stages);
          WritePng(stages / "robust.png", working.ToDisplay());
          WritePng(stages / "normalized.png", result.normalized);
          WritePng(stages / "aligned.png", result.image);
        }
        output = result.image;
      }
    }
    const std::string out_name = item.name + ".png";
    WritePng(options.out_dir / out_name, output);
    e["output"] = out_name;

    std::optional<fs::path> original = item.original;
    if (options.originals_dir) original = internal::FindOriginal(*options.originals_dir, item.name);
    if (original) {
      try {
        e["metrics"] = metrics::ToJson(metrics::Compare(ReadImage(*original), output));
      } catch (const std::exception& ex) {
        e["metrics_error"] = ErrorJson(ex);
      }
    }
  } catch (const std::exception& ex) {
    e["status"] = "failed";
    e["error"] = ErrorJson(ex);
  }
  return r;
}

}  // namespace

nlohmann::json RunRestore(const RestoreOptions& options) {
  const std::vector<internal::BatchItem> items = internal::LoadBatch(options.input_dir);
  fs::create_directories(options.out_dir / "reports");
  std::vector<Restored> results(items.size());
  internal::ParallelFor(items.size(), options.jobs,
                        [&](size_t i) { results[i] = RestoreOne(items[i], options); });

  nlohmann::json files = nlohmann::json::array();
  int ok = 0, aborted = 0, failed = 0;
  for (const Restored& r : results) {
    nlohmann::json per_file = r.entry;
    per_file.update(r.detail);
    WriteJson(options.out_dir / "reports" / (r.entry["name"].get<std::string>() + ".json"),
              per_file);
    const std::string status = r.entry["status"];
    ok += status == "ok";
    aborted += status == "aborted";
    failed += status == "failed";
    files.push_back(r.entry);
  }
  nlohmann::json summary = internal::MetricSummary(files);
  summary["files"] = files.size();
  summary["ok"] = ok;
  summary["aborted"] = aborted;
  summary["failed"] = failed;
  nlohmann::json report{{"version", kManifestVersion},
                        {"kind", "restore"},
                        {"mode", RestoreModeName(options.mode)},
                        {"files", files},
                        {"summary", summary}};
  WriteJson(options.out_dir / "report.json", report);
  internal::WriteCsv(options.out_dir / "report.csv", files);
  return report;
}

}  // namespace bitsalvage::pipeline
