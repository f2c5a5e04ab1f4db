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

#include <algorithm>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image_io.h"
#include "bitsalvage/common/resample.h"
#include "bitsalvage/jpeg/decoder.h"
#include "bitsalvage/jpeg/header.h"
#include "bitsalvage/metrics/metrics.h"
#include "pipeline/internal.h"

namespace bitsalvage::pipeline {

using internal::ErrorJson;
using internal::WriteJson;

namespace {

std::vector<fs::path> ListPngs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

nlohmann::json RunEval(const EvalOptions& options) {
  const std::vector<fs::path> restored = ListPngs(options.restored_dir);
  std::vector<nlohmann::json> entries(restored.size());
  internal::ParallelFor(restored.size(), options.jobs, [&](size_t i) {
    nlohmann::json e;
    e["name"] = restored[i].stem().string();
    try {
      const std::optional<fs::path> original =
          internal::FindOriginal(options.originals, e["name"].get<std::string>());
      if (!original) {
        e["status"] = "missing_original";
      } else {
        e["metrics"] = metrics::ToJson(metrics::Compare(ReadImage(*original), ReadPng(restored[i])));
        e["status"] = "ok";
      }
    } catch (const std::exception& ex) {
      e["status"] = "failed";
      e["error"] = ErrorJson(ex);
    }
    entries[i] = std::move(e);
  });

  nlohmann::json files = entries;
  nlohmann::json report{{"version", kManifestVersion},
                        {"kind", "eval"},
                        {"files", files},
                        {"summary", internal::MetricSummary(files)}};
  report["summary"]["files"] = files.size();
  if (options.out_report.has_parent_path()) fs::create_directories(options.out_report.parent_path());
  WriteJson(options.out_report, report);
  fs::path csv = options.out_report;
  internal::WriteCsv(csv.replace_extension(".csv"), files);
  return report;
}

nlohmann::json RunExportTraining(const ExportOptions& options) {
  const std::vector<fs::path> restored = ListPngs(options.restored_dir);
  for (const char* sub : {"self_compensated", "thumbnail", "ground_truth"}) {
    fs::create_directories(options.out_dir / sub);
  }
  std::vector<nlohmann::json> entries(restored.size());
  internal::ParallelFor(restored.size(), options.jobs, [&](size_t i) {
    const std::string name = restored[i].stem().string();
    const std::string file = name + ".png";
    nlohmann::json e{{"name", name}};
    try {
      const ImageBuffer self = ReadPng(restored[i]);
      const std::optional<fs::path> original = internal::FindOriginal(options.originals, name);
      if (!original) throw Error(ErrorCode::kIo, "no original for " + name);
      const ImageBuffer truth = ReadImage(*original);
      if (truth.width() != self.width() || truth.height() != self.height()) {
        throw Error(ErrorCode::kLengthMismatch, "original and restored sizes differ for " + name);
      }
      const std::vector<uint8_t> bytes = ReadFileBytes(options.corrupted_dir / (name + ".jpg"));
      const std::optional<ImageBuffer> thumb = jpeg::ExtractThumbnail(jpeg::ParseHeaders(bytes));
      if (!thumb) throw Error(ErrorCode::kCorruptThumbnail, "no thumbnail in " + name + ".jpg");

      WritePng(options.out_dir / "self_compensated" / file, self);
      WritePng(options.out_dir / "thumbnail" / file,
               ResizeBicubic(*thumb, self.width(), self.height()));
      WritePng(options.out_dir / "ground_truth" / file, truth);
      e["self_compensated"] = "self_compensated/" + file;
      e["thumbnail"] = "thumbnail/" + file;
      e["ground_truth"] = "ground_truth/" + file;
      e["thumbnail_size"] = {thumb->width(), thumb->height()};
      e["width"] = self.width();
      e["height"] = self.height();
      e["status"] = "ok";
    } catch (const std::exception& ex) {
      e["status"] = "failed";
      e["error"] = ErrorJson(ex);
    }
    entries[i] = std::move(e);
  });

  nlohmann::json files = entries;
  int ok = 0;
  for (const auto& f : files) ok += f["status"] == "ok";
  nlohmann::json manifest{{"version", kManifestVersion},
                          {"kind", "training"},
                          {"files", files},
                          {"summary", {{"files", files.size()}, {"ok", ok}}}};
  WriteJson(options.out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace bitsalvage::pipeline
