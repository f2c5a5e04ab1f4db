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
#include <map>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image_io.h"
#include "bitsalvage/common/prng.h"
#include "bitsalvage/common/resample.h"
#include "bitsalvage/jpeg/header.h"
#include "bitsalvage/synth/scene.h"
#include "pipeline/internal.h"

namespace bitsalvage::pipeline {

using internal::ErrorJson;
using internal::ParallelFor;
using internal::WriteJson;

namespace {

struct Source {
  std::string name;
  std::optional<fs::path> path;  // empty for synthetic sources
};

std::vector<Source> ListSources(const CorpusOptions& options) {
  std::vector<Source> sources;
  if (options.synth_count > 0) {
    for (int i = 0; i < options.synth_count; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "scene_%03d", i);
      sources.push_back({name, std::nullopt});
    }
    return sources;
  }
  if (!fs::is_directory(options.source_dir)) {
    throw Error(ErrorCode::kIo, options.source_dir.string() + " is not a directory");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(options.source_dir)) {
    if (entry.is_regular_file() && IsSupportedImagePath(entry.path())) {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::map<std::string, int> seen;
  for (const fs::path& p : paths) {
    std::string name = p.stem().string();
    if (seen[name]++ > 0) name += "_" + p.extension().string().substr(1);
    sources.push_back({name, fs::absolute(p)});
  }
  return sources;
}

nlohmann::json StatusSummary(const std::vector<nlohmann::json>& entries) {
  int ok = 0;
  for (const auto& e : entries) ok += e.value("status", "") == "ok";
  return {{"files", entries.size()}, {"ok", ok}, {"failed", static_cast<int>(entries.size()) - ok}};
}

}  // namespace

nlohmann::json RunCorpus(const CorpusOptions& options) {
  if (options.quality < 1 || options.quality > 100) {
    throw Error(ErrorCode::kInvalidArgument, "quality must be in 1..100");
  }
  const std::vector<Source> sources = ListSources(options);
  fs::create_directories(options.out_dir);
  if (options.synth_count > 0) fs::create_directories(options.out_dir / "originals");

  std::vector<nlohmann::json> entries(sources.size());
  ParallelFor(sources.size(), options.jobs, [&](size_t i) {
    const Source& src = sources[i];
    nlohmann::json e{{"name", src.name}};
    try {
      ImageBuffer image;
      if (src.path) {
        image = ReadImage(*src.path);
        e["source"] = src.path->string();
      } else {
        image = synth::GenerateScene(options.synth_width, options.synth_height,
                                     SplitMix64::At(options.seed, i));
        const std::string rel = "originals/" + src.name + ".png";
        WritePng(options.out_dir / rel, image);
        e["source"] = rel;
      }
      jpeg::EncodeOptions enc;
      enc.quality = options.quality;
      enc.subsampling = options.subsampling;
      enc.restart_interval = options.restart_interval;
      if (options.thumb_max_side > 0) {
        const auto [tw, th] = ThumbnailDims(image.width(), image.height(), options.thumb_max_side);
        enc.thumbnail = ResizeBicubic(image, tw, th);
        e["thumbnail"] = {{"width", tw}, {"height", th}};
      }
      const std::vector<uint8_t> bytes = jpeg::EncodeBaseline(image, enc);
      const std::string jpeg_name = src.name + ".jpg";
      WriteFileBytes(options.out_dir / jpeg_name, bytes);
      e["jpeg"] = jpeg_name;
      e["width"] = image.width();
      e["height"] = image.height();
      e["bytes"] = bytes.size();
      e["scan_offset"] = jpeg::ParseHeaders(bytes).scan_offset;
      e["sha256"] = Sha256Hex(bytes);
      e["status"] = "ok";
    } catch (const std::exception& ex) {
      e["status"] = "failed";
      e["error"] = ErrorJson(ex);
    }
    entries[i] = std::move(e);
  });

  nlohmann::json manifest{
      {"version", kManifestVersion},
      {"kind", "corpus"},
      {"quality", options.quality},
      {"thumb_max_side", options.thumb_max_side},
      {"subsampling", options.subsampling == jpeg::Subsampling::k420 ? "4:2:0" : "4:4:4"},
      {"restart_interval", options.restart_interval},
      {"files", entries}};
  if (options.synth_count > 0) manifest["synth_seed"] = options.seed;
  manifest["summary"] = StatusSummary(entries);
  WriteJson(options.out_dir / "manifest.json", manifest);
  return manifest;
}

nlohmann::json RunCorrupt(const CorruptOptions& options) {
  options.spec.Validate();
  const std::vector<internal::BatchItem> items = internal::LoadBatch(options.corpus_dir);
  fs::create_directories(options.out_dir / "flips");

  std::vector<nlohmann::json> entries(items.size());
  ParallelFor(items.size(), options.jobs, [&](size_t i) {
    const internal::BatchItem& item = items[i];
    nlohmann::json e{{"name", item.name}};
    try {
      fde::CorruptionSpec spec = options.spec;
      spec.seed = SplitMix64::At(options.spec.seed, i);
      const std::vector<uint8_t> input = ReadFileBytes(item.jpeg);
      const fde::CorruptionResult result = fde::CorruptJpeg(input, spec);
      const std::string jpeg_name = item.name + ".jpg";
      WriteFileBytes(options.out_dir / jpeg_name, result.bytes);

      auto ranges = [](const std::vector<fde::ByteRange>& rs) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : rs) out.push_back({r.offset, r.length});
        return out;
      };
      nlohmann::json log = fde::ToJson(result.flips);
      log["name"] = item.name;
      log["seed"] = spec.seed;
      log["plain_protected"] = ranges(result.plain_protected);
      log["cipher_protected"] = ranges(result.cipher_protected);
      const std::string log_name = "flips/" + item.name + ".json";
      WriteJson(options.out_dir / log_name, log);

      e["jpeg"] = jpeg_name;
      if (item.original) e["source"] = fs::absolute(*item.original).string();
      e["clean_jpeg"] = fs::absolute(item.jpeg).string();
      e["seed"] = spec.seed;
      e["flip_count"] = result.flips.bit_positions.size();
      e["flip_log"] = log_name;
      e["bytes"] = result.bytes.size();
      e["sha256"] = Sha256Hex(result.bytes);
      e["status"] = "ok";
    } catch (const std::exception& ex) {
      e["status"] = "failed";
      e["error"] = ErrorJson(ex);
    }
    entries[i] = std::move(e);
  });

  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& r : options.spec.protected_ranges) ranges.push_back({r.offset, r.length});
  nlohmann::json manifest{
      {"version", kManifestVersion},
      {"kind", "corrupted"},
      {"spec",
       {{"ber", options.spec.ber},
        {"seed", options.spec.seed},
        {"sector_size", options.spec.sector_size},
        {"cipher_block_size", options.spec.cipher_block_size},
        {"protect_header", options.spec.protect_header},
        {"protected_ranges", ranges},
        {"key_sha256", Sha256Hex(options.spec.key)}}},
      {"files", entries}};
  nlohmann::json summary = StatusSummary(entries);
  uint64_t flips = 0;
  for (const auto& e : entries) flips += e.value("flip_count", uint64_t{0});
  summary["flips"] = flips;
  manifest["summary"] = summary;
  WriteJson(options.out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace bitsalvage::pipeline
