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

#ifndef BITSALVAGE_PIPELINE_COMMANDS_H_
#define BITSALVAGE_PIPELINE_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitsalvage/fde/corruption.h"
#include "bitsalvage/jpeg/encoder.h"
#include "bitsalvage/sca/sca.h"
#include "json.hpp"

// Batch operations behind the command-line tool. Every command processes
// files independently (one failure never stops a batch), writes its outputs
// and a JSON manifest or report into the output directory, and returns that
// document. Results never depend on the worker count.
namespace bitsalvage::pipeline {

namespace fs = std::filesystem;

inline constexpr int kManifestVersion = 1;

struct CorpusOptions {
  fs::path source_dir;           // PNG / PPM / PGM sources (ignored if synth)
  fs::path out_dir;
  int quality = 90;
  int thumb_max_side = 160;
  jpeg::Subsampling subsampling = jpeg::Subsampling::k444;
  int restart_interval = 0;
  // Procedural sources instead of source_dir: count, size and seed.
  int synth_count = 0;
  int synth_width = 512;
  int synth_height = 256;
  uint64_t seed = 0;
  int jobs = 1;
};

// Encodes each source as baseline JPEG with a bicubic thumbnail (longest
// side thumb_max_side) in an APP0 JFXX segment. Writes <stem>.jpg and
// manifest.json; synthetic sources are also written to originals/<stem>.png.
nlohmann::json RunCorpus(const CorpusOptions& options);

struct CorruptOptions {
  fs::path corpus_dir;  // holds manifest.json from RunCorpus
  fs::path out_dir;
  fde::CorruptionSpec spec;  // seed is the batch seed
  int jobs = 1;
};

// Corrupts every corpus file through the sector-encryption channel. File i
// uses seed SplitMix64::At(batch seed, i). Writes <stem>.jpg,
// flips/<stem>.json and manifest.json.
nlohmann::json RunCorrupt(const CorruptOptions& options);

enum class RestoreMode { kStandard, kRobust, kSca };

RestoreMode ParseRestoreMode(const std::string& name);
std::string RestoreModeName(RestoreMode mode);

struct RestoreOptions {
  fs::path input_dir;  // manifest.json from RunCorrupt / RunCorpus, or bare JPEGs
  fs::path out_dir;
  RestoreMode mode = RestoreMode::kSca;
  std::optional<fs::path> originals_dir;  // overrides manifest sources
  sca::ScaOptions sca;
  bool sync_entries = false;  // per-MCU records in the reports
  bool dump_stages = false;   // stages/<stem>/{robust,normalized,aligned}.png
  int jobs = 1;
};

// Decodes every file in the chosen mode, writes <stem>.png and
// reports/<stem>.json, and report.json / report.csv with per-file status
// ("ok", "aborted", "failed") and corpus means when originals are known.
nlohmann::json RunRestore(const RestoreOptions& options);

struct EvalOptions {
  fs::path restored_dir;  // PNG rasters named <stem>.png
  fs::path originals;     // directory of originals or a corpus manifest
  fs::path out_report;    // JSON; a .csv twin is written next to it
  int jobs = 1;
};

nlohmann::json RunEval(const EvalOptions& options);

struct ExportOptions {
  fs::path restored_dir;   // self-compensated rasters (<stem>.png)
  fs::path corrupted_dir;  // JPEGs carrying the thumbnails
  fs::path originals;      // directory of originals or a corpus manifest
  fs::path out_dir;
  int jobs = 1;
};

// Writes self_compensated/, thumbnail/ (bicubic-upsampled to full size) and
// ground_truth/ PNG triplets plus manifest.json.
nlohmann::json RunExportTraining(const ExportOptions& options);

// Lowercase hex SHA-256 of a byte buffer.
std::string Sha256Hex(std::span<const uint8_t> bytes);

// Parses a 32-digit hex key (whitespace ignored).
std::vector<uint8_t> ParseHexKey(const std::string& hex);

// Seed from BITSALVAGE_SEED when set (decimal or 0x-prefixed hex).
std::optional<uint64_t> SeedFromEnvironment();

}  // namespace bitsalvage::pipeline

#endif  // BITSALVAGE_PIPELINE_COMMANDS_H_
