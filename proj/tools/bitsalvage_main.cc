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

// bitsalvage: corpus synthesis, sector-encryption corruption, robust
// decoding with segment compensation, evaluation and training export.
//
// Exit status: 0 when the command ran (per-file failures are recorded in
// its report), 1 on a hard error, CLI11's codes on bad usage.

#include <cstdio>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image_io.h"
#include "bitsalvage/pipeline/commands.h"

namespace bp = bitsalvage::pipeline;
namespace bs = bitsalvage;

namespace {

bs::fde::ByteRange ParseRange(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw bs::Error(bs::ErrorCode::kInvalidArgument, "expected OFFSET:LENGTH, got " + text);
  }
  try {
    return {std::stoull(text.substr(0, colon), nullptr, 0),
            std::stoull(text.substr(colon + 1), nullptr, 0)};
  } catch (const std::logic_error&) {
    throw bs::Error(bs::ErrorCode::kInvalidArgument, "bad byte range " + text);
  }
}

// A key file holds either 16 raw bytes or the key in hex.
std::vector<uint8_t> ReadKeyFile(const std::string& path) {
  std::vector<uint8_t> bytes = bs::ReadFileBytes(path);
  if (bytes.size() == 16) return bytes;
  return bp::ParseHexKey(std::string(bytes.begin(), bytes.end()));
}

void PrintSummary(const nlohmann::json& doc) {
  if (doc.contains("summary")) std::cout << doc["summary"].dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery of JPEG files corrupted under full-disk encryption"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));

  // corpus
  bp::CorpusOptions corpus;
  std::string subsampling = "444";
  std::optional<uint64_t> corpus_seed;
  auto* cmd_corpus = app.add_subcommand("corpus", "Encode sources as JPEGs with thumbnails");
  cmd_corpus->add_option("--source", corpus.source_dir, "Directory of PNG/PPM/PGM sources");
  cmd_corpus->add_option("-o,--out", corpus.out_dir, "Output directory")->required();
  cmd_corpus->add_option("--quality", corpus.quality, "JPEG quality")->check(CLI::Range(1, 100));
  cmd_corpus->add_option("--thumb-max-side", corpus.thumb_max_side, "Longest thumbnail side")
      ->check(CLI::Range(1, 255));
  cmd_corpus->add_option("--subsampling", subsampling, "Chroma sampling")
      ->check(CLI::IsMember({"444", "420"}));
  cmd_corpus->add_option("--restart-interval", corpus.restart_interval, "MCUs per restart interval")
      ->check(CLI::Range(0, 65535));
  cmd_corpus->add_option("--synth", corpus.synth_count, "Generate N procedural scenes instead")
      ->check(CLI::NonNegativeNumber);
  cmd_corpus->add_option("--synth-width", corpus.synth_width, "Scene width");
  cmd_corpus->add_option("--synth-height", corpus.synth_height, "Scene height");
  cmd_corpus->add_option("--seed", corpus_seed, "Scene seed (BITSALVAGE_SEED if unset)");

  // corrupt
  bp::CorruptOptions corrupt;
  std::optional<uint64_t> corrupt_seed;
  std::string key_hex, key_file;
  std::vector<std::string> protect;
  bool unprotect_header = false;
  auto* cmd_corrupt = app.add_subcommand("corrupt", "Pass a corpus through the FDE bit-error channel");
  cmd_corrupt->add_option("-i,--in", corrupt.corpus_dir, "Corpus directory")->required();
  cmd_corrupt->add_option("-o,--out", corrupt.out_dir, "Output directory")->required();
  cmd_corrupt->add_option("--ber", corrupt.spec.ber, "Ciphertext bit error rate")
      ->check(CLI::Range(0.0, 1.0));
  cmd_corrupt->add_option("--seed", corrupt_seed, "Batch seed (BITSALVAGE_SEED if unset)");
  cmd_corrupt->add_option("--sector-size", corrupt.spec.sector_size, "Sector size in bytes");
  auto* key_opt = cmd_corrupt->add_option("--key", key_hex, "AES-128 key, 32 hex digits");
  cmd_corrupt->add_option("--key-file", key_file, "File with the key (raw or hex)")
      ->check(CLI::ExistingFile)
      ->excludes(key_opt);
  cmd_corrupt->add_option("--protect", protect, "Extra protected plaintext range OFFSET:LENGTH");
  cmd_corrupt->add_flag("--unprotect-header", unprotect_header, "Allow flips in header bytes");

  // restore
  bp::RestoreOptions restore;
  std::string mode = "sca", rule = "local-ratio";
  std::optional<double> threshold;
  std::string originals_dir;
  bool no_align = false, no_segments = false;
  auto* cmd_restore = app.add_subcommand("restore", "Decode corrupted JPEGs");
  cmd_restore->add_option("-i,--in", restore.input_dir, "Corrupted corpus or JPEG directory")
      ->required();
  cmd_restore->add_option("-o,--out", restore.out_dir, "Output directory")->required();
  cmd_restore->add_option("--mode", mode, "Decoder")
      ->check(CLI::IsMember({"standard", "robust", "sca"}));
  cmd_restore->add_option("--originals", originals_dir, "Originals directory or corpus manifest");
  cmd_restore->add_option("--rule", rule, "Seam candidate rule")
      ->check(CLI::IsMember({"local-ratio", "robust-z", "mean-std"}));
  cmd_restore->add_option("--threshold", threshold, "Candidate threshold for the rule");
  cmd_restore->add_flag("--no-align", no_align, "Skip block-row alignment");
  cmd_restore->add_flag("--no-segments", no_segments, "Normalize the image as one segment");
  cmd_restore->add_flag("--sync-entries", restore.sync_entries, "Per-MCU sync records");
  cmd_restore->add_flag("--dump-stages", restore.dump_stages, "Write intermediate rasters");

  // eval
  bp::EvalOptions eval;
  auto* cmd_eval = app.add_subcommand("eval", "PSNR/SSIM of restored rasters");
  cmd_eval->add_option("-i,--in", eval.restored_dir, "Directory of restored PNGs")->required();
  cmd_eval->add_option("--originals", eval.originals, "Originals directory or corpus manifest")
      ->required();
  cmd_eval->add_option("-o,--out", eval.out_report, "Report path (.json)")->required();

  // export-training
  bp::ExportOptions exp;
  auto* cmd_export = app.add_subcommand("export-training", "Write compensation training triplets");
  cmd_export->add_option("--restored", exp.restored_dir, "Self-compensated PNGs")->required();
  cmd_export->add_option("--corrupted", exp.corrupted_dir, "Corrupted JPEGs")->required();
  cmd_export->add_option("--originals", exp.originals, "Originals directory or corpus manifest")
      ->required();
  cmd_export->add_option("-o,--out", exp.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::optional<uint64_t> env_seed = bp::SeedFromEnvironment();
    nlohmann::json doc;
    if (cmd_corpus->parsed()) {
      corpus.subsampling = subsampling == "420" ? bs::jpeg::Subsampling::k420
                                                : bs::jpeg::Subsampling::k444;
      corpus.seed = corpus_seed.value_or(env_seed.value_or(0));
      corpus.jobs = jobs;
      if (corpus.synth_count == 0 && corpus.source_dir.empty()) {
        throw bs::Error(bs::ErrorCode::kInvalidArgument, "corpus needs --source or --synth");
      }
      doc = bp::RunCorpus(corpus);
    } else if (cmd_corrupt->parsed()) {
      corrupt.spec.seed = corrupt_seed.value_or(env_seed.value_or(0));
      if (!key_hex.empty()) corrupt.spec.key = bp::ParseHexKey(key_hex);
      if (!key_file.empty()) corrupt.spec.key = ReadKeyFile(key_file);
      for (const std::string& r : protect) corrupt.spec.protected_ranges.push_back(ParseRange(r));
      corrupt.spec.protect_header = !unprotect_header;
      corrupt.spec.Validate();
      corrupt.jobs = jobs;
      doc = bp::RunCorrupt(corrupt);
    } else if (cmd_restore->parsed()) {
      static const std::map<std::string, bs::sca::CandidateRule> kRules{
          {"local-ratio", bs::sca::CandidateRule::kLocalRatio},
          {"robust-z", bs::sca::CandidateRule::kRobustZ},
          {"mean-std", bs::sca::CandidateRule::kMeanStd}};
      restore.mode = bp::ParseRestoreMode(mode);
      restore.sca.detect.rule = kRules.at(rule);
      restore.sca.detect.threshold = threshold;
      restore.sca.align = !no_align;
      restore.sca.segments = !no_segments;
      if (!originals_dir.empty()) restore.originals_dir = originals_dir;
      restore.jobs = jobs;
      doc = bp::RunRestore(restore);
    } else if (cmd_eval->parsed()) {
      eval.jobs = jobs;
      doc = bp::RunEval(eval);
    } else if (cmd_export->parsed()) {
      exp.jobs = jobs;
      doc = bp::RunExportTraining(exp);
    }
    PrintSummary(doc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bitsalvage: %s\n", e.what());
    return 1;
  }
  return 0;
}
