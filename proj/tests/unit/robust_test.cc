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

#include "bitsalvage/robust/robust_decoder.h"

#include <gtest/gtest.h>

#include "bitsalvage/common/error.h"
#include "bitsalvage/fde/corruption.h"
#include "bitsalvage/jpeg/bitstream.h"
#include "bitsalvage/jpeg/encoder.h"
#include "bitsalvage/jpeg/header.h"
#include "bitsalvage/jpeg/huffman.h"
#include "bitsalvage/jpeg/tables.h"
#include "bitsalvage/synth/scene.h"
#include "test_util.h"

namespace bitsalvage::robust {
namespace {

using jpeg::JpegHeader;
using jpeg::ScanBits;
using testing::TestImage;

struct Parsed {
  std::vector<uint8_t> bytes;
  JpegHeader header;
  ScanBits bits;
};

Parsed Parse(std::vector<uint8_t> bytes) {
  Parsed p{std::move(bytes), {}, {}};
  p.header = jpeg::ParseHeaders(p.bytes);
  p.bits = ScanBits::FromStuffed(jpeg::ScanPayload(p.bytes, p.header));
  return p;
}

std::vector<uint8_t> Encode(const ImageBuffer& img, jpeg::Subsampling sub = jpeg::Subsampling::k444,
                            int restart = 0) {
  jpeg::EncodeOptions o;
  o.subsampling = sub;
  o.restart_interval = restart;
  return jpeg::EncodeBaseline(img, o);
}

TEST(Robust, CleanStreamMatchesStandardDecode) {
  for (auto sub : {jpeg::Subsampling::k444, jpeg::Subsampling::k420}) {
    for (int restart : {0, 5}) {
      const Parsed p = Parse(Encode(TestImage(72, 40, 3, 1, 30), sub, restart));
      const jpeg::StandardScan standard = jpeg::DecodeScanStandard(p.header, p.bits);
      const RobustScan robust = RobustDecodeScan(p.header, p.bits);
      EXPECT_EQ(robust.grids, standard.grids);
      EXPECT_EQ(robust.log.mcus_decoded, static_cast<int>(standard.trace.size()));
      EXPECT_EQ(robust.log.bits_discarded, 0u);
      EXPECT_EQ(robust.log.sync_events, 0);
      EXPECT_EQ(robust.log.reanchors, 0);
      EXPECT_FALSE(robust.log.exhausted);
      for (size_t i = 0; i < standard.trace.size(); ++i) {
        EXPECT_EQ(robust.log.entries[i].start_bit, standard.trace[i].start_bit);
        EXPECT_EQ(robust.log.entries[i].end_bit, standard.trace[i].end_bit);
        EXPECT_EQ(robust.log.entries[i].retry_count, 0u);
      }
    }
  }
}

class CraftedMcu : public ::testing::Test {
 protected:
  void SetUp() override {
    clean_ = Parse(Encode(TestImage(16, 8, 1, 2)));
    dc_ = *clean_.header.dc_tables[clean_.header.components[0].dc_table];
    ac_ = *clean_.header.ac_tables[clean_.header.components[0].ac_table];
  }

  McuAttempt AttemptOn(const std::vector<uint8_t>& stuffed) {
    bits_ = ScanBits::FromStuffed(stuffed);
    geometry_ = jpeg::ComputeGeometry(clean_.header);
    const jpeg::McuDecoder decoder(clean_.header, geometry_, bits_);
    return DecodeMcuAttempt(decoder, 0, DcPredictors{});
  }

  Parsed clean_;
  jpeg::HuffmanTable dc_, ac_;
  ScanBits bits_;
  jpeg::ScanGeometry geometry_;
};

TEST_F(CraftedMcu, CleanMcuAdvancesByItsEncodedLength) {
  const jpeg::StandardScan s = jpeg::DecodeScanStandard(clean_.header, clean_.bits);
  const jpeg::ScanGeometry g = jpeg::ComputeGeometry(clean_.header);
  const jpeg::McuDecoder decoder(clean_.header, g, clean_.bits);
  const McuAttempt a = DecodeMcuAttempt(decoder, 0, DcPredictors{});
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.end_bit, s.trace[0].end_bit);
  EXPECT_EQ(a.blocks.blocks[0], s.grids[0].blocks[0]);
  EXPECT_EQ(a.predictors[0], s.grids[0].blocks[0][0]);
}

TEST_F(CraftedMcu, CodeOutsideDcTableIsInvalidCodeword) {
  // The standard luma DC table uses codes up to 9 bits; nine 1s is not one.
  const auto stuffed = jpeg::StuffBytes(std::vector<uint8_t>{0xFF, 0x80, 0x00, 0x00});
  const McuAttempt a = AttemptOn(stuffed);
  ASSERT_FALSE(a.ok());
  EXPECT_EQ(a.failure->kind, FailureKind::kInvalidCodeword);
}

TEST_F(CraftedMcu, RunPastCoefficient63IsOverflow) {
  jpeg::BitWriter w;
  w.PutBits(dc_.code_of(0), dc_.size_of(0));
  for (int i = 0; i < 4; ++i) w.PutBits(ac_.code_of(0xF0), ac_.size_of(0xF0));  // 4 x ZRL
  w.Flush();
  const McuAttempt a = AttemptOn(w.bytes());
  ASSERT_FALSE(a.ok());
  EXPECT_EQ(a.failure->kind, FailureKind::kCoefficientOverflow);
}

TEST_F(CraftedMcu, FailedAttemptLeavesPredictorsAlone) {
  const DcPredictors before{17, -4, 9, 0};
  bits_ = ScanBits::FromStuffed(jpeg::StuffBytes(std::vector<uint8_t>{0xFF, 0x80}));
  geometry_ = jpeg::ComputeGeometry(clean_.header);
  const jpeg::McuDecoder decoder(clean_.header, geometry_, bits_);
  const McuAttempt a = DecodeMcuAttempt(decoder, 0, before);
  ASSERT_FALSE(a.ok());
  EXPECT_EQ(a.predictors, before);
}

// Corrupted corpus-like file with header protection.
Parsed CorruptedScene(uint64_t seed, double ber = 1e-4) {
  const auto clean = Encode(synth::GenerateScene(256, 128, seed));
  fde::CorruptionSpec spec;
  spec.ber = ber;
  spec.seed = seed;
  return Parse(fde::CorruptJpeg(clean, spec).bytes);
}

TEST(Robust, CorruptedStreamsCompleteAndReplayExactly) {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const Parsed p = CorruptedScene(seed);
    const RobustScan scan = RobustDecodeScan(p.header, p.bits);
    const SyncLog& log = scan.log;
    EXPECT_EQ(log.mcus_decoded + log.unfilled, log.mcu_count);
    EXPECT_EQ(log.unfilled, 0) << "seed " << seed;

    // Each accepted MCU started `retry_count` bits after the previous one
    // ended, and re-running that attempt reproduces the stored blocks: a
    // failed attempt leaves nothing behind.
    const jpeg::ScanGeometry g = jpeg::ComputeGeometry(p.header);
    const jpeg::McuDecoder decoder(p.header, g, p.bits);
    DcPredictors predictors{};
    uint64_t prev_end = 0, discarded = 0;
    for (const SyncEntry& e : log.entries) {
      EXPECT_EQ(e.start_bit, prev_end + e.retry_count);
      EXPECT_GT(e.end_bit, e.start_bit);
      const McuAttempt a = decoder.Attempt(e.start_bit, false, predictors, true);
      ASSERT_TRUE(a.ok());
      EXPECT_EQ(a.end_bit, e.end_bit);
      std::vector<CoefGrid> one = jpeg::MakeEmptyGrids(g);
      decoder.Store(a.blocks, e.mcu_index, one);
      for (size_t c = 0; c < one.size(); ++c) {
        EXPECT_EQ(one[c].blocks[static_cast<size_t>(e.mcu_index)],
                  scan.grids[c].blocks[static_cast<size_t>(e.mcu_index)]);
      }
      predictors = a.predictors;
      prev_end = e.end_bit;
      discarded += e.retry_count;
    }
    EXPECT_EQ(discarded, log.bits_discarded);
  }
}

TEST(Robust, StandardAbortsWhereRobustCompletes) {
  int contrast = 0;
  for (uint64_t seed = 10; seed < 16; ++seed) {
    const Parsed p = CorruptedScene(seed);
    bool aborted = false;
    try {
      jpeg::DecodeScanStandard(p.header, p.bits);
    } catch (const jpeg::DecodeError&) {
      aborted = true;
    }
    const RobustScan r = RobustDecodeScan(p.header, p.bits);
    contrast += aborted && r.log.mcus_decoded == r.log.mcu_count;
  }
  EXPECT_GE(contrast, 5);
}

TEST(Robust, RestartMarkersReanchorAfterDamage) {
  const auto clean = Encode(synth::GenerateScene(256, 128, 3), jpeg::Subsampling::k444, 8);
  fde::CorruptionSpec spec;
  spec.ber = 3e-4;
  spec.seed = 5;
  const Parsed p = Parse(fde::CorruptJpeg(clean, spec).bytes);
  const RobustScan r = RobustDecodeScan(p.header, p.bits);
  EXPECT_EQ(r.log.mcus_decoded + r.log.unfilled, r.log.mcu_count);
  EXPECT_GT(r.log.sync_events + r.log.reanchors, 0);
}

TEST(Robust, FewFlippedBitsResynchronizeWithinAFewBlocks) {
  const Parsed clean = Parse(Encode(synth::GenerateScene(256, 128, 4)));
  const jpeg::StandardScan ref = jpeg::DecodeScanStandard(clean.header, clean.bits);
  const auto original = BlockSequence(ref.grids, clean.header);
  int synced = 0, trials = 0;
  for (int t = 0; t < 30; ++t) {
    // Three flipped bits at the start of MCU 100 + 7t, in the unstuffed stream.
    std::vector<uint8_t> raw(clean.bits.bytes().begin(), clean.bits.bytes().end());
    const uint64_t at = ref.trace[static_cast<size_t>(100 + 7 * t)].start_bit;
    for (uint64_t b : {at + 1, at + 4, at + 6}) raw[b / 8] ^= static_cast<uint8_t>(0x80 >> (b % 8));
    const ScanBits bits = ScanBits::FromStuffed(jpeg::StuffBytes(raw));
    const RobustScan r = RobustDecodeScan(clean.header, bits);
    ASSERT_EQ(r.log.mcus_decoded, r.log.mcu_count);
    const auto robust = BlockSequence(r.grids, clean.header);
    ++trials;
    try {
      const SyncResult s = SynchronizationDistance(original, robust);
      if (!s.corrupted || s.distance <= 16) ++synced;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(synced, trials * 9 / 10);
}

TEST(SyncDistance, IdenticalSequencesAreNotCorrupted) {
  const Parsed p = Parse(Encode(TestImage(64, 32, 3, 5)));
  const auto seq = BlockSequence(jpeg::DecodeScanStandard(p.header, p.bits).grids, p.header);
  const SyncResult s = SynchronizationDistance(seq, seq);
  EXPECT_FALSE(s.corrupted);
  EXPECT_EQ(s.distance, 0u);
}

std::vector<CoefBlock> SyntheticSequence(size_t n, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<CoefBlock> seq(n);
  for (auto& b : seq) {
    for (auto& c : b) c = static_cast<int32_t>(rng.NextInRange(-20, 20));
  }
  return seq;
}

TEST(SyncDistance, TwoGarbledBlocksGiveDistanceTwo) {
  const auto original = SyntheticSequence(60, 6);
  auto robust = original;
  for (size_t i : {22u, 23u}) robust[i][5] += 3;
  for (auto& b : robust) b[0] += 100;  // DC drift is ignored
  const SyncResult s = SynchronizationDistance(original, robust);
  EXPECT_TRUE(s.corrupted);
  EXPECT_EQ(s.first_corrupt, 22u);
  EXPECT_EQ(s.distance, 2u);
  EXPECT_EQ(s.offset(), 0);
}

TEST(SyncDistance, FollowsABlockShift) {
  const auto original = SyntheticSequence(60, 7);
  std::vector<CoefBlock> robust(original.begin(), original.begin() + 10);
  robust.push_back(SyntheticSequence(1, 99)[0]);  // garbage block
  robust.insert(robust.end(), original.begin() + 12, original.end());  // one block lost
  const SyncResult s = SynchronizationDistance(original, robust);
  EXPECT_EQ(s.first_corrupt, 10u);
  EXPECT_EQ(s.distance, 1u);
  EXPECT_EQ(s.offset(), 1);
}

TEST(SyncDistance, UnrelatedSequencesNeverSync) {
  try {
    SynchronizationDistance(SyntheticSequence(40, 8), SyntheticSequence(40, 9));
    FAIL() << "expected NoSync";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSync);
  }
}

TEST(SyncLogJson, CarriesTotalsAndOptionalEntries) {
  const Parsed p = CorruptedScene(2);
  const RobustScan r = RobustDecodeScan(p.header, p.bits);
  const nlohmann::json brief = ToJson(r.log, false);
  EXPECT_EQ(brief["mcus_decoded"], r.log.mcus_decoded);
  EXPECT_EQ(brief["bits_discarded"], r.log.bits_discarded);
  EXPECT_FALSE(brief.contains("entries"));
  const nlohmann::json full = ToJson(r.log, true);
  ASSERT_TRUE(full.contains("entries"));
  EXPECT_EQ(full["entries"].size(), r.log.entries.size());
}

}  // namespace
}  // namespace bitsalvage::robust
