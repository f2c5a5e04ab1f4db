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

#include <gtest/gtest.h>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image.h"
#include "bitsalvage/common/image_io.h"
#include "bitsalvage/common/prng.h"
#include "bitsalvage/common/resample.h"
#include "bitsalvage/synth/plant.h"
#include "bitsalvage/synth/scene.h"
#include "test_util.h"

namespace bitsalvage {
namespace {

using testing::RandomImage;
using testing::TempDir;
using testing::TestImage;

TEST(SplitMix64, MatchesReferenceOutputs) {
  // First outputs for seed 1234567 from the published reference code.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.Next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.Next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.Next(), 9817491932198370423ULL);
  EXPECT_EQ(SplitMix64::At(1234567, 2), 9817491932198370423ULL);
}

TEST(SplitMix64, RangesStayInBounds) {
  SplitMix64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.NextUnit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const int64_t v = rng.NextInRange(-3, 4);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 4);
  }
}

TEST(Image, RoundingAndClamping) {
  EXPECT_EQ(RoundHalfAway(2.5), 3);
  EXPECT_EQ(RoundHalfAway(-2.5), -3);
  EXPECT_EQ(RoundHalfAway(-2.4), -2);
  ImageBuffer w(2, 1, 1, SampleDomain::kWorking);
  w.at(0, 0, 0) = -40;
  w.at(1, 0, 0) = 300;
  const ImageBuffer d = w.ToDisplay();
  EXPECT_EQ(d.domain(), SampleDomain::kDisplay);
  EXPECT_EQ(d.at(0, 0, 0), 0);
  EXPECT_EQ(d.at(1, 0, 0), 255);
}

TEST(ImageIo, PngAndPnmRoundTrip) {
  TempDir dir("io");
  for (int ch : {1, 3}) {
    const ImageBuffer img = RandomImage(23, 17, ch, static_cast<uint64_t>(ch));
    for (const char* ext : {".png", ".ppm"}) {
      const auto path = dir.path() / ("img" + std::to_string(ch) + ext);
      WriteImage(path, img);
      EXPECT_EQ(ReadImage(path), img) << path;
    }
  }
  EXPECT_THROW(ReadImage(dir.path() / "missing.png"), Error);
  EXPECT_FALSE(IsSupportedImagePath("x.jpg"));
}

TEST(Resample, ThumbnailDims) {
  EXPECT_EQ(ThumbnailDims(512, 512, 160), (std::pair{160, 160}));
  EXPECT_EQ(ThumbnailDims(2048, 1024, 160), (std::pair{160, 80}));
  EXPECT_EQ(ThumbnailDims(512, 256, 160), (std::pair{160, 80}));
  EXPECT_EQ(ThumbnailDims(100, 60, 160), (std::pair{100, 60}));
}

TEST(Resample, BicubicPreservesConstantsAndIdentity) {
  const ImageBuffer flat(64, 32, 3, SampleDomain::kDisplay, 99);
  for (auto [w, h] : {std::pair{16, 8}, {160, 80}, {7, 3}}) {
    const ImageBuffer out = ResizeBicubic(flat, w, h);
    EXPECT_EQ(out.width(), w);
    EXPECT_EQ(out.height(), h);
    for (int32_t s : out.samples()) ASSERT_EQ(s, 99);
  }
  const ImageBuffer img = TestImage(30, 20, 3, 1);
  EXPECT_EQ(ResizeBicubic(img, 30, 20), img);
}

TEST(Synth, ScenesAreDeterministicAndUseTheRange) {
  const ImageBuffer a = synth::GenerateScene(128, 64, 5);
  EXPECT_EQ(a, synth::GenerateScene(128, 64, 5));
  EXPECT_NE(a, synth::GenerateScene(128, 64, 6));
  const auto [lo, hi] = std::minmax_element(a.samples().begin(), a.samples().end());
  EXPECT_LE(*lo, 10);
  EXPECT_GE(*hi, 245);
}

TEST(Synth, DcShiftsApplyFromThePointOnward) {
  const ImageBuffer base(32, 16, 3, SampleDomain::kDisplay, 50);
  const std::vector<synth::PlantedPoint> points{{8, 16, {10, -20, 30}}};
  const ImageBuffer out = synth::ApplyDcShifts(base, points);
  EXPECT_EQ(out.domain(), SampleDomain::kWorking);
  EXPECT_EQ(out.at(15, 15, 0), 50);  // block (1, 1)
  EXPECT_EQ(out.at(16, 8, 0), 60);   // block (1, 2)
  EXPECT_EQ(out.at(16, 8, 1), 30);
  EXPECT_EQ(out.at(31, 0, 2), 50);   // row above
}

TEST(Synth, SegmentCasesRespectTheirContract) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const synth::SegmentCase c = synth::MakeSegmentCase(256, 128, seed);
    ASSERT_GE(c.points.size(), 1u);
    ASSERT_LE(c.points.size(), 3u);
    for (size_t i = 0; i < c.points.size(); ++i) {
      const auto& p = c.points[i];
      EXPECT_GE(p.h, 8);
      EXPECT_LE(p.h, 128 - 16);
      EXPECT_EQ(p.h % 8, 0);
      EXPECT_EQ(p.v % 8, 0);
      for (int o : p.offset) EXPECT_GE(std::abs(o), 40);
      if (i > 0) {
        EXPECT_GE(p.h - c.points[i - 1].h, 24);
      }
    }
  }
}

TEST(Synth, ShiftCasesRoundTrip) {
  const synth::ShiftCase c = synth::MakeShiftCase(128, 64, 3);
  EXPECT_EQ(c.shifts[0], 0);
  std::vector<int> back(c.shifts.size());
  for (size_t r = 0; r < back.size(); ++r) back[r] = -c.shifts[r];
  EXPECT_EQ(synth::ShiftBlockRows(c.shifted, back), c.original);
}

}  // namespace
}  // namespace bitsalvage
