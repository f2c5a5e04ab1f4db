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

#include "bitsalvage/synth/plant.h"

#include <algorithm>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/prng.h"
#include "bitsalvage/synth/scene.h"

namespace bitsalvage::synth {
namespace {

constexpr int kBlock = 8;

void CheckBlockDims(int width, int height) {
  if (width < 2 * kBlock || height < 4 * kBlock || width % kBlock || height % kBlock) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic cases need multiple-of-8 sizes of at least 16x32");
  }
}

}  // namespace

ImageBuffer ApplyDcShifts(const ImageBuffer& base, std::span<const PlantedPoint> points) {
  const int bx = (base.width() + kBlock - 1) / kBlock;
  const int ch = base.channels();
  std::vector<PlantedPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const PlantedPoint& a, const PlantedPoint& b) {
    return a.h != b.h ? a.h < b.h : a.v < b.v;
  });
  ImageBuffer out(base.width(), base.height(), ch, SampleDomain::kWorking);
  std::copy(base.samples().begin(), base.samples().end(), out.samples().begin());
  for (int y = 0; y < base.height(); ++y) {
    auto row = out.row(y);
    for (int x = 0; x < base.width(); ++x) {
      const int block = (y / kBlock) * bx + x / kBlock;
      for (const PlantedPoint& p : sorted) {
        if ((p.h / kBlock) * bx + p.v / kBlock > block) break;
        for (int c = 0; c < ch; ++c) row[x * ch + c] += p.offset[c];
      }
    }
  }
  return out;
}

ImageBuffer ShiftBlockRows(const ImageBuffer& base, std::span<const int> shifts) {
  const int bw = base.width() / kBlock;
  const int ch = base.channels();
  const int span = bw * kBlock;
  ImageBuffer out = base;
  for (size_t r = 0; r < shifts.size() && static_cast<int>(r) < base.height() / kBlock; ++r) {
    const int offset = ((shifts[r] * kBlock) % span + span) % span;
    if (offset == 0) continue;
    for (int y = static_cast<int>(r) * kBlock; y < static_cast<int>(r + 1) * kBlock; ++y) {
      const auto src = base.row(y);
      auto dst = out.row(y);
      for (int x = 0; x < span; ++x) {
        const int from = (x - offset + span) % span;
        for (int c = 0; c < ch; ++c) dst[x * ch + c] = src[from * ch + c];
      }
    }
  }
  return out;
}

SegmentCase MakeSegmentCase(int width, int height, uint64_t seed, int max_points,
                            int min_shift, int max_shift) {
  CheckBlockDims(width, height);
  SplitMix64 rng(seed);
  const int rows = height / kBlock, cols = width / kBlock;
  // Rows 1 .. rows - 2, pairwise at least two apart.
  const int count = static_cast<int>(rng.NextInRange(1, std::max(1, max_points)));
  std::vector<int> chosen;
  for (int attempt = 0; static_cast<int>(chosen.size()) < count && attempt < 1000; ++attempt) {
    const int r = static_cast<int>(rng.NextInRange(1, rows - 2));
    if (std::all_of(chosen.begin(), chosen.end(), [r](int o) { return std::abs(o - r) >= 3; })) {
      chosen.push_back(r);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  SegmentCase out;
  for (int r : chosen) {
    PlantedPoint p;
    p.h = r * kBlock;
    p.v = static_cast<int>(rng.NextBelow(static_cast<uint64_t>(cols))) * kBlock;
    for (int& o : p.offset) {
      o = static_cast<int>(rng.NextInRange(min_shift, max_shift));
      if (rng.NextBelow(2)) o = -o;
    }
    out.points.push_back(p);
  }
  out.base = GenerateScene(width, height, rng.Next());
  out.image = ApplyDcShifts(out.base, out.points);
  return out;
}

ShiftCase MakeShiftCase(int width, int height, uint64_t seed, int max_shift) {
  CheckBlockDims(width, height);
  SplitMix64 rng(seed);
  ShiftCase out;
  out.original = GenerateScene(width, height, rng.Next());
  const int bw = width / kBlock;
  const int limit = std::min(max_shift, (bw - 1) / 2);  // keep shifts unambiguous
  out.shifts.assign(static_cast<size_t>(height / kBlock), 0);
  for (size_t r = 1; r < out.shifts.size(); ++r) {
    out.shifts[r] = static_cast<int>(rng.NextInRange(-limit, limit));
  }
  out.shifted = ShiftBlockRows(out.original, out.shifts);
  return out;
}

}  // namespace bitsalvage::synth
