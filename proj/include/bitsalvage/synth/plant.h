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

#ifndef BITSALVAGE_SYNTH_PLANT_H_
#define BITSALVAGE_SYNTH_PLANT_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bitsalvage/common/image.h"

// Known-truth damage for exercising segment detection and block alignment.
namespace bitsalvage::synth {

// Pixel coordinates of the first block of a new segment (multiples of 8).
struct PlantedPoint {
  int h = 0;
  int v = 0;
  std::array<int, 3> offset{};  // added to this and every later block
  bool operator==(const PlantedPoint&) const = default;
};

// Adds each point's offset to all 8x8 blocks from its block onward in raster
// order, the way a wrong DC delta propagates. Output is working domain.
ImageBuffer ApplyDcShifts(const ImageBuffer& base,
                          std::span<const PlantedPoint> points);

// Circularly moves full block row r right by shifts[r] blocks (negative:
// left). Pixels outside the full-block area are untouched.
ImageBuffer ShiftBlockRows(const ImageBuffer& base, std::span<const int> shifts);

struct SegmentCase {
  ImageBuffer base;                   // scene before planting
  ImageBuffer image;                  // working domain
  std::vector<PlantedPoint> points;   // raster order
};

// A natural-looking scene of the given size (multiples of 8) with 1 to
// max_points planted points. Points sit in block rows 1 .. rows - 2, at
// least three block rows apart (closer points share the seams a split
// column is measured on), at any block column; every channel offset has
// magnitude in [min_shift, max_shift].
SegmentCase MakeSegmentCase(int width, int height, uint64_t seed,
                            int max_points = 3, int min_shift = 40,
                            int max_shift = 120);

struct ShiftCase {
  ImageBuffer original;
  ImageBuffer shifted;
  std::vector<int> shifts;  // per block row; row 0 is never shifted
};

// A scene whose block rows 1.. are circularly shifted by up to max_shift
// blocks in either direction.
ShiftCase MakeShiftCase(int width, int height, uint64_t seed, int max_shift = 4);

}  // namespace bitsalvage::synth

#endif  // BITSALVAGE_SYNTH_PLANT_H_
