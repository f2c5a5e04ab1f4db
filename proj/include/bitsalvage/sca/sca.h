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

#ifndef BITSALVAGE_SCA_SCA_H_
#define BITSALVAGE_SCA_SCA_H_

#include <array>
#include <optional>
#include <vector>

#include "bitsalvage/common/image.h"
#include "json.hpp"

// Training-free self-compensation and alignment of robust-decoder output.
//
// A corrupted scan decodes into runs of blocks ("segments") that share one
// wrong DC offset per channel, and block rows that may be circularly shifted.
// Segments are found from abrupt changes across horizontal block seams,
// re-centered per channel, then block rows are re-aligned by seam matching.
//
// Row and seam conventions: row_ed(y) compares pixel rows y and y + 1. A
// segment point (h, v) has h and v on the 8-pixel block grid and means the
// new segment starts at block (v / 8, h / 8) in raster order.
namespace bitsalvage::sca {

struct SegmentPoint {
  int h = 0;
  int v = 0;
  bool operator==(const SegmentPoint&) const = default;
  auto operator<=>(const SegmentPoint&) const = default;
};

struct Segment {
  int begin_block = 0;  // raster block index, inclusive
  int end_block = 0;    // exclusive
  std::array<double, 3> color_offset{};  // per-channel mean removed
};

struct SegmentMap {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<SegmentPoint> points;  // sorted in raster order
  std::vector<Segment> segments;     // partition of [0, blocks_x * blocks_y)
  std::vector<int> row_shifts;       // per block row, empty if not aligned
};

nlohmann::json ToJson(const SegmentMap& map);

// Seam similarity between pixel rows y and y + 1: the RGB Euclidean distance
// of the two rows divided by the image width. Throws on y out of range.
double RowEd(const ImageBuffer& image, int y);

// Seam similarity for a split column v at block boundary h (multiple of 8):
// columns >= v use the seam above pixel row h, columns < v the seam above
// row h + 8. Seams outside the image contribute nothing.
double SplitEd(const ImageBuffer& image, int h, int v);

// |SplitEd(h + 8, v) - SplitEd(h, v)|, peaking where the segment starting
// in block row h / 8 begins.
double Ced(const ImageBuffer& image, int h, int v);

// Ced(image, h, v) for v = 0, 8, 16, ... up to the width, in O(width).
std::vector<double> CedProfile(const ImageBuffer& image, int h);

enum class CandidateRule {
  // Seam similarity divided by the RMS similarity of the within-block rows
  // of the two block rows it separates. DC shifts only change block seams,
  // so this ratio stays near 1 on intact content whatever its texture.
  // Flags ratios above the threshold.
  kLocalRatio,
  // Modified z-score 0.6745 * (ED - median) / MAD over all block seams
  // above the threshold; falls back to the mean absolute deviation when
  // MAD is zero.
  kRobustZ,
  // ED above mean + threshold * standard deviation over all block seams.
  kMeanStd,
};

double DefaultThreshold(CandidateRule rule);

struct DetectOptions {
  CandidateRule rule = CandidateRule::kLocalRatio;
  std::optional<double> threshold;  // DefaultThreshold(rule) when unset
};

// Per block boundary h = 8, 16, ...: the statistic the rule thresholds.
std::vector<double> SeamScores(const ImageBuffer& image, CandidateRule rule);

// Block boundaries h = 8, 16, ... flagged by the candidate rule. Sorted
// ascending. Images shorter than 16 rows have none.
std::vector<int> DetectHorizontalCandidates(const ImageBuffer& image,
                                            const DetectOptions& options = {});

// Horizontal candidates, then for each the split column maximising CED over
// the candidate's block row and the row above. At most one point per block
// row. Segment offsets are left zero.
SegmentMap DetectSegments(const ImageBuffer& image,
                          const DetectOptions& options = {});

// Builds the segment partition from points (points at block 0 are dropped).
SegmentMap SegmentsFromPoints(int width, int height,
                              std::vector<SegmentPoint> points);

// Per segment and channel mean over the segment's pixels.
std::vector<std::array<double, 3>> SegmentMeans(const ImageBuffer& image,
                                                const SegmentMap& map);

inline constexpr double kClipLimit = 150.0;

// Removes each segment's per-channel mean, clips to [-150, 150], then
// rescales the whole image jointly (all channels) to [0, 255]. A constant
// result maps to 128. Output is display domain.
ImageBuffer NormalizeSegments(const ImageBuffer& image, const SegmentMap& map);

struct Alignment {
  ImageBuffer image;
  std::vector<int> row_shifts;  // blocks moved right; row 0 is the anchor
};

// Circularly shifts each full block row (top to bottom) by the block count
// that minimises the seam similarity against the already-aligned row above.
// Ties prefer the smallest |shift|, then the leftward one. Pixels outside
// the full-block area are left in place.
Alignment AlignBlocks(const ImageBuffer& image);

struct ScaOptions {
  DetectOptions detect;
  bool segments = true;  // false: treat the image as one segment
  bool align = true;
};

struct ScaResult {
  ImageBuffer image;       // final, display domain
  ImageBuffer normalized;  // before alignment
  SegmentMap map;
};

// DetectSegments, NormalizeSegments, AlignBlocks. Input is the working-domain
// robust decode (display input is accepted too).
ScaResult RunSca(const ImageBuffer& image, const ScaOptions& options = {});

}  // namespace bitsalvage::sca

#endif  // BITSALVAGE_SCA_SCA_H_
