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

#include "bitsalvage/sca/sca.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "bitsalvage/common/error.h"

namespace bitsalvage::sca {
namespace {

constexpr int kBlock = 8;

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

// Per-column squared RGB difference between rows y and y + 1; all zero when
// either row is outside the image.
std::vector<double> SeamColumns(const ImageBuffer& image, int y) {
  const int w = image.width();
  const int ch = image.channels();
  std::vector<double> out(static_cast<size_t>(w), 0.0);
  if (y < 0 || y + 1 >= image.height()) return out;
  const auto top = image.row(y);
  const auto bottom = image.row(y + 1);
  for (int x = 0; x < w; ++x) {
    double sum = 0.0;
    for (int c = 0; c < ch; ++c) {
      const double d = static_cast<double>(bottom[x * ch + c]) - top[x * ch + c];
      sum += d * d;
    }
    out[static_cast<size_t>(x)] = sum;
  }
  return out;
}

double Sum(const std::vector<double>& v, size_t begin, size_t end) {
  double s = 0.0;
  for (size_t i = begin; i < end; ++i) s += v[i];
  return s;
}

double SplitEdUnchecked(const ImageBuffer& image, int h, int v) {
  const auto upper = SeamColumns(image, h - 1);
  const auto lower = SeamColumns(image, h + kBlock - 1);
  const size_t sv = static_cast<size_t>(v);
  const double total = Sum(upper, sv, upper.size()) + Sum(lower, 0, sv);
  return std::sqrt(total) / image.width();
}

void CheckSplit(const ImageBuffer& image, int h, int v) {
  if (h < 0 || h >= image.height() || h % kBlock != 0 || v < 0 ||
      v > image.width() || v % kBlock != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "split point (" + std::to_string(h) + ", " + std::to_string(v) +
                    ") is off the block grid or outside the image");
  }
}

double Median(std::vector<double> v) {
  const size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

// Threshold above which a seam score is flagged.
double Threshold(const std::vector<double>& x, CandidateRule rule, double k) {
  if (rule == CandidateRule::kLocalRatio) return k;
  const double n = static_cast<double>(x.size());
  if (rule == CandidateRule::kMeanStd) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    return mean + k * std::sqrt(var / n);
  }
  const double median = Median(x);
  std::vector<double> dev(x.size());
  double mean_dev = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    dev[i] = std::abs(x[i] - median);
    mean_dev += dev[i];
  }
  mean_dev /= n;
  // Both scales estimate the standard deviation of a normal sample.
  double scale = Median(dev) / 0.6745;
  if (scale == 0.0) scale = 1.253314 * mean_dev;
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return median + k * scale;
}

}  // namespace

nlohmann::json ToJson(const SegmentMap& map) {
  nlohmann::json points = nlohmann::json::array();
  for (const SegmentPoint& p : map.points) points.push_back({{"h", p.h}, {"v", p.v}});
  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : map.segments) {
    segments.push_back({{"begin_block", s.begin_block},
                        {"end_block", s.end_block},
                        {"color_offset", s.color_offset}});
  }
  return {{"blocks_x", map.blocks_x},
          {"blocks_y", map.blocks_y},
          {"points", points},
          {"segments", segments},
          {"row_shifts", map.row_shifts}};
}

double RowEd(const ImageBuffer& image, int y) {
  if (y < 0 || y + 1 >= image.height()) {
    throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(y) + " has no row below it");
  }
  const auto cols = SeamColumns(image, y);
  return std::sqrt(Sum(cols, 0, cols.size())) / image.width();
}

double SplitEd(const ImageBuffer& image, int h, int v) {
  CheckSplit(image, h, v);
  return SplitEdUnchecked(image, h, v);
}

double Ced(const ImageBuffer& image, int h, int v) {
  CheckSplit(image, h, v);
  return std::abs(SplitEdUnchecked(image, h + kBlock, v) - SplitEdUnchecked(image, h, v));
}

namespace {

// SplitEd(h, v) - SplitEd(h + 8, v) for v = 0, 8, ... up to the width.
std::vector<double> SignedCedProfile(const ImageBuffer& image, int h) {
  CheckSplit(image, h, 0);
  const int w = image.width();
  const auto a = SeamColumns(image, h - 1);
  const auto b = SeamColumns(image, h + kBlock - 1);
  const auto c = SeamColumns(image, h + 2 * kBlock - 1);
  // prefix[i] = sum of the first i columns.
  auto prefix = [w](const std::vector<double>& v) {
    std::vector<double> p(static_cast<size_t>(w) + 1, 0.0);
    for (int i = 0; i < w; ++i) p[i + 1] = p[i] + v[i];
    return p;
  };
  const auto pa = prefix(a), pb = prefix(b), pc = prefix(c);
  std::vector<double> out;
  for (int v = 0; v <= w; v += kBlock) {
    const double upper = std::sqrt((pa[w] - pa[v]) + pb[v]) / w;
    const double lower = std::sqrt((pb[w] - pb[v]) + pc[v]) / w;
    out.push_back(upper - lower);
  }
  return out;
}

}  // namespace

std::vector<double> CedProfile(const ImageBuffer& image, int h) {
  auto out = SignedCedProfile(image, h);
  for (double& v : out) v = std::abs(v);
  return out;
}

double DefaultThreshold(CandidateRule rule) {
  switch (rule) {
    case CandidateRule::kLocalRatio: return 2.0;
    case CandidateRule::kRobustZ: return 3.5;
    case CandidateRule::kMeanStd: return 2.0;
  }
  return 0.0;
}

std::vector<double> SeamScores(const ImageBuffer& image, CandidateRule rule) {
  const int height = image.height();
  const int rows = CeilDiv(height, kBlock);
  std::vector<double> ed(static_cast<size_t>(std::max(height - 1, 0)));
  for (int y = 0; y + 1 < height; ++y) ed[static_cast<size_t>(y)] = RowEd(image, y);
  std::vector<double> scores;
  for (int r = 1; r < rows; ++r) {
    const int seam = r * kBlock - 1;
    if (rule != CandidateRule::kLocalRatio) {
      scores.push_back(ed[static_cast<size_t>(seam)]);
      continue;
    }
    double energy = 0.0;
    int n = 0;
    for (int y = seam - (kBlock - 1); y <= seam + kBlock - 1; ++y) {
      if (y == seam || y < 0 || y + 1 >= height) continue;
      energy += ed[static_cast<size_t>(y)] * ed[static_cast<size_t>(y)];
      ++n;
    }
    const double ref = n > 0 ? std::sqrt(energy / n) : 0.0;
    const double value = ed[static_cast<size_t>(seam)];
    if (ref > 0.0) {
      scores.push_back(value / ref);
    } else {
      scores.push_back(value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
  }
  return scores;
}

std::vector<int> DetectHorizontalCandidates(const ImageBuffer& image,
                                            const DetectOptions& options) {
  if (image.height() < 2 * kBlock) return {};
  const auto scores = SeamScores(image, options.rule);
  const double threshold = Threshold(
      scores, options.rule, options.threshold.value_or(DefaultThreshold(options.rule)));
  std::vector<int> out;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > threshold) out.push_back(static_cast<int>(i + 1) * kBlock);
  }
  return out;
}

SegmentMap DetectSegments(const ImageBuffer& image, const DetectOptions& options) {
  const int rows = CeilDiv(image.height(), kBlock);
  const int cols = CeilDiv(image.width(), kBlock);
  struct Best {
    double score;
    int v;
  };
  std::map<int, Best> best_per_row;
  for (int h : DetectHorizontalCandidates(image, options)) {
    const int seam_row = h / kBlock;
    // The seam above row r carries the split point of row r (columns >= v)
    // or of row r - 1 (columns < v); evaluate both and keep the stronger.
    // |CED| peaks equally at a point's row and the row above it; only at
    // the point's own row is the upper split the discontinuous one, so the
    // signed difference picks the row.
    int row = -1, v = 0;
    double score = -std::numeric_limits<double>::infinity();
    for (int r : {seam_row - 1, seam_row}) {
      if (r < 0 || r >= rows) continue;
      const auto profile = SignedCedProfile(image, r * kBlock);
      const auto it = std::max_element(profile.begin(), profile.end());
      if (*it >= score) {
        score = *it;
        row = r;
        v = static_cast<int>(it - profile.begin()) * kBlock;
      }
    }
    if (v / kBlock >= cols) {  // split at the right edge starts the next row
      ++row;
      v = 0;
    }
    if (row >= rows || (row == 0 && v == 0)) continue;
    auto [it, inserted] = best_per_row.try_emplace(row, Best{score, v});
    if (!inserted && score > it->second.score) it->second = {score, v};
  }
  std::vector<SegmentPoint> points;
  for (const auto& [row, b] : best_per_row) points.push_back({row * kBlock, b.v});
  return SegmentsFromPoints(image.width(), image.height(), std::move(points));
}

SegmentMap SegmentsFromPoints(int width, int height, std::vector<SegmentPoint> points) {
  SegmentMap map;
  map.blocks_x = CeilDiv(width, kBlock);
  map.blocks_y = CeilDiv(height, kBlock);
  const int total = map.blocks_x * map.blocks_y;
  std::vector<int> starts;
  for (const SegmentPoint& p : points) {
    if (p.h < 0 || p.h % kBlock != 0 || p.v < 0 || p.v % kBlock != 0) {
      throw Error(ErrorCode::kInvalidArgument, "segment point off the block grid");
    }
    const int block = (p.h / kBlock) * map.blocks_x + p.v / kBlock;
    if (block <= 0 || block >= total || p.v / kBlock >= map.blocks_x) continue;
    starts.push_back(block);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  int begin = 0;
  for (int s : starts) {
    map.points.push_back({(s / map.blocks_x) * kBlock, (s % map.blocks_x) * kBlock});
    map.segments.push_back({begin, s, {}});
    begin = s;
  }
  map.segments.push_back({begin, total, {}});
  return map;
}

namespace {

// Segment index of every block.
std::vector<int> BlockOwners(const SegmentMap& map) {
  std::vector<int> owner(static_cast<size_t>(map.blocks_x) * map.blocks_y, 0);
  for (size_t s = 0; s < map.segments.size(); ++s) {
    for (int b = map.segments[s].begin_block; b < map.segments[s].end_block; ++b) {
      owner[static_cast<size_t>(b)] = static_cast<int>(s);
    }
  }
  return owner;
}

void CheckMap(const ImageBuffer& image, const SegmentMap& map) {
  if (map.blocks_x != CeilDiv(image.width(), kBlock) ||
      map.blocks_y != CeilDiv(image.height(), kBlock) || map.segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "segment map does not match the image");
  }
}

}  // namespace

std::vector<std::array<double, 3>> SegmentMeans(const ImageBuffer& image,
                                                const SegmentMap& map) {
  CheckMap(image, map);
  const auto owner = BlockOwners(map);
  const int ch = image.channels();
  std::vector<std::array<double, 3>> sums(map.segments.size(), {0.0, 0.0, 0.0});
  std::vector<double> counts(map.segments.size(), 0.0);
  for (int y = 0; y < image.height(); ++y) {
    const auto row = image.row(y);
    for (int x = 0; x < image.width(); ++x) {
      const int s = owner[static_cast<size_t>((y / kBlock) * map.blocks_x + x / kBlock)];
      for (int c = 0; c < ch; ++c) sums[s][c] += row[x * ch + c];
      counts[s] += 1.0;
    }
  }
  for (size_t s = 0; s < sums.size(); ++s) {
    for (double& v : sums[s]) v = counts[s] > 0 ? v / counts[s] : 0.0;
  }
  return sums;
}

ImageBuffer NormalizeSegments(const ImageBuffer& image, const SegmentMap& map) {
  const auto means = SegmentMeans(image, map);
  const auto owner = BlockOwners(map);
  const int ch = image.channels();
  std::vector<double> centered(image.samples().size());
  double lo = kClipLimit, hi = -kClipLimit;
  size_t i = 0;
  for (int y = 0; y < image.height(); ++y) {
    const auto row = image.row(y);
    for (int x = 0; x < image.width(); ++x) {
      const int s = owner[static_cast<size_t>((y / kBlock) * map.blocks_x + x / kBlock)];
      for (int c = 0; c < ch; ++c, ++i) {
        const double v = std::clamp(row[x * ch + c] - means[s][c], -kClipLimit, kClipLimit);
        centered[i] = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  ImageBuffer out(image.width(), image.height(), ch, SampleDomain::kDisplay, 128);
  if (hi > lo) {
    auto dst = out.samples();
    const double gain = 255.0 / (hi - lo);
    for (size_t k = 0; k < centered.size(); ++k) {
      dst[k] = ClampSample(RoundHalfAway((centered[k] - lo) * gain));
    }
  }
  return out;
}

Alignment AlignBlocks(const ImageBuffer& image) {
  const int bw = image.width() / kBlock;
  const int bh = image.height() / kBlock;
  const int ch = image.channels();
  Alignment result{image, std::vector<int>(static_cast<size_t>(std::max(bh, 0)), 0)};
  if (bw < 2 || bh < 2) return result;

  // Preference order over distinct circular offsets: 0, -1, +1, -2, +2, ...
  std::vector<int> order{0};
  for (int m = 1; static_cast<int>(order.size()) < bw; ++m) {
    order.push_back(-m);
    if (static_cast<int>(order.size()) < bw && m != bw - m) order.push_back(m);
  }

  const int span = bw * kBlock;
  ImageBuffer& out = result.image;
  for (int r = 1; r < bh; ++r) {
    const auto ref = out.row(r * kBlock - 1);
    const auto cand = image.row(r * kBlock);
    double best = -1.0;
    int best_shift = 0;
    for (int s : order) {
      const int offset = ((s * kBlock) % span + span) % span;
      double ed = 0.0;
      for (int x = 0; x < span; ++x) {
        const int src = (x - offset + span) % span;
        for (int c = 0; c < ch; ++c) {
          const double d = static_cast<double>(ref[x * ch + c]) - cand[src * ch + c];
          ed += d * d;
        }
      }
      if (best < 0.0 || ed < best) {
        best = ed;
        best_shift = s;
      }
    }
    result.row_shifts[static_cast<size_t>(r)] = best_shift;
    if (best_shift == 0) continue;
    const int offset = ((best_shift * kBlock) % span + span) % span;
    for (int y = r * kBlock; y < (r + 1) * kBlock; ++y) {
      const auto src = image.row(y);
      auto dst = out.row(y);
      for (int x = 0; x < span; ++x) {
        const int from = (x - offset + span) % span;
        for (int c = 0; c < ch; ++c) dst[x * ch + c] = src[from * ch + c];
      }
    }
  }
  return result;
}

ScaResult RunSca(const ImageBuffer& image, const ScaOptions& options) {
  ScaResult result;
  result.map = options.segments ? DetectSegments(image, options.detect)
                                : SegmentsFromPoints(image.width(), image.height(), {});
  const auto means = SegmentMeans(image, result.map);
  for (size_t s = 0; s < means.size(); ++s) result.map.segments[s].color_offset = means[s];
  result.normalized = NormalizeSegments(image, result.map);
  if (options.align) {
    Alignment aligned = AlignBlocks(result.normalized);
    result.image = std::move(aligned.image);
    result.map.row_shifts = std::move(aligned.row_shifts);
  } else {
    result.image = result.normalized;
  }
  return result;
}

}  // namespace bitsalvage::sca
