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

#include "bitsalvage/common/resample.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bitsalvage/common/error.h"

namespace bitsalvage {
namespace {

double Cubic(double x) {
  constexpr double a = -0.5;
  x = std::fabs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
  return 0.0;
}

struct Tap {
  int first = 0;
  std::vector<double> weights;
};

// Precomputes normalized filter taps for every output coordinate.
std::vector<Tap> BuildTaps(int in_size, int out_size) {
  const double scale = static_cast<double>(out_size) / in_size;
  const double support_scale = scale < 1.0 ? 1.0 / scale : 1.0;
  const double radius = 2.0 * support_scale;
  std::vector<Tap> taps(out_size);
  for (int o = 0; o < out_size; ++o) {
    const double center = (o + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::floor(center - radius)) + 1;
    const int last = static_cast<int>(std::floor(center + radius));
    Tap& tap = taps[o];
    tap.first = first;
    double sum = 0.0;
    for (int i = first; i <= last; ++i) {
      const double w = Cubic((i - center) / support_scale);
      tap.weights.push_back(w);
      sum += w;
    }
    for (double& w : tap.weights) w /= sum;
  }
  return taps;
}

}  // namespace

ImageBuffer ResizeBicubic(const ImageBuffer& src, int out_width,
                          int out_height) {
  if (out_width < 1 || out_height < 1 || src.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bad resize target");
  }
  const int channels = src.channels();
  const auto xtaps = BuildTaps(src.width(), out_width);
  const auto ytaps = BuildTaps(src.height(), out_height);

  // Horizontal pass into a float buffer, then vertical pass.
  std::vector<double> mid(static_cast<size_t>(out_width) * src.height() *
                          channels);
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < out_width; ++x) {
      const Tap& tap = xtaps[x];
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (size_t k = 0; k < tap.weights.size(); ++k) {
          const int sx = std::clamp(tap.first + static_cast<int>(k), 0,
                                    src.width() - 1);
          acc += tap.weights[k] * src.at(sx, y, c);
        }
        mid[(static_cast<size_t>(y) * out_width + x) * channels + c] = acc;
      }
    }
  }
  ImageBuffer out(out_width, out_height, channels);
  for (int y = 0; y < out_height; ++y) {
    const Tap& tap = ytaps[y];
    for (int x = 0; x < out_width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (size_t k = 0; k < tap.weights.size(); ++k) {
          const int sy = std::clamp(tap.first + static_cast<int>(k), 0,
                                    src.height() - 1);
          acc += tap.weights[k] *
                 mid[(static_cast<size_t>(sy) * out_width + x) * channels + c];
        }
        out.at(x, y, c) = ClampSample(RoundHalfAway(acc));
      }
    }
  }
  return out;
}

std::pair<int, int> ThumbnailDims(int width, int height, int max_side) {
  const int longer = std::max(width, height);
  if (longer <= max_side) return {width, height};
  const double scale = static_cast<double>(max_side) / longer;
  const int w = std::max(1, RoundHalfAway(width * scale));
  const int h = std::max(1, RoundHalfAway(height * scale));
  return {w, h};
}

}  // namespace bitsalvage
