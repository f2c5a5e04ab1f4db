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

#include "bitsalvage/synth/scene.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/prng.h"

namespace bitsalvage::synth {
namespace {

using Rgb = std::array<double, 3>;

class ValueNoise {
 public:
  ValueNoise(uint64_t seed, int cells_x, int cells_y)
      : cells_x_(cells_x), cells_y_(cells_y),
        lattice_(static_cast<size_t>((cells_x + 1) * (cells_y + 1))) {
    SplitMix64 rng(seed);
    for (double& v : lattice_) v = rng.NextUnit() * 2.0 - 1.0;
  }

  // u, v in [0, 1].
  double Sample(double u, double v) const {
    const double fx = u * cells_x_, fy = v * cells_y_;
    const int x0 = std::clamp(static_cast<int>(fx), 0, cells_x_ - 1);
    const int y0 = std::clamp(static_cast<int>(fy), 0, cells_y_ - 1);
    const double tx = Smooth(fx - x0), ty = Smooth(fy - y0);
    const double a = At(x0, y0), b = At(x0 + 1, y0);
    const double c = At(x0, y0 + 1), d = At(x0 + 1, y0 + 1);
    return (a + (b - a) * tx) * (1 - ty) + (c + (d - c) * tx) * ty;
  }

 private:
  static double Smooth(double t) { return t * t * (3 - 2 * t); }
  double At(int x, int y) const {
    return lattice_[static_cast<size_t>(y * (cells_x_ + 1) + x)];
  }

  int cells_x_, cells_y_;
  std::vector<double> lattice_;
};

struct Shape {
  enum Kind { kEllipse, kRect, kBand } kind;
  double cx, cy, rx, ry, angle, softness;
  Rgb color;
  double opacity;
  double stripe_freq;  // 0: flat
};

Rgb RandomColor(SplitMix64& rng) {
  return {rng.NextUnit() * 255, rng.NextUnit() * 255, rng.NextUnit() * 255};
}

// Signed coverage in [0, 1] of a shape at (x, y).
double Coverage(const Shape& s, double x, double y) {
  const double c = std::cos(s.angle), sn = std::sin(s.angle);
  const double dx = x - s.cx, dy = y - s.cy;
  const double lx = (dx * c + dy * sn) / s.rx;
  const double ly = (-dx * sn + dy * c) / s.ry;
  double dist = 0;  // <1 inside
  switch (s.kind) {
    case Shape::kEllipse: dist = std::sqrt(lx * lx + ly * ly); break;
    case Shape::kRect: dist = std::max(std::abs(lx), std::abs(ly)); break;
    case Shape::kBand: dist = std::abs(ly); break;
  }
  const double edge = s.softness / std::min(s.rx, s.ry);
  return std::clamp((1.0 - dist) / std::max(edge, 1e-6) + 0.5, 0.0, 1.0);
}

}  // namespace

ImageBuffer GenerateScene(int width, int height, uint64_t seed) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "scene size must be positive");
  }
  SplitMix64 rng(seed ^ 0x5CE4E5CE4E5CE4E5ULL);
  const Rgb top = RandomColor(rng), bottom = RandomColor(rng);
  const double tilt = rng.NextUnit() - 0.5;

  std::vector<ValueNoise> octaves;
  for (int o = 0; o < 5; ++o) {
    octaves.emplace_back(rng.Next(), 3 << o, 2 << o);
  }
  const ValueNoise tint(rng.Next(), 4, 3);

  std::vector<Shape> shapes(static_cast<size_t>(rng.NextInRange(5, 11)));
  const double scale = std::min(width, height);
  for (Shape& s : shapes) {
    s.kind = static_cast<Shape::Kind>(rng.NextBelow(3));
    s.cx = rng.NextUnit() * width;
    s.cy = rng.NextUnit() * height;
    s.rx = scale * (0.05 + 0.35 * rng.NextUnit());
    s.ry = scale * (0.05 + 0.35 * rng.NextUnit());
    s.angle = rng.NextUnit() * std::numbers::pi;
    s.softness = 0.5 + 6.0 * rng.NextUnit();
    s.color = RandomColor(rng);
    s.opacity = 0.5 + 0.5 * rng.NextUnit();
    s.stripe_freq = rng.NextBelow(3) == 0 ? 0.05 + 0.4 * rng.NextUnit() : 0.0;
  }

  const size_t n = static_cast<size_t>(width) * height * 3;
  std::vector<double> canvas(n);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) / width, v = (y + 0.5) / height;
      const double t = std::clamp(v + tilt * (u - 0.5), 0.0, 1.0);
      double fractal = 0, amp = 1;
      for (const ValueNoise& o : octaves) {
        fractal += amp * o.Sample(u, v);
        amp *= 0.55;
      }
      const double warm = tint.Sample(u, v);
      Rgb px;
      for (int c = 0; c < 3; ++c) {
        px[c] = top[c] + (bottom[c] - top[c]) * t + 45.0 * fractal +
                18.0 * warm * (c == 0 ? 1 : c == 2 ? -1 : 0);
      }
      for (const Shape& s : shapes) {
        const double cov = Coverage(s, x + 0.5, y + 0.5) * s.opacity;
        if (cov <= 0) continue;
        const double stripe =
            s.stripe_freq > 0 ? 30.0 * std::sin((x * std::cos(s.angle) + y * std::sin(s.angle)) *
                                                 s.stripe_freq * 2 * std::numbers::pi)
                              : 0.0;
        for (int c = 0; c < 3; ++c) {
          const double shade = s.color[c] + stripe + 25.0 * fractal;
          px[c] = px[c] * (1 - cov) + shade * cov;
        }
      }
      const size_t i = (static_cast<size_t>(y) * width + x) * 3;
      const double grain = (rng.NextUnit() - 0.5) * 14.0;
      for (int c = 0; c < 3; ++c) {
        canvas[i + c] = px[c] + grain + (rng.NextUnit() - 0.5) * 6.0;
      }
    }
  }

  // Stretch jointly to the full range, ignoring the outer 0.5% tails.
  std::vector<double> sorted = canvas;
  const size_t lo_i = n / 200, hi_i = n - 1 - n / 200;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(lo_i), sorted.end());
  const double lo = sorted[lo_i];
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(hi_i), sorted.end());
  const double hi = sorted[hi_i];
  const double gain = hi > lo ? 255.0 / (hi - lo) : 1.0;

  ImageBuffer image(width, height, 3, SampleDomain::kDisplay);
  auto out = image.samples();
  for (size_t i = 0; i < n; ++i) {
    out[i] = ClampSample(RoundHalfAway((canvas[i] - lo) * gain));
  }
  return image;
}

}  // namespace bitsalvage::synth
