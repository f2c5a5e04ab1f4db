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

#include "bitsalvage/jpeg/dct.h"

#include <cmath>
#include <numbers>

#include "bitsalvage/common/image.h"

namespace bitsalvage::jpeg {
namespace {

// kBasis[u][x] = C(u)/2 * cos((2x+1) u pi / 16)
struct Basis {
  double v[8][8];
  Basis() {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      for (int x = 0; x < 8; ++x) {
        v[u][x] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const Basis& GetBasis() {
  static const Basis basis;
  return basis;
}

}  // namespace

std::array<int32_t, 64> InverseDct(const std::array<double, 64>& coefficients) {
  const Basis& b = GetBasis();
  double tmp[64];
  // Rows: tmp[v][x] = sum_u basis[u][x] * F[v][u]
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int u = 0; u < 8; ++u) acc += b.v[u][x] * coefficients[v * 8 + u];
      tmp[v * 8 + x] = acc;
    }
  }
  std::array<int32_t, 64> out{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) acc += b.v[v][y] * tmp[v * 8 + x];
      out[y * 8 + x] = RoundHalfAway(acc + 128.0);
    }
  }
  return out;
}

std::array<double, 64> ForwardDct(const std::array<double, 64>& samples) {
  const Basis& b = GetBasis();
  double tmp[64];
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += b.v[u][x] * samples[y * 8 + x];
      tmp[y * 8 + u] = acc;
    }
  }
  std::array<double, 64> out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += b.v[v][y] * tmp[y * 8 + u];
      out[v * 8 + u] = acc;
    }
  }
  return out;
}

}  // namespace bitsalvage::jpeg
