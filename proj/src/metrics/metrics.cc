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

#include "bitsalvage/metrics/metrics.h"

#include <cmath>
#include <limits>

#include "bitsalvage/common/error.h"

namespace bitsalvage::metrics {
namespace {

void CheckPair(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.channels() != b.channels() || a.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "images differ in size or are empty");
  }
}

std::vector<double> GaussianKernel(double sigma, int radius) {
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<size_t>(i + radius)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable filtering restricted to positions where the full window fits.
// Output is (w - 2r) x (h - 2r).
std::vector<double> FilterValid(const std::vector<double>& in, int w, int h,
                                const std::vector<double>& k, int r) {
  const int ow = w - 2 * r, oh = h - 2 * r;
  std::vector<double> horiz(static_cast<size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    const double* src = &in[static_cast<size_t>(y) * w];
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t <= 2 * r; ++t) s += k[t] * src[x + t];
      horiz[static_cast<size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t <= 2 * r; ++t) s += k[t] * horiz[static_cast<size_t>(y + t) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

std::vector<double> Luma(const ImageBuffer& image) {
  const size_t n = static_cast<size_t>(image.width()) * image.height();
  std::vector<double> y(n);
  const auto s = image.samples();
  if (image.channels() == 1) {
    for (size_t i = 0; i < n; ++i) y[i] = s[i];
    return y;
  }
  for (size_t i = 0; i < n; ++i) {
    y[i] = 0.299 * s[3 * i] + 0.587 * s[3 * i + 1] + 0.114 * s[3 * i + 2];
  }
  return y;
}

double PsnrY(const ImageBuffer& a, const ImageBuffer& b) {
  CheckPair(a, b);
  const auto ya = Luma(a), yb = Luma(b);
  double se = 0.0;
  for (size_t i = 0; i < ya.size(); ++i) se += (ya[i] - yb[i]) * (ya[i] - yb[i]);
  const double mse = se / static_cast<double>(ya.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double SsimY(const ImageBuffer& a, const ImageBuffer& b, const SsimOptions& options) {
  CheckPair(a, b);
  const int w = a.width(), h = a.height(), r = options.radius;
  if (w < 2 * r + 1 || h < 2 * r + 1) {
    throw Error(ErrorCode::kInvalidArgument, "image smaller than the SSIM window");
  }
  const auto x = Luma(a), y = Luma(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = GaussianKernel(options.sigma, r);
  const auto ux = FilterValid(x, w, h, k, r), uy = FilterValid(y, w, h, k, r);
  const auto uxx = FilterValid(xx, w, h, k, r), uyy = FilterValid(yy, w, h, k, r);
  const auto uxy = FilterValid(xy, w, h, k, r);
  const double c1 = std::pow(options.k1 * options.data_range, 2);
  const double c2 = std::pow(options.k2 * options.data_range, 2);
  double total = 0.0;
  for (size_t i = 0; i < ux.size(); ++i) {
    const double vx = uxx[i] - ux[i] * ux[i];
    const double vy = uyy[i] - uy[i] * uy[i];
    const double cov = uxy[i] - ux[i] * uy[i];
    total += ((2 * ux[i] * uy[i] + c1) * (2 * cov + c2)) /
             ((ux[i] * ux[i] + uy[i] * uy[i] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(ux.size());
}

Quality Compare(const ImageBuffer& reference, const ImageBuffer& test) {
  return {PsnrY(reference, test), SsimY(reference, test)};
}

nlohmann::json ToJson(const Quality& q) {
  nlohmann::json j;
  j["psnr_y"] = std::isfinite(q.psnr_y) ? nlohmann::json(q.psnr_y) : nlohmann::json(nullptr);
  j["ssim_y"] = q.ssim_y;
  return j;
}

}  // namespace bitsalvage::metrics
