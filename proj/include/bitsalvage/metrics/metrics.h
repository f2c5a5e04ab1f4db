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

#ifndef BITSALVAGE_METRICS_METRICS_H_
#define BITSALVAGE_METRICS_METRICS_H_

#include <vector>

#include "bitsalvage/common/image.h"
#include "json.hpp"

namespace bitsalvage::metrics {

// BT.601 luma (0.299 R + 0.587 G + 0.114 B) as doubles, row-major. Single
// channel images are returned as-is. Samples are taken as given (clamp
// working-domain rasters first).
std::vector<double> Luma(const ImageBuffer& image);

// 10 log10(255^2 / MSE) on luma; +infinity for identical images. Throws
// Error(kInvalidArgument) on size mismatch.
double PsnrY(const ImageBuffer& a, const ImageBuffer& b);

struct SsimOptions {
  double sigma = 1.5;
  int radius = 5;  // 11x11 window
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 255.0;
};

// Mean SSIM on luma with Gaussian-weighted local statistics (population
// variances), averaged over the positions where the whole window fits.
// Images must be at least 2 * radius + 1 pixels in each dimension.
double SsimY(const ImageBuffer& a, const ImageBuffer& b,
             const SsimOptions& options = {});

struct Quality {
  double psnr_y = 0.0;
  double ssim_y = 0.0;
};

Quality Compare(const ImageBuffer& reference, const ImageBuffer& test);

// {"psnr_y": number or null when infinite, "ssim_y": number}
nlohmann::json ToJson(const Quality& q);

}  // namespace bitsalvage::metrics

#endif  // BITSALVAGE_METRICS_METRICS_H_
