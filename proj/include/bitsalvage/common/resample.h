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

#ifndef BITSALVAGE_COMMON_RESAMPLE_H_
#define BITSALVAGE_COMMON_RESAMPLE_H_

#include <utility>

#include "bitsalvage/common/image.h"

namespace bitsalvage {

// Separable bicubic resampling (Keys kernel, a = -0.5) with pixel-center
// alignment. When shrinking, the kernel support is widened by the scale
// factor so the result is antialiased, matching imresize-style bicubic.
// Output is display domain, rounded and clamped.
ImageBuffer ResizeBicubic(const ImageBuffer& src, int out_width,
                          int out_height);

// Aspect-preserving dimensions whose longer side equals max_side. Images
// already within the bound keep their size.
std::pair<int, int> ThumbnailDims(int width, int height, int max_side);

}  // namespace bitsalvage

#endif  // BITSALVAGE_COMMON_RESAMPLE_H_
