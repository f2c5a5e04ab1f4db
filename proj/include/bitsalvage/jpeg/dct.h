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

#ifndef BITSALVAGE_JPEG_DCT_H_
#define BITSALVAGE_JPEG_DCT_H_

#include <array>
#include <cstdint>

namespace bitsalvage::jpeg {

// Exact floating-point separable 8x8 DCT pair (natural order, row-major).
// InverseDct returns level-shifted samples (+128) rounded half away from
// zero and left unclamped.
std::array<int32_t, 64> InverseDct(const std::array<double, 64>& coefficients);
std::array<double, 64> ForwardDct(const std::array<double, 64>& samples);

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_DCT_H_
