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

#include "bitsalvage/jpeg/tables.h"

#include <algorithm>

#include "bitsalvage/common/error.h"

namespace bitsalvage::jpeg {

std::array<uint16_t, 64> ScaleQuantTable(const std::array<uint16_t, 64>& base,
                                         int quality) {
  if (quality < 1 || quality > 100) {
    throw Error(ErrorCode::kInvalidArgument, "quality must be in 1..100");
  }
  const int scale = quality < 50 ? 5000 / quality : 200 - quality * 2;
  std::array<uint16_t, 64> out{};
  for (int i = 0; i < 64; ++i) {
    const int q = (base[i] * scale + 50) / 100;
    out[i] = static_cast<uint16_t>(std::clamp(q, 1, 255));
  }
  return out;
}

}  // namespace bitsalvage::jpeg
