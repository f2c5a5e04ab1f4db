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

#include "bitsalvage/jpeg/huffman.h"

#include <algorithm>

#include "bitsalvage/common/error.h"

namespace bitsalvage::jpeg {

HuffmanTable::HuffmanTable(std::span<const uint8_t, 16> counts,
                           std::span<const uint8_t> symbols) {
  std::copy(counts.begin(), counts.end(), counts_.begin());
  size_t total = 0;
  for (uint8_t c : counts_) total += c;
  if (total > 256 || total != symbols.size()) {
    throw Error(ErrorCode::kMalformedSegment,
                "Huffman symbol count does not match code lengths");
  }
  symbols_.assign(symbols.begin(), symbols.end());

  // Generate canonical codes (Annex C). The all-ones code of any length is
  // reserved, so code must stay strictly below 2^length after each length.
  int32_t code = 0;
  int32_t k = 0;
  for (int length = 1; length <= 16; ++length) {
    const int n = counts_[length - 1];
    if (n == 0) {
      max_code_[length] = -1;
    } else {
      val_offset_[length] = k;
      min_code_[length] = code;
      for (int i = 0; i < n; ++i, ++k, ++code) {
        ehufco_[symbols_[k]] = static_cast<uint16_t>(code);
        ehufsi_[symbols_[k]] = static_cast<uint8_t>(length);
      }
      max_code_[length] = code - 1;
      if (code >= (1 << length)) {
        throw Error(ErrorCode::kMalformedSegment,
                    "Huffman code lengths overflow the code space");
      }
    }
    code <<= 1;
  }
}

}  // namespace bitsalvage::jpeg
