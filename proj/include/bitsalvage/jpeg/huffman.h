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

#ifndef BITSALVAGE_JPEG_HUFFMAN_H_
#define BITSALVAGE_JPEG_HUFFMAN_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace bitsalvage::jpeg {

// Canonical JPEG Huffman table built from a DHT payload (16 length counts
// followed by the symbols in code order).
class HuffmanTable {
 public:
  HuffmanTable() = default;

  // Throws Error(kMalformedSegment) if the counts overflow the code space
  // (prefix collision) or exceed 256 symbols.
  HuffmanTable(std::span<const uint8_t, 16> counts,
               std::span<const uint8_t> symbols);

  const std::array<uint8_t, 16>& counts() const { return counts_; }
  const std::vector<uint8_t>& symbols() const { return symbols_; }

  // Decoder view: for code length l (1..16), codes in [min_code, max_code]
  // map to symbols[val_offset + code - min_code]. max_code is -1 when no
  // code of that length exists.
  int32_t min_code(int length) const { return min_code_[length]; }
  int32_t max_code(int length) const { return max_code_[length]; }
  int32_t val_offset(int length) const { return val_offset_[length]; }

  // Encoder view. size 0 means the symbol is not in the table.
  uint16_t code_of(uint8_t symbol) const { return ehufco_[symbol]; }
  uint8_t size_of(uint8_t symbol) const { return ehufsi_[symbol]; }

  bool operator==(const HuffmanTable& other) const {
    return counts_ == other.counts_ && symbols_ == other.symbols_;
  }

 private:
  std::array<uint8_t, 16> counts_{};
  std::vector<uint8_t> symbols_;
  std::array<int32_t, 17> min_code_{};
  std::array<int32_t, 17> max_code_{};
  std::array<int32_t, 17> val_offset_{};
  std::array<uint16_t, 256> ehufco_{};
  std::array<uint8_t, 256> ehufsi_{};
};

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_HUFFMAN_H_
