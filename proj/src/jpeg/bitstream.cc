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

#include "bitsalvage/jpeg/bitstream.h"

#include <algorithm>

namespace bitsalvage::jpeg {

ScanBits ScanBits::FromStuffed(std::span<const uint8_t> stuffed) {
  ScanBits out;
  out.bytes_.reserve(stuffed.size());
  size_t i = 0;
  while (i < stuffed.size()) {
    const uint8_t b = stuffed[i];
    if (b != 0xFF) {
      out.bytes_.push_back(b);
      ++i;
      continue;
    }
    if (i + 1 >= stuffed.size()) break;  // dangling 0xFF
    const uint8_t next = stuffed[i + 1];
    if (next == 0x00) {
      out.bytes_.push_back(0xFF);
      i += 2;
    } else if (next == 0xFF) {
      ++i;  // fill byte
    } else {
      out.barriers_.push_back({out.bytes_.size() * 8, next});
      i += 2;
    }
  }
  return out;
}

size_t ScanBits::FirstBarrierAtOrAfter(uint64_t pos) const {
  auto it = std::lower_bound(
      barriers_.begin(), barriers_.end(), pos,
      [](const Barrier& b, uint64_t p) { return b.bit_pos < p; });
  return static_cast<size_t>(it - barriers_.begin());
}

std::vector<uint8_t> StuffBytes(std::span<const uint8_t> raw) {
  std::vector<uint8_t> out;
  out.reserve(raw.size() + raw.size() / 64);
  for (uint8_t b : raw) {
    out.push_back(b);
    if (b == 0xFF) out.push_back(0x00);
  }
  return out;
}

std::vector<uint8_t> UnstuffBytes(std::span<const uint8_t> stuffed) {
  const ScanBits bits = ScanBits::FromStuffed(stuffed);
  return {bits.bytes().begin(), bits.bytes().end()};
}

void BitWriter::EmitByte(uint8_t b) {
  out_.push_back(b);
  if (b == 0xFF) out_.push_back(0x00);
}

void BitWriter::PutBits(uint32_t bits, int count) {
  for (int i = count - 1; i >= 0; --i) {
    acc_ = (acc_ << 1) | ((bits >> i) & 1);
    if (++acc_bits_ == 8) {
      EmitByte(static_cast<uint8_t>(acc_));
      acc_ = 0;
      acc_bits_ = 0;
    }
  }
}

void BitWriter::Flush() {
  if (acc_bits_ > 0) PutBits((1u << (8 - acc_bits_)) - 1, 8 - acc_bits_);
}

void BitWriter::PutMarker(uint8_t marker) {
  Flush();
  out_.push_back(0xFF);
  out_.push_back(marker);
}

}  // namespace bitsalvage::jpeg
