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

#ifndef BITSALVAGE_JPEG_BITSTREAM_H_
#define BITSALVAGE_JPEG_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace bitsalvage::jpeg {

// A marker found inside entropy-coded data. bit_pos is the position in the
// unstuffed bit stream at which the marker sits; the first bit after the
// marker has index bit_pos.
struct Barrier {
  uint64_t bit_pos = 0;
  uint8_t marker = 0;

  bool is_restart() const { return marker >= 0xD0 && marker <= 0xD7; }
  int restart_number() const { return marker - 0xD0; }
  bool operator==(const Barrier&) const = default;
};

// Entropy-coded segment with byte stuffing removed. Markers are lifted out
// of the data and kept as zero-width barriers so that bit addresses count
// only payload bits.
class ScanBits {
 public:
  ScanBits() = default;

  // `stuffed` runs from the first byte after the SOS header up to (not
  // including) the terminating marker. 0xFF 0x00 becomes 0xFF, 0xFF fill
  // bytes are dropped, and any other 0xFF xx pair becomes a barrier.
  static ScanBits FromStuffed(std::span<const uint8_t> stuffed);

  uint64_t bit_count() const { return bytes_.size() * 8; }
  int bit(uint64_t pos) const {
    return (bytes_[pos >> 3] >> (7 - (pos & 7))) & 1;
  }
  std::span<const uint8_t> bytes() const { return bytes_; }
  const std::vector<Barrier>& barriers() const { return barriers_; }

  // Index of the first barrier with bit_pos >= pos (== size() if none).
  size_t FirstBarrierAtOrAfter(uint64_t pos) const;

 private:
  std::vector<uint8_t> bytes_;
  std::vector<Barrier> barriers_;
};

std::vector<uint8_t> StuffBytes(std::span<const uint8_t> raw);
// Inverse of StuffBytes; markers other than stuffed zeros are dropped.
std::vector<uint8_t> UnstuffBytes(std::span<const uint8_t> stuffed);

// MSB-first bit packer emitting stuffed entropy-coded bytes.
class BitWriter {
 public:
  void PutBits(uint32_t bits, int count);
  // Pads the final partial byte with 1 bits.
  void Flush();
  // Flushes, then appends 0xFF marker without stuffing.
  void PutMarker(uint8_t marker);

  std::vector<uint8_t>& bytes() { return out_; }

 private:
  void EmitByte(uint8_t b);

  std::vector<uint8_t> out_;
  uint32_t acc_ = 0;
  int acc_bits_ = 0;
};

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_BITSTREAM_H_
