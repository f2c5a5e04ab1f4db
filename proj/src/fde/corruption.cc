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

#include "bitsalvage/fde/corruption.h"

#include <algorithm>
#include <cmath>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/prng.h"
#include "bitsalvage/jpeg/header.h"

namespace bitsalvage::fde {
namespace {

// Sorted, merged copy of ranges.
std::vector<ByteRange> Normalize(std::vector<ByteRange> ranges) {
  std::erase_if(ranges, [](const ByteRange& r) { return r.length == 0; });
  std::sort(ranges.begin(), ranges.end(),
            [](const ByteRange& a, const ByteRange& b) { return a.offset < b.offset; });
  std::vector<ByteRange> out;
  for (const ByteRange& r : ranges) {
    if (!out.empty() && r.offset <= out.back().offset + out.back().length) {
      const uint64_t end = std::max(out.back().offset + out.back().length, r.offset + r.length);
      out.back().length = end - out.back().offset;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

std::vector<uint8_t> DefaultKey() {
  std::vector<uint8_t> key(kKeySize);
  for (size_t i = 0; i < key.size(); ++i) key[i] = static_cast<uint8_t>(i);
  return key;
}

void CorruptionSpec::Validate() const {
  if (!(ber >= 0.0 && ber <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ber must lie in [0, 1]");
  }
  if (cipher_block_size != kCipherBlockSize) {
    throw Error(ErrorCode::kInvalidArgument, "cipher block size must be 16");
  }
  if (sector_size == 0 || sector_size % cipher_block_size != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sector size must be a positive multiple of the cipher block size");
  }
  if (key.size() != kKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "key must be 16 bytes");
  }
}

std::vector<uint64_t> FlipLog::Sectors() const {
  std::vector<uint64_t> out;
  for (uint64_t bit : bit_positions) {
    const uint64_t s = bit / 8 / sector_size;
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

nlohmann::json ToJson(const FlipLog& log) {
  return {{"flip_count", log.bit_positions.size()},
          {"bit_positions", log.bit_positions},
          {"sectors", log.Sectors()},
          {"sector_size", log.sector_size}};
}

InjectionResult InjectBitErrors(std::span<const uint8_t> bytes,
                                const CorruptionSpec& spec) {
  spec.Validate();
  InjectionResult result;
  result.bytes.assign(bytes.begin(), bytes.end());
  result.flips.sector_size = spec.sector_size;
  if (spec.ber == 0.0) return result;

  const auto ranges = Normalize(spec.protected_ranges);
  size_t next_range = 0;
  const uint64_t total_bits = static_cast<uint64_t>(bytes.size()) * 8;
  for (uint64_t bit = 0; bit < total_bits; ++bit) {
    const uint64_t byte = bit >> 3;
    while (next_range < ranges.size() &&
           ranges[next_range].offset + ranges[next_range].length <= byte) {
      ++next_range;
    }
    if (next_range < ranges.size() && ranges[next_range].offset <= byte) continue;
    if (SplitMix64::ToUnit(SplitMix64::At(spec.seed, bit)) < spec.ber) {
      result.bytes[byte] ^= static_cast<uint8_t>(0x80u >> (bit & 7));
      result.flips.bit_positions.push_back(bit);
    }
  }
  return result;
}

std::vector<ByteRange> CipherProtection(std::span<const ByteRange> plain,
                                        size_t sector_size,
                                        size_t cipher_block_size) {
  std::vector<ByteRange> out;
  for (const ByteRange& r : plain) {
    if (r.length == 0) continue;
    const uint64_t first_block = r.offset / cipher_block_size;
    const uint64_t last_block = (r.offset + r.length - 1) / cipher_block_size;
    uint64_t begin = first_block * cipher_block_size;
    // The block before the range feeds the XOR of the first protected
    // block, unless that block opens a sector (then the IV does).
    if (begin % sector_size != 0) begin -= cipher_block_size;
    const uint64_t end = (last_block + 1) * cipher_block_size;
    out.push_back({begin, end - begin});
  }
  return Normalize(std::move(out));
}

CorruptionResult CorruptJpeg(std::span<const uint8_t> jpeg,
                             const CorruptionSpec& spec) {
  spec.Validate();
  CorruptionResult result;
  result.plain_protected = spec.protected_ranges;
  if (result.plain_protected.empty() && spec.protect_header) {
    try {
      const jpeg::JpegHeader header = jpeg::ParseHeaders(jpeg);
      result.plain_protected.push_back({0, header.scan_offset});
    } catch (const Error&) {
      // Not a parseable JPEG: nothing to protect.
    }
  }
  result.cipher_protected =
      CipherProtection(result.plain_protected, spec.sector_size, spec.cipher_block_size);

  const size_t sectors = (jpeg.size() + spec.sector_size - 1) / spec.sector_size;
  std::vector<uint8_t> padded(sectors * spec.sector_size, 0);
  std::copy(jpeg.begin(), jpeg.end(), padded.begin());

  const SectorCipher cipher(spec.key);
  std::vector<uint8_t> cipher_text(padded.size());
  for (size_t s = 0; s < sectors; ++s) {
    const auto sector = std::span<const uint8_t>(padded).subspan(s * spec.sector_size, spec.sector_size);
    const auto enc = cipher.EncryptSector(s, sector);
    std::copy(enc.begin(), enc.end(), cipher_text.begin() + static_cast<std::ptrdiff_t>(s * spec.sector_size));
  }

  CorruptionSpec inject = spec;
  inject.protected_ranges = result.cipher_protected;
  InjectionResult flipped = InjectBitErrors(cipher_text, inject);
  result.flips = std::move(flipped.flips);

  result.bytes.resize(padded.size());
  for (size_t s = 0; s < sectors; ++s) {
    const auto sector = std::span<const uint8_t>(flipped.bytes).subspan(s * spec.sector_size, spec.sector_size);
    const auto dec = cipher.DecryptSector(s, sector);
    std::copy(dec.begin(), dec.end(), result.bytes.begin() + static_cast<std::ptrdiff_t>(s * spec.sector_size));
  }
  result.bytes.resize(jpeg.size());
  return result;
}

}  // namespace bitsalvage::fde
