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

#ifndef BITSALVAGE_FDE_CORRUPTION_H_
#define BITSALVAGE_FDE_CORRUPTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bitsalvage/fde/sector_cipher.h"
#include "json.hpp"

namespace bitsalvage::fde {

struct ByteRange {
  uint64_t offset = 0;
  uint64_t length = 0;
  bool operator==(const ByteRange&) const = default;
};

// Key used when a caller does not supply one: bytes 0x00..0x0f.
std::vector<uint8_t> DefaultKey();

struct CorruptionSpec {
  double ber = 1e-5;
  uint64_t seed = 0;
  size_t sector_size = 512;
  size_t cipher_block_size = kCipherBlockSize;
  std::vector<uint8_t> key = DefaultKey();
  // Plaintext byte ranges that must come out of the channel intact. For
  // InjectBitErrors they apply to the bytes handed in directly.
  std::vector<ByteRange> protected_ranges;
  // CorruptJpeg only: when true and protected_ranges is empty, protect all
  // bytes before the entropy-coded scan (headers and thumbnail).
  bool protect_header = true;

  // Throws Error(kInvalidArgument) on out-of-range fields.
  void Validate() const;
};

struct FlipLog {
  std::vector<uint64_t> bit_positions;  // absolute, strictly increasing
  size_t sector_size = 512;

  std::vector<uint64_t> Sectors() const;  // distinct, ascending
};

nlohmann::json ToJson(const FlipLog& log);

struct InjectionResult {
  std::vector<uint8_t> bytes;
  FlipLog flips;
};

// Flips every unprotected bit independently with probability ber. Bit i
// (byte i / 8, MSB first) is flipped iff the i-th SplitMix64 output for
// `seed`, mapped to [0, 1), is below ber; the decision for one bit never
// depends on any other bit.
InjectionResult InjectBitErrors(std::span<const uint8_t> bytes,
                                const CorruptionSpec& spec);

struct CorruptionResult {
  std::vector<uint8_t> bytes;
  FlipLog flips;                            // ciphertext bit positions
  std::vector<ByteRange> plain_protected;   // as requested
  std::vector<ByteRange> cipher_protected;  // as enforced on ciphertext
};

// Decrypt(Bitflip(Encrypt(bytes))) over zero-padded sectors, truncated back
// to the input length. Protected plaintext ranges are widened to whole
// cipher blocks, plus the preceding block of the same sector, because CBC
// decryption of block i depends on ciphertext blocks i and i - 1.
CorruptionResult CorruptJpeg(std::span<const uint8_t> jpeg,
                             const CorruptionSpec& spec);

// Ciphertext ranges that keep the given plaintext ranges intact.
std::vector<ByteRange> CipherProtection(std::span<const ByteRange> plain,
                                        size_t sector_size,
                                        size_t cipher_block_size);

}  // namespace bitsalvage::fde

#endif  // BITSALVAGE_FDE_CORRUPTION_H_
