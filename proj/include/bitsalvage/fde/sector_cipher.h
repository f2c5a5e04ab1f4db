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

#ifndef BITSALVAGE_FDE_SECTOR_CIPHER_H_
#define BITSALVAGE_FDE_SECTOR_CIPHER_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace bitsalvage::fde {

inline constexpr size_t kCipherBlockSize = 16;
inline constexpr size_t kKeySize = 16;

using CipherBlock = std::array<uint8_t, kCipherBlockSize>;

// AES-128-CBC with ESSIV, sector by sector. The IV of sector n is
// AES_{salt}(n) where n is little-endian zero-padded to one block and salt
// is SHA-256(key) truncated to the key length. dm-crypt's
// "aes-cbc-essiv:sha256" keys the IV cipher with the full digest (AES-256)
// instead; the damage pattern is the same. Sectors are encrypted
// independently.
class SectorCipher {
 public:
  // Throws Error(kInvalidArgument) unless key is 16 bytes.
  explicit SectorCipher(std::span<const uint8_t> key);

  CipherBlock EssivIv(uint64_t sector_number) const;

  // Length must be a non-zero multiple of the cipher block size, else
  // Error(kLengthMismatch).
  std::vector<uint8_t> EncryptSector(uint64_t sector_number,
                                     std::span<const uint8_t> plaintext) const;
  std::vector<uint8_t> DecryptSector(uint64_t sector_number,
                                     std::span<const uint8_t> ciphertext) const;

 private:
  std::vector<uint8_t> Cbc(uint64_t sector_number, std::span<const uint8_t> in,
                           bool encrypt) const;

  std::array<uint8_t, kKeySize> key_{};
  std::array<uint8_t, kKeySize> salt_{};
};

}  // namespace bitsalvage::fde

#endif  // BITSALVAGE_FDE_SECTOR_CIPHER_H_
