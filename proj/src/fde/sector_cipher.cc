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

#include "bitsalvage/fde/sector_cipher.h"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <memory>

#include "bitsalvage/common/error.h"

namespace bitsalvage::fde {
namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

std::vector<uint8_t> RunCipher(const EVP_CIPHER* cipher, const uint8_t* key,
                               const uint8_t* iv, std::span<const uint8_t> in,
                               bool encrypt) {
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx || EVP_CipherInit_ex(ctx.get(), cipher, nullptr, key, iv, encrypt ? 1 : 0) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "cipher initialisation failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  std::vector<uint8_t> out(in.size() + kCipherBlockSize);
  int len = 0;
  int tail = 0;
  if (EVP_CipherUpdate(ctx.get(), out.data(), &len, in.data(), static_cast<int>(in.size())) != 1 ||
      EVP_CipherFinal_ex(ctx.get(), out.data() + len, &tail) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "cipher operation failed");
  }
  out.resize(static_cast<size_t>(len + tail));
  return out;
}

}  // namespace

SectorCipher::SectorCipher(std::span<const uint8_t> key) {
  if (key.size() != kKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "AES-128 key must be 16 bytes");
  }
  std::copy(key.begin(), key.end(), key_.begin());
  uint8_t digest[SHA256_DIGEST_LENGTH];
  SHA256(key.data(), key.size(), digest);
  std::copy_n(digest, kKeySize, salt_.begin());
}

CipherBlock SectorCipher::EssivIv(uint64_t sector_number) const {
  CipherBlock plain{};
  for (int i = 0; i < 8; ++i) plain[i] = static_cast<uint8_t>(sector_number >> (8 * i));
  const auto out = RunCipher(EVP_aes_128_ecb(), salt_.data(), nullptr, plain, true);
  CipherBlock iv{};
  std::copy_n(out.begin(), kCipherBlockSize, iv.begin());
  return iv;
}

std::vector<uint8_t> SectorCipher::Cbc(uint64_t sector_number,
                                       std::span<const uint8_t> in,
                                       bool encrypt) const {
  if (in.empty() || in.size() % kCipherBlockSize != 0) {
    throw Error(ErrorCode::kLengthMismatch,
                "sector length must be a multiple of the cipher block size");
  }
  const CipherBlock iv = EssivIv(sector_number);
  return RunCipher(EVP_aes_128_cbc(), key_.data(), iv.data(), in, encrypt);
}

std::vector<uint8_t> SectorCipher::EncryptSector(uint64_t sector_number,
                                                 std::span<const uint8_t> plaintext) const {
  return Cbc(sector_number, plaintext, true);
}

std::vector<uint8_t> SectorCipher::DecryptSector(uint64_t sector_number,
                                                 std::span<const uint8_t> ciphertext) const {
  return Cbc(sector_number, ciphertext, false);
}

}  // namespace bitsalvage::fde
