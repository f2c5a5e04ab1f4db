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

#ifndef BITSALVAGE_TESTS_TEST_UTIL_H_
#define BITSALVAGE_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>

#include "bitsalvage/common/image.h"
#include "bitsalvage/common/prng.h"

namespace bitsalvage::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(BITSALVAGE_TEST_DATA) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("bitsalvage_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Smooth gradients plus seeded noise; display domain.
inline ImageBuffer TestImage(int width, int height, int channels, uint64_t seed,
                             int noise = 12) {
  ImageBuffer img(width, height, channels);
  SplitMix64 rng(seed);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const int base = (x * 255 / std::max(width - 1, 1) * (c + 1) +
                          y * 255 / std::max(height - 1, 1) * (3 - c)) / 4;
        const int n = static_cast<int>(rng.NextBelow(2 * noise + 1)) - noise;
        img.at(x, y, c) = ClampSample(base + n);
      }
    }
  }
  return img;
}

// Uniformly random samples in [lo, hi].
inline ImageBuffer RandomImage(int width, int height, int channels, uint64_t seed,
                               int lo = 0, int hi = 255,
                               SampleDomain domain = SampleDomain::kDisplay) {
  ImageBuffer img(width, height, channels, domain);
  SplitMix64 rng(seed);
  for (int32_t& s : img.samples()) s = static_cast<int32_t>(rng.NextInRange(lo, hi));
  return img;
}

}  // namespace bitsalvage::testing

#endif  // BITSALVAGE_TESTS_TEST_UTIL_H_
