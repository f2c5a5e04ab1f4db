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

#ifndef BITSALVAGE_COMMON_PRNG_H_
#define BITSALVAGE_COMMON_PRNG_H_

#include <cstdint>

namespace bitsalvage {

// SplitMix64 (Steele, Lea, Flood 2014). The n-th output of a generator seeded
// with s is Mix(s + (n + 1) * kGamma), so any position in the stream can be
// evaluated directly. Fault injection relies on that to sample bit i without
// touching bits 0..i-1.
class SplitMix64 {
 public:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Output at stream index n (0-based) without advancing.
  static constexpr uint64_t At(uint64_t seed, uint64_t n) {
    return Mix(seed + (n + 1) * kGamma);
  }

  uint64_t Next() {
    state_ += kGamma;
    return Mix(state_);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  static constexpr double ToUnit(uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;
  }

  double NextUnit() { return ToUnit(Next()); }

  // Uniform integer in [0, bound) by rejection (bound > 0).
  uint64_t NextBelow(uint64_t bound);

  // Uniform integer in [lo, hi].
  int64_t NextInRange(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(NextBelow(static_cast<uint64_t>(hi - lo) + 1));
  }

 private:
  uint64_t state_;
};

inline uint64_t SplitMix64::NextBelow(uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = Next();
  } while (v >= limit);
  return v % bound;
}

}  // namespace bitsalvage

#endif  // BITSALVAGE_COMMON_PRNG_H_
