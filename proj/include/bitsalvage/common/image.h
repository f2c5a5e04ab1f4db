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

#ifndef BITSALVAGE_COMMON_IMAGE_H_
#define BITSALVAGE_COMMON_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitsalvage {

// kDisplay samples live in [0, 255]. kWorking samples are signed and
// unbounded; the decoder emits them before level clamping so that large DC
// shifts survive until color compensation.
enum class SampleDomain { kDisplay, kWorking };

// Interleaved raster (x fastest, then channel-interleaved per pixel).
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels,
              SampleDomain domain = SampleDomain::kDisplay, int32_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  SampleDomain domain() const { return domain_; }
  bool empty() const { return samples_.empty(); }

  int32_t& at(int x, int y, int c) {
    return samples_[Index(x, y, c)];
  }
  int32_t at(int x, int y, int c) const { return samples_[Index(x, y, c)]; }

  std::span<int32_t> samples() { return samples_; }
  std::span<const int32_t> samples() const { return samples_; }

  // Row y as a contiguous span of width * channels samples.
  std::span<const int32_t> row(int y) const {
    return std::span<const int32_t>(samples_).subspan(
        static_cast<size_t>(y) * width_ * channels_,
        static_cast<size_t>(width_) * channels_);
  }
  std::span<int32_t> row(int y) {
    return std::span<int32_t>(samples_).subspan(
        static_cast<size_t>(y) * width_ * channels_,
        static_cast<size_t>(width_) * channels_);
  }

  // Clamps every sample into [0, 255] and marks the buffer as display domain.
  ImageBuffer ToDisplay() const;

  bool operator==(const ImageBuffer& other) const = default;

 private:
  size_t Index(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  SampleDomain domain_ = SampleDomain::kDisplay;
  std::vector<int32_t> samples_;
};

// Rounds half away from zero, the convention used for every float -> sample
// conversion in the project.
inline int32_t RoundHalfAway(double v) {
  return static_cast<int32_t>(v < 0.0 ? v - 0.5 : v + 0.5);
}

inline int32_t ClampSample(int32_t v) {
  return v < 0 ? 0 : (v > 255 ? 255 : v);
}

}  // namespace bitsalvage

#endif  // BITSALVAGE_COMMON_IMAGE_H_
