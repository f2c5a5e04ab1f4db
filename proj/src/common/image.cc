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

#include "bitsalvage/common/image.h"

#include "bitsalvage/common/error.h"

namespace bitsalvage {

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         SampleDomain domain, int32_t fill)
    : width_(width), height_(height), channels_(channels), domain_(domain) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw Error(ErrorCode::kInvalidArgument, "bad image geometry");
  }
  samples_.assign(static_cast<size_t>(width) * height * channels, fill);
}

ImageBuffer ImageBuffer::ToDisplay() const {
  ImageBuffer out = *this;
  out.domain_ = SampleDomain::kDisplay;
  for (int32_t& s : out.samples_) s = ClampSample(s);
  return out;
}

}  // namespace bitsalvage
