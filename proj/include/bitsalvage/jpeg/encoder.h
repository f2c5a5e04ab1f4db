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

#ifndef BITSALVAGE_JPEG_ENCODER_H_
#define BITSALVAGE_JPEG_ENCODER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "bitsalvage/common/image.h"

namespace bitsalvage::jpeg {

enum class Subsampling { k444, k420 };

enum class ThumbnailContainer {
  kJfxxJpeg,  // APP0 "JFXX" extension 0x10, baseline JPEG payload
  kJfxxRgb,   // APP0 "JFXX" extension 0x13, raw RGB payload
  kJfifRgb,   // thumbnail fields of the JFIF APP0 segment itself
};

struct EncodeOptions {
  int quality = 90;
  Subsampling subsampling = Subsampling::k444;
  int restart_interval = 0;  // MCUs, 0 disables DRI
  std::optional<ImageBuffer> thumbnail;
  ThumbnailContainer thumbnail_container = ThumbnailContainer::kJfxxJpeg;
  int thumbnail_quality = 90;
};

// Baseline sequential JPEG with the Annex K Huffman tables and IJG-scaled
// quantization tables. Gray images produce a single-component file; edges
// are replicated to fill partial MCUs.
std::vector<uint8_t> EncodeBaseline(const ImageBuffer& image,
                                    const EncodeOptions& options = {});

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_ENCODER_H_
