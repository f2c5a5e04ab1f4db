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

#ifndef BITSALVAGE_JPEG_HEADER_H_
#define BITSALVAGE_JPEG_HEADER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitsalvage/jpeg/huffman.h"

namespace bitsalvage::jpeg {

struct ComponentInfo {
  uint8_t id = 0;
  uint8_t h_sampling = 1;
  uint8_t v_sampling = 1;
  uint8_t quant_table = 0;
  // Filled from the SOS header.
  uint8_t dc_table = 0;
  uint8_t ac_table = 0;
};

enum class ThumbnailFormat {
  kJpeg,  // JFXX extension 0x10 or an EXIF IFD1 JPEG
  kRgb,   // JFIF inline thumbnail or JFXX extension 0x13
};

struct Thumbnail {
  ThumbnailFormat format = ThumbnailFormat::kJpeg;
  std::string container;  // "JFIF", "JFXX" or "EXIF"
  int width = 0;          // declared size for RGB payloads, 0 for JPEG
  int height = 0;
  std::vector<uint8_t> bytes;
};

using QuantTable = std::array<uint16_t, 64>;  // zig-zag order, as stored

struct JpegHeader {
  int width = 0;
  int height = 0;
  std::vector<ComponentInfo> components;  // frame order
  std::vector<int> scan_components;       // indices into components
  std::array<std::optional<QuantTable>, 4> quant_tables;
  std::array<std::optional<HuffmanTable>, 4> dc_tables;
  std::array<std::optional<HuffmanTable>, 4> ac_tables;
  int restart_interval = 0;  // MCUs per interval, 0 when DRI absent
  std::optional<Thumbnail> thumbnail;
  bool has_jfif = false;
  bool has_exif = false;
  size_t scan_offset = 0;  // first entropy-coded byte after the SOS header
};

// Walks marker segments from SOI through the first SOS header. Accepts
// baseline (SOF0) and 8-bit extended Huffman (SOF1) frames with 4:4:4 or
// 4:2:0 sampling, or a single gray component.
//
// Throws Error with kMissingSoi, kUnsupportedMode, kTruncatedSegment or
// kMalformedSegment.
JpegHeader ParseHeaders(std::span<const uint8_t> bytes);

// Entropy-coded bytes of the scan: from scan_offset up to the last EOI
// marker in the file, or to the end of the file when no EOI survives.
std::span<const uint8_t> ScanPayload(std::span<const uint8_t> bytes,
                                     const JpegHeader& header);

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_HEADER_H_
