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

#include "bitsalvage/jpeg/header.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "bitsalvage/common/error.h"

namespace bitsalvage::jpeg {
namespace {

class SegmentReader {
 public:
  explicit SegmentReader(std::span<const uint8_t> data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  size_t pos() const { return pos_; }

  uint8_t U8() {
    Need(1);
    return data_[pos_++];
  }
  uint16_t U16() {
    Need(2);
    const uint16_t v = static_cast<uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::span<const uint8_t> Take(size_t n) {
    Need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void Need(size_t n) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kTruncatedSegment, "segment shorter than declared");
    }
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

void ParseDqt(SegmentReader r, JpegHeader& header) {
  while (r.remaining() > 0) {
    const uint8_t pq_tq = r.U8();
    const int precision = pq_tq >> 4;
    const int id = pq_tq & 0x0F;
    if (id > 3) throw Error(ErrorCode::kMalformedSegment, "DQT table id > 3");
    if (precision > 1) throw Error(ErrorCode::kMalformedSegment, "bad DQT precision");
    QuantTable table{};
    for (int k = 0; k < 64; ++k) table[k] = precision == 0 ? r.U8() : r.U16();
    header.quant_tables[id] = table;
  }
}

void ParseDht(SegmentReader r, JpegHeader& header) {
  while (r.remaining() > 0) {
    const uint8_t tc_th = r.U8();
    const int table_class = tc_th >> 4;
    const int id = tc_th & 0x0F;
    if (table_class > 1 || id > 3) {
      throw Error(ErrorCode::kMalformedSegment, "bad DHT class/id");
    }
    std::array<uint8_t, 16> counts{};
    size_t total = 0;
    for (auto& c : counts) {
      c = r.U8();
      total += c;
    }
    auto symbols = r.Take(total);
    HuffmanTable table(std::span<const uint8_t, 16>(counts), symbols);
    (table_class == 0 ? header.dc_tables : header.ac_tables)[id] = std::move(table);
  }
}

void ParseSof(SegmentReader r, JpegHeader& header) {
  const int precision = r.U8();
  if (precision != 8) {
    throw Error(ErrorCode::kUnsupportedMode, "only 8-bit samples are supported");
  }
  header.height = r.U16();
  header.width = r.U16();
  const int count = r.U8();
  if (header.width < 1 || header.height < 1) {
    throw Error(ErrorCode::kUnsupportedMode, "zero frame dimension (DNL)");
  }
  if (count != 1 && count != 3) {
    throw Error(ErrorCode::kUnsupportedMode, "only 1 or 3 components supported");
  }
  for (int i = 0; i < count; ++i) {
    ComponentInfo c;
    c.id = r.U8();
    const uint8_t hv = r.U8();
    c.h_sampling = hv >> 4;
    c.v_sampling = hv & 0x0F;
    c.quant_table = r.U8();
    if (c.h_sampling < 1 || c.h_sampling > 2 || c.v_sampling < 1 ||
        c.v_sampling > 2) {
      throw Error(ErrorCode::kUnsupportedMode, "sampling factors must be 1 or 2");
    }
    if (c.quant_table > 3) {
      throw Error(ErrorCode::kMalformedSegment, "quant table id > 3");
    }
    header.components.push_back(c);
  }
  if (count == 3) {
    const auto& y = header.components[0];
    const bool chroma_unit = header.components[1].h_sampling == 1 &&
                             header.components[1].v_sampling == 1 &&
                             header.components[2].h_sampling == 1 &&
                             header.components[2].v_sampling == 1;
    const bool is444 = y.h_sampling == 1 && y.v_sampling == 1;
    const bool is420 = y.h_sampling == 2 && y.v_sampling == 2;
    if (!chroma_unit || !(is444 || is420)) {
      throw Error(ErrorCode::kUnsupportedMode,
                  "only 4:4:4 and 4:2:0 sampling are supported");
    }
  }
}

void ParseSos(SegmentReader r, JpegHeader& header) {
  if (header.components.empty()) {
    throw Error(ErrorCode::kMalformedSegment, "SOS before SOF");
  }
  const int count = r.U8();
  if (count != static_cast<int>(header.components.size())) {
    throw Error(ErrorCode::kUnsupportedMode,
                "multi-scan sequential frames are not supported");
  }
  for (int i = 0; i < count; ++i) {
    const uint8_t id = r.U8();
    const uint8_t tables = r.U8();
    auto it = std::find_if(header.components.begin(), header.components.end(),
                           [id](const ComponentInfo& c) { return c.id == id; });
    if (it == header.components.end()) {
      throw Error(ErrorCode::kMalformedSegment, "SOS references unknown component");
    }
    it->dc_table = tables >> 4;
    it->ac_table = tables & 0x0F;
    if (it->dc_table > 3 || it->ac_table > 3 || !header.dc_tables[it->dc_table] ||
        !header.ac_tables[it->ac_table]) {
      throw Error(ErrorCode::kMalformedSegment, "SOS references missing Huffman table");
    }
    if (!header.quant_tables[it->quant_table]) {
      throw Error(ErrorCode::kMalformedSegment, "component references missing quant table");
    }
    header.scan_components.push_back(
        static_cast<int>(it - header.components.begin()));
  }
  const int ss = r.U8();
  const int se = r.U8();
  const int ah_al = r.U8();
  if (ss != 0 || se != 63 || ah_al != 0) {
    throw Error(ErrorCode::kUnsupportedMode, "non-sequential scan parameters");
  }
}

void ParseApp0(std::span<const uint8_t> payload, JpegHeader& header) {
  if (payload.size() >= 5 && std::memcmp(payload.data(), "JFIF\0", 5) == 0) {
    header.has_jfif = true;
    if (payload.size() < 14) return;
    const int tw = payload[12];
    const int th = payload[13];
    const size_t need = 14 + static_cast<size_t>(tw) * th * 3;
    if (tw > 0 && th > 0 && payload.size() >= need && !header.thumbnail) {
      Thumbnail t;
      t.format = ThumbnailFormat::kRgb;
      t.container = "JFIF";
      t.width = tw;
      t.height = th;
      t.bytes.assign(payload.begin() + 14, payload.begin() + static_cast<std::ptrdiff_t>(need));
      header.thumbnail = std::move(t);
    }
    return;
  }
  if (payload.size() >= 6 && std::memcmp(payload.data(), "JFXX\0", 5) == 0) {
    const uint8_t ext = payload[5];
    Thumbnail t;
    t.container = "JFXX";
    if (ext == 0x10) {
      t.format = ThumbnailFormat::kJpeg;
      t.bytes.assign(payload.begin() + 6, payload.end());
    } else if (ext == 0x13 && payload.size() >= 8) {
      t.format = ThumbnailFormat::kRgb;
      t.width = payload[6];
      t.height = payload[7];
      const size_t need = 8 + static_cast<size_t>(t.width) * t.height * 3;
      if (payload.size() < need) {
        throw Error(ErrorCode::kTruncatedSegment, "JFXX RGB thumbnail truncated");
      }
      t.bytes.assign(payload.begin() + 8, payload.begin() + static_cast<std::ptrdiff_t>(need));
    } else if (ext == 0x11 && payload.size() >= 8) {
      // Palette thumbnails are expanded to RGB here.
      t.format = ThumbnailFormat::kRgb;
      t.width = payload[6];
      t.height = payload[7];
      const size_t pixels = static_cast<size_t>(t.width) * t.height;
      if (payload.size() < 8 + 768 + pixels) {
        throw Error(ErrorCode::kTruncatedSegment, "JFXX palette thumbnail truncated");
      }
      const uint8_t* palette = payload.data() + 8;
      for (size_t i = 0; i < pixels; ++i) {
        const uint8_t idx = payload[8 + 768 + i];
        t.bytes.insert(t.bytes.end(), palette + idx * 3, palette + idx * 3 + 3);
      }
    } else {
      return;
    }
    header.thumbnail = std::move(t);
  }
}

// EXIF: TIFF header, IFD0, then IFD1 carrying JPEGInterchangeFormat (0x0201)
// and JPEGInterchangeFormatLength (0x0202).
void ParseApp1(std::span<const uint8_t> payload, JpegHeader& header) {
  if (payload.size() < 14 || std::memcmp(payload.data(), "Exif\0\0", 6) != 0) {
    return;
  }
  header.has_exif = true;
  const auto tiff = payload.subspan(6);
  const bool little = tiff[0] == 'I';
  auto u16 = [&](size_t off) -> uint32_t {
    if (off + 2 > tiff.size()) return 0;
    return little ? (tiff[off] | (tiff[off + 1] << 8))
                  : ((tiff[off] << 8) | tiff[off + 1]);
  };
  auto u32 = [&](size_t off) -> uint32_t {
    if (off + 4 > tiff.size()) return 0;
    return little ? (tiff[off] | (tiff[off + 1] << 8) | (tiff[off + 2] << 16) |
                     (static_cast<uint32_t>(tiff[off + 3]) << 24))
                  : ((static_cast<uint32_t>(tiff[off]) << 24) |
                     (tiff[off + 1] << 16) | (tiff[off + 2] << 8) | tiff[off + 3]);
  };
  const uint32_t ifd0 = u32(4);
  if (ifd0 == 0 || ifd0 + 2 > tiff.size()) return;
  const uint32_t entries0 = u16(ifd0);
  const uint32_t ifd1 = u32(ifd0 + 2 + entries0 * 12);
  if (ifd1 == 0 || ifd1 + 2 > tiff.size()) return;
  const uint32_t entries1 = u16(ifd1);
  uint32_t offset = 0;
  uint32_t length = 0;
  for (uint32_t i = 0; i < entries1; ++i) {
    const size_t e = ifd1 + 2 + i * 12;
    if (e + 12 > tiff.size()) return;
    const uint32_t tag = u16(e);
    if (tag == 0x0201) offset = u32(e + 8);
    if (tag == 0x0202) length = u32(e + 8);
  }
  if (offset == 0 || length == 0 || offset + static_cast<size_t>(length) > tiff.size()) {
    return;
  }
  if (header.thumbnail) return;  // APP0 thumbnail takes precedence
  Thumbnail t;
  t.format = ThumbnailFormat::kJpeg;
  t.container = "EXIF";
  t.bytes.assign(tiff.begin() + offset, tiff.begin() + offset + length);
  header.thumbnail = std::move(t);
}

}  // namespace

JpegHeader ParseHeaders(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != 0xD8) {
    throw Error(ErrorCode::kMissingSoi, "stream does not start with SOI");
  }
  JpegHeader header;
  size_t pos = 2;
  bool have_frame = false;
  while (true) {
    // Skip to the next marker, tolerating fill bytes.
    if (pos >= bytes.size()) {
      throw Error(ErrorCode::kTruncatedSegment, "no SOS before end of stream");
    }
    if (bytes[pos] != 0xFF) {
      throw Error(ErrorCode::kMalformedSegment,
                  "expected marker at offset " + std::to_string(pos));
    }
    while (pos < bytes.size() && bytes[pos] == 0xFF) ++pos;
    if (pos >= bytes.size()) {
      throw Error(ErrorCode::kTruncatedSegment, "stream ends inside marker");
    }
    const uint8_t marker = bytes[pos++];
    if (marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) continue;
    if (marker == 0xD8) {
      throw Error(ErrorCode::kMalformedSegment, "duplicate SOI");
    }
    if (marker == 0xD9) {
      throw Error(ErrorCode::kTruncatedSegment, "EOI before SOS");
    }
    if (pos + 2 > bytes.size()) {
      throw Error(ErrorCode::kTruncatedSegment, "missing segment length");
    }
    const size_t length = (bytes[pos] << 8) | bytes[pos + 1];
    if (length < 2 || pos + length > bytes.size()) {
      throw Error(ErrorCode::kTruncatedSegment, "segment overruns stream");
    }
    const auto payload = bytes.subspan(pos + 2, length - 2);
    pos += length;

    switch (marker) {
      case 0xC0:
      case 0xC1:
        if (have_frame) throw Error(ErrorCode::kMalformedSegment, "duplicate SOF");
        ParseSof(SegmentReader(payload), header);
        have_frame = true;
        break;
      case 0xC2: case 0xC3: case 0xC5: case 0xC6: case 0xC7:
        throw Error(ErrorCode::kUnsupportedMode,
                    "progressive, lossless and hierarchical JPEG are not supported");
      case 0xC9: case 0xCA: case 0xCB: case 0xCD: case 0xCE: case 0xCF:
        throw Error(ErrorCode::kUnsupportedMode, "arithmetic coding is not supported");
      case 0xC4:
        ParseDht(SegmentReader(payload), header);
        break;
      case 0xCC:
        throw Error(ErrorCode::kUnsupportedMode, "arithmetic coding is not supported");
      case 0xDB:
        ParseDqt(SegmentReader(payload), header);
        break;
      case 0xDD: {
        SegmentReader r(payload);
        header.restart_interval = r.U16();
        break;
      }
      case 0xE0:
        ParseApp0(payload, header);
        break;
      case 0xE1:
        ParseApp1(payload, header);
        break;
      case 0xDA:
        if (!have_frame) throw Error(ErrorCode::kMalformedSegment, "SOS before SOF");
        ParseSos(SegmentReader(payload), header);
        header.scan_offset = pos;
        return header;
      default:
        break;  // APPn, COM and friends are skipped
    }
  }
}

std::span<const uint8_t> ScanPayload(std::span<const uint8_t> bytes,
                                     const JpegHeader& header) {
  size_t end = bytes.size();
  for (size_t i = bytes.size(); i >= header.scan_offset + 2; --i) {
    if (bytes[i - 2] == 0xFF && bytes[i - 1] == 0xD9) {
      end = i - 2;
      break;
    }
  }
  return bytes.subspan(header.scan_offset, end - header.scan_offset);
}

}  // namespace bitsalvage::jpeg
