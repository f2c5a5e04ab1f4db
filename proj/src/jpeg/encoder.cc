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

#include "bitsalvage/jpeg/encoder.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <span>

#include "bitsalvage/common/error.h"
#include "bitsalvage/jpeg/bitstream.h"
#include "bitsalvage/jpeg/dct.h"
#include "bitsalvage/jpeg/huffman.h"
#include "bitsalvage/jpeg/tables.h"

namespace bitsalvage::jpeg {
namespace {

void PutU16(std::vector<uint8_t>& out, int v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void PutSegment(std::vector<uint8_t>& out, uint8_t marker,
                std::span<const uint8_t> payload) {
  if (payload.size() + 2 > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "segment payload too large");
  }
  out.push_back(0xFF);
  out.push_back(marker);
  PutU16(out, static_cast<int>(payload.size() + 2));
  out.insert(out.end(), payload.begin(), payload.end());
}

int BitLength(int v) {
  v = std::abs(v);
  int n = 0;
  while (v) {
    ++n;
    v >>= 1;
  }
  return n;
}

struct ComponentPlane {
  int width = 0;   // padded, multiple of 8
  int height = 0;
  std::vector<double> samples;  // level-shifted (-128)
  double at(int x, int y) const {
    return samples[static_cast<size_t>(y) * width + x];
  }
};

struct HuffPair {
  HuffmanTable dc;
  HuffmanTable ac;
};

HuffPair LumaTables() {
  return {HuffmanTable(std::span<const uint8_t, 16>(kStdDcLumaCounts), kStdDcLumaSymbols),
          HuffmanTable(std::span<const uint8_t, 16>(kStdAcLumaCounts), kStdAcLumaSymbols)};
}

HuffPair ChromaTables() {
  return {HuffmanTable(std::span<const uint8_t, 16>(kStdDcChromaCounts), kStdDcChromaSymbols),
          HuffmanTable(std::span<const uint8_t, 16>(kStdAcChromaCounts), kStdAcChromaSymbols)};
}

void EncodeBlock(BitWriter& writer, const ComponentPlane& plane, int bx, int by,
                 const std::array<uint16_t, 64>& quant, const HuffPair& tables,
                 int& predictor) {
  std::array<double, 64> pixels{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) pixels[y * 8 + x] = plane.at(bx * 8 + x, by * 8 + y);
  }
  const auto coefs = ForwardDct(pixels);
  std::array<int, 64> zz{};
  for (int k = 0; k < 64; ++k) {
    const int n = kZigzagToNatural[k];
    zz[k] = RoundHalfAway(coefs[n] / quant[n]);
  }

  const int diff = zz[0] - predictor;
  predictor = zz[0];
  const int dc_size = BitLength(diff);
  writer.PutBits(tables.dc.code_of(static_cast<uint8_t>(dc_size)),
                 tables.dc.size_of(static_cast<uint8_t>(dc_size)));
  if (dc_size > 0) {
    const int bits = diff < 0 ? diff - 1 : diff;
    writer.PutBits(static_cast<uint32_t>(bits) & ((1u << dc_size) - 1), dc_size);
  }

  int run = 0;
  for (int k = 1; k < 64; ++k) {
    const int v = zz[k];
    if (v == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      writer.PutBits(tables.ac.code_of(0xF0), tables.ac.size_of(0xF0));
      run -= 16;
    }
    const int size = BitLength(v);
    const uint8_t symbol = static_cast<uint8_t>((run << 4) | size);
    writer.PutBits(tables.ac.code_of(symbol), tables.ac.size_of(symbol));
    const int bits = v < 0 ? v - 1 : v;
    writer.PutBits(static_cast<uint32_t>(bits) & ((1u << size) - 1), size);
    run = 0;
  }
  if (run > 0) writer.PutBits(tables.ac.code_of(0x00), tables.ac.size_of(0x00));
}

void PutDht(std::vector<uint8_t>& out, int table_class, int id,
            const HuffmanTable& table) {
  std::vector<uint8_t> payload;
  payload.push_back(static_cast<uint8_t>((table_class << 4) | id));
  payload.insert(payload.end(), table.counts().begin(), table.counts().end());
  payload.insert(payload.end(), table.symbols().begin(), table.symbols().end());
  PutSegment(out, 0xC4, payload);
}

std::vector<uint8_t> ThumbnailSegment(const ImageBuffer& thumb,
                                      const EncodeOptions& options) {
  std::vector<uint8_t> payload;
  if (options.thumbnail_container == ThumbnailContainer::kJfxxJpeg) {
    EncodeOptions inner;
    inner.quality = options.thumbnail_quality;
    const auto jpeg = EncodeBaseline(thumb, inner);
    payload = {'J', 'F', 'X', 'X', 0, 0x10};
    payload.insert(payload.end(), jpeg.begin(), jpeg.end());
    return payload;
  }
  if (thumb.width() > 255 || thumb.height() > 255 || thumb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "RGB thumbnails must be 3-channel and at most 255x255");
  }
  payload = {'J', 'F', 'X', 'X', 0, 0x13};
  payload.push_back(static_cast<uint8_t>(thumb.width()));
  payload.push_back(static_cast<uint8_t>(thumb.height()));
  for (int32_t s : thumb.samples()) payload.push_back(static_cast<uint8_t>(ClampSample(s)));
  return payload;
}

}  // namespace

std::vector<uint8_t> EncodeBaseline(const ImageBuffer& image,
                                    const EncodeOptions& options) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  if (options.restart_interval < 0 || options.restart_interval > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "bad restart interval");
  }
  const bool color = image.channels() == 3;
  const bool sub420 = color && options.subsampling == Subsampling::k420;
  const int mcu_w = sub420 ? 16 : 8;
  const int mcu_h = sub420 ? 16 : 8;
  const int mcus_x = (image.width() + mcu_w - 1) / mcu_w;
  const int mcus_y = (image.height() + mcu_h - 1) / mcu_h;
  const int full_w = mcus_x * mcu_w;
  const int full_h = mcus_y * mcu_h;

  // Color transform at full resolution with edge replication.
  const int ncomp = color ? 3 : 1;
  std::vector<ComponentPlane> full(ncomp);
  for (auto& p : full) {
    p.width = full_w;
    p.height = full_h;
    p.samples.resize(static_cast<size_t>(full_w) * full_h);
  }
  for (int y = 0; y < full_h; ++y) {
    const int sy = std::min(y, image.height() - 1);
    for (int x = 0; x < full_w; ++x) {
      const int sx = std::min(x, image.width() - 1);
      const size_t i = static_cast<size_t>(y) * full_w + x;
      if (!color) {
        full[0].samples[i] = ClampSample(image.at(sx, sy, 0)) - 128.0;
        continue;
      }
      const double r = ClampSample(image.at(sx, sy, 0));
      const double g = ClampSample(image.at(sx, sy, 1));
      const double b = ClampSample(image.at(sx, sy, 2));
      full[0].samples[i] = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
      full[1].samples[i] = -0.168735892 * r - 0.331264108 * g + 0.5 * b;
      full[2].samples[i] = 0.5 * r - 0.418687589 * g - 0.081312411 * b;
    }
  }
  std::vector<ComponentPlane> planes = full;
  if (sub420) {
    for (int c = 1; c < 3; ++c) {
      ComponentPlane half;
      half.width = full_w / 2;
      half.height = full_h / 2;
      half.samples.resize(static_cast<size_t>(half.width) * half.height);
      for (int y = 0; y < half.height; ++y) {
        for (int x = 0; x < half.width; ++x) {
          half.samples[static_cast<size_t>(y) * half.width + x] =
              0.25 * (full[c].at(2 * x, 2 * y) + full[c].at(2 * x + 1, 2 * y) +
                      full[c].at(2 * x, 2 * y + 1) + full[c].at(2 * x + 1, 2 * y + 1));
        }
      }
      planes[c] = std::move(half);
    }
  }

  const auto luma_q = ScaleQuantTable(kStdLumaQuant, options.quality);
  const auto chroma_q = ScaleQuantTable(kStdChromaQuant, options.quality);
  const HuffPair luma = LumaTables();
  const HuffPair chroma = ChromaTables();

  std::vector<uint8_t> out = {0xFF, 0xD8};
  // JFIF APP0: version 1.02, aspect-ratio units, 1:1, no inline thumbnail
  // unless requested.
  {
    std::vector<uint8_t> jfif = {'J', 'F', 'I', 'F', 0, 1, 2, 0, 0, 1, 0, 1};
    const bool inline_thumb = options.thumbnail &&
        options.thumbnail_container == ThumbnailContainer::kJfifRgb;
    if (inline_thumb) {
      const ImageBuffer& t = *options.thumbnail;
      if (t.width() > 255 || t.height() > 255 || t.channels() != 3) {
        throw Error(ErrorCode::kInvalidArgument,
                    "RGB thumbnails must be 3-channel and at most 255x255");
      }
      jfif.push_back(static_cast<uint8_t>(t.width()));
      jfif.push_back(static_cast<uint8_t>(t.height()));
      for (int32_t s : t.samples()) jfif.push_back(static_cast<uint8_t>(ClampSample(s)));
    } else {
      jfif.push_back(0);
      jfif.push_back(0);
    }
    PutSegment(out, 0xE0, jfif);
    if (options.thumbnail && !inline_thumb) {
      PutSegment(out, 0xE0, ThumbnailSegment(*options.thumbnail, options));
    }
  }

  {
    std::vector<uint8_t> dqt;
    dqt.push_back(0x00);
    for (int k = 0; k < 64; ++k) dqt.push_back(static_cast<uint8_t>(luma_q[kZigzagToNatural[k]]));
    if (color) {
      dqt.push_back(0x01);
      for (int k = 0; k < 64; ++k) dqt.push_back(static_cast<uint8_t>(chroma_q[kZigzagToNatural[k]]));
    }
    PutSegment(out, 0xDB, dqt);
  }
  {
    std::vector<uint8_t> sof = {8};
    PutU16(sof, image.height());
    PutU16(sof, image.width());
    sof.push_back(static_cast<uint8_t>(ncomp));
    sof.insert(sof.end(), {1, static_cast<uint8_t>(sub420 ? 0x22 : 0x11), 0});
    if (color) {
      sof.insert(sof.end(), {2, 0x11, 1});
      sof.insert(sof.end(), {3, 0x11, 1});
    }
    PutSegment(out, 0xC0, sof);
  }
  PutDht(out, 0, 0, luma.dc);
  PutDht(out, 1, 0, luma.ac);
  if (color) {
    PutDht(out, 0, 1, chroma.dc);
    PutDht(out, 1, 1, chroma.ac);
  }
  if (options.restart_interval > 0) {
    std::vector<uint8_t> dri;
    PutU16(dri, options.restart_interval);
    PutSegment(out, 0xDD, dri);
  }
  {
    std::vector<uint8_t> sos = {static_cast<uint8_t>(ncomp), 1, 0x00};
    if (color) sos.insert(sos.end(), {2, 0x11, 3, 0x11});
    sos.insert(sos.end(), {0, 63, 0});
    PutSegment(out, 0xDA, sos);
  }

  BitWriter writer;
  std::array<int, 3> predictors{};
  const int total = mcus_x * mcus_y;
  for (int m = 0; m < total; ++m) {
    if (options.restart_interval > 0 && m > 0 && m % options.restart_interval == 0) {
      writer.PutMarker(static_cast<uint8_t>(0xD0 + (m / options.restart_interval - 1) % 8));
      predictors = {};
    }
    const int mx = m % mcus_x;
    const int my = m / mcus_x;
    if (sub420) {
      for (int by = 0; by < 2; ++by) {
        for (int bx = 0; bx < 2; ++bx) {
          EncodeBlock(writer, planes[0], mx * 2 + bx, my * 2 + by, luma_q, luma, predictors[0]);
        }
      }
    } else {
      EncodeBlock(writer, planes[0], mx, my, luma_q, luma, predictors[0]);
    }
    if (color) {
      EncodeBlock(writer, planes[1], mx, my, chroma_q, chroma, predictors[1]);
      EncodeBlock(writer, planes[2], mx, my, chroma_q, chroma, predictors[2]);
    }
  }
  writer.Flush();
  out.insert(out.end(), writer.bytes().begin(), writer.bytes().end());
  out.push_back(0xFF);
  out.push_back(0xD9);
  return out;
}

}  // namespace bitsalvage::jpeg
