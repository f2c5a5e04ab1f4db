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

#include "bitsalvage/jpeg/decoder.h"

#include <algorithm>
#include <limits>
#include <string>

#include "bitsalvage/jpeg/dct.h"
#include "bitsalvage/jpeg/tables.h"

namespace bitsalvage::jpeg {
namespace {

constexpr uint64_t kNoBarrier = std::numeric_limits<uint64_t>::max();

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

// Bit reader over one MCU attempt. Any read that lands on a barrier or runs
// off the end of the data records a failure and returns -1.
class AttemptReader {
 public:
  AttemptReader(const ScanBits& bits, uint64_t start, bool barrier_consumed,
                bool zero_fill)
      : bits_(bits), pos_(start), total_(bits.bit_count()), zero_fill_(zero_fill) {
    const auto& barriers = bits.barriers();
    size_t i = bits.FirstBarrierAtOrAfter(start);
    if (barrier_consumed) {
      while (i < barriers.size() && barriers[i].bit_pos == start) ++i;
    }
    next_barrier_ = i < barriers.size() ? barriers[i].bit_pos : kNoBarrier;
  }

  int Bit() {
    if (pos_ == next_barrier_) {
      Fail(FailureKind::kUnexpectedMarker);
      return -1;
    }
    if (pos_ >= total_) {
      if (zero_fill_) {
        ++pos_;
        return 0;
      }
      Fail(FailureKind::kBitstreamExhausted);
      return -1;
    }
    return bits_.bit(pos_++);
  }

  // Reads `count` raw bits MSB first; returns false on failure.
  bool Bits(int count, int32_t& value) {
    value = 0;
    for (int i = 0; i < count; ++i) {
      const int b = Bit();
      if (b < 0) return false;
      value = (value << 1) | b;
    }
    return true;
  }

  // Returns the decoded symbol or -1 on failure.
  int Symbol(const HuffmanTable& table) {
    int32_t code = 0;
    for (int length = 1; length <= 16; ++length) {
      const int b = Bit();
      if (b < 0) return -1;
      code = (code << 1) | b;
      if (table.max_code(length) >= 0 && code <= table.max_code(length)) {
        return table.symbols()[table.val_offset(length) + code -
                               table.min_code(length)];
      }
    }
    Fail(FailureKind::kInvalidCodeword);
    return -1;
  }

  void Fail(FailureKind kind) {
    if (!failure_) failure_ = DecodeFailure{kind, pos_, 0, 0};
  }

  uint64_t pos() const { return pos_; }
  std::optional<DecodeFailure>& failure() { return failure_; }

 private:
  const ScanBits& bits_;
  uint64_t pos_;
  uint64_t total_;
  bool zero_fill_;
  uint64_t next_barrier_;
  std::optional<DecodeFailure> failure_;
};

int32_t Extend(int32_t v, int size) {
  return v < (1 << (size - 1)) ? v - (1 << size) + 1 : v;
}

// Decodes one block. On failure the reader's failure is set.
bool DecodeBlock(AttemptReader& reader, const HuffmanTable& dc,
                 const HuffmanTable& ac, int32_t& predictor, CoefBlock& block) {
  block.fill(0);
  const int s = reader.Symbol(dc);
  if (s < 0) return false;
  if (s > 11) {
    reader.Fail(FailureKind::kInvalidCodeword);
    return false;
  }
  int32_t diff = 0;
  if (s > 0) {
    if (!reader.Bits(s, diff)) return false;
    diff = Extend(diff, s);
  }
  predictor += diff;
  block[0] = predictor;

  int k = 1;
  while (k < 64) {
    const int rs = reader.Symbol(ac);
    if (rs < 0) return false;
    const int run = rs >> 4;
    const int size = rs & 0x0F;
    if (size == 0) {
      if (run == 0) break;  // EOB
      if (run != 15) {
        reader.Fail(FailureKind::kInvalidCodeword);
        return false;
      }
      k += 16;
      if (k > 64) {
        reader.Fail(FailureKind::kCoefficientOverflow);
        return false;
      }
      continue;
    }
    k += run;
    if (k > 63) {
      reader.Fail(FailureKind::kCoefficientOverflow);
      return false;
    }
    if (size > 10) {
      reader.Fail(FailureKind::kInvalidCodeword);
      return false;
    }
    int32_t v = 0;
    if (!reader.Bits(size, v)) return false;
    block[kZigzagToNatural[k]] = Extend(v, size);
    ++k;
  }
  return true;
}

std::array<int, 64> NaturalToZigzag() {
  std::array<int, 64> out{};
  for (int k = 0; k < 64; ++k) out[kZigzagToNatural[k]] = k;
  return out;
}

}  // namespace

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kInvalidCodeword: return "InvalidCodeword";
    case FailureKind::kCoefficientOverflow: return "CoefficientOverflow";
    case FailureKind::kUnexpectedMarker: return "UnexpectedMarker";
    case FailureKind::kBitstreamExhausted: return "BitstreamExhausted";
  }
  return "Unknown";
}

ErrorCode ToErrorCode(FailureKind kind) {
  switch (kind) {
    case FailureKind::kInvalidCodeword: return ErrorCode::kInvalidCodeword;
    case FailureKind::kCoefficientOverflow: return ErrorCode::kCoefficientOverflow;
    case FailureKind::kUnexpectedMarker: return ErrorCode::kUnexpectedMarker;
    case FailureKind::kBitstreamExhausted: return ErrorCode::kBitstreamExhausted;
  }
  return ErrorCode::kInvalidCodeword;
}

ScanGeometry ComputeGeometry(const JpegHeader& header) {
  ScanGeometry g;
  if (header.components.size() == 1) {
    // Single-component scans are non-interleaved: one block per MCU.
    g.mcus_x = CeilDiv(header.width, 8);
    g.mcus_y = CeilDiv(header.height, 8);
    g.parts.push_back({0, 1, 1});
    g.grid_dims.emplace_back(g.mcus_x, g.mcus_y);
    g.blocks_per_mcu = 1;
    return g;
  }
  for (const auto& c : header.components) {
    g.max_h = std::max<int>(g.max_h, c.h_sampling);
    g.max_v = std::max<int>(g.max_v, c.v_sampling);
  }
  g.mcu_width = 8 * g.max_h;
  g.mcu_height = 8 * g.max_v;
  g.mcus_x = CeilDiv(header.width, g.mcu_width);
  g.mcus_y = CeilDiv(header.height, g.mcu_height);
  for (const auto& c : header.components) {
    g.grid_dims.emplace_back(g.mcus_x * c.h_sampling, g.mcus_y * c.v_sampling);
  }
  for (int idx : header.scan_components) {
    const auto& c = header.components[idx];
    g.parts.push_back({idx, c.h_sampling, c.v_sampling});
    g.blocks_per_mcu += c.h_sampling * c.v_sampling;
  }
  return g;
}

std::vector<CoefGrid> MakeEmptyGrids(const ScanGeometry& geometry) {
  std::vector<CoefGrid> grids;
  for (auto [bx, by] : geometry.grid_dims) {
    CoefGrid grid;
    grid.blocks_x = bx;
    grid.blocks_y = by;
    grid.blocks.assign(static_cast<size_t>(bx) * by, CoefBlock{});
    grids.push_back(std::move(grid));
  }
  return grids;
}

McuDecoder::McuDecoder(const JpegHeader& header, const ScanGeometry& geometry,
                       const ScanBits& bits)
    : header_(header), geometry_(geometry), bits_(bits) {}

McuAttempt McuDecoder::Attempt(uint64_t start, bool barrier_consumed,
                               const DcPredictors& predictors,
                               bool zero_fill) const {
  McuAttempt attempt;
  attempt.predictors = predictors;
  AttemptReader reader(bits_, start, barrier_consumed, zero_fill);
  int block_index = 0;
  for (size_t p = 0; p < geometry_.parts.size(); ++p) {
    const auto& part = geometry_.parts[p];
    const auto& comp = header_.components[part.component];
    const HuffmanTable& dc = *header_.dc_tables[comp.dc_table];
    const HuffmanTable& ac = *header_.ac_tables[comp.ac_table];
    for (int b = 0; b < part.h * part.v; ++b, ++block_index) {
      if (!DecodeBlock(reader, dc, ac, attempt.predictors[p],
                       attempt.blocks.blocks[block_index])) {
        DecodeFailure failure = *reader.failure();
        failure.component = static_cast<int>(p);
        failure.block_in_mcu = block_index;
        attempt.failure = failure;
        attempt.predictors = predictors;
        return attempt;
      }
    }
  }
  attempt.blocks.count = block_index;
  attempt.end_bit = reader.pos();
  return attempt;
}

void McuDecoder::Store(const McuBlocks& blocks, int mcu_index,
                       std::vector<CoefGrid>& grids) const {
  const int mx = mcu_index % geometry_.mcus_x;
  const int my = mcu_index / geometry_.mcus_x;
  int block_index = 0;
  for (const auto& part : geometry_.parts) {
    CoefGrid& grid = grids[part.component];
    for (int by = 0; by < part.v; ++by) {
      for (int bx = 0; bx < part.h; ++bx) {
        grid.at(mx * part.h + bx, my * part.v + by) = blocks.blocks[block_index++];
      }
    }
  }
}

DecodeError::DecodeError(const DecodeFailure& failure, int mcu_index,
                         std::vector<CoefGrid> partial)
    : Error(ToErrorCode(failure.kind),
            "scan decoding aborted at MCU " + std::to_string(mcu_index) +
                ", bit " + std::to_string(failure.bit_address)),
      failure_(failure),
      mcu_index_(mcu_index),
      partial_(std::move(partial)) {}

StandardScan DecodeScanStandard(const JpegHeader& header, const ScanBits& bits) {
  const ScanGeometry geometry = ComputeGeometry(header);
  const McuDecoder decoder(header, geometry, bits);
  StandardScan scan;
  scan.grids = MakeEmptyGrids(geometry);
  DcPredictors predictors{};
  uint64_t pos = 0;
  bool consumed = false;
  const int interval = header.restart_interval;
  for (int i = 0; i < geometry.mcu_count(); ++i) {
    if (interval > 0 && i > 0 && i % interval == 0) {
      pos = (pos + 7) & ~uint64_t{7};
      const int expected = (i / interval - 1) % 8;
      const size_t bi = bits.FirstBarrierAtOrAfter(pos);
      const auto& barriers = bits.barriers();
      if (bi >= barriers.size() || barriers[bi].bit_pos != pos ||
          !barriers[bi].is_restart() ||
          barriers[bi].restart_number() != expected) {
        throw DecodeError({FailureKind::kUnexpectedMarker, pos, 0, 0}, i,
                          std::move(scan.grids));
      }
      consumed = true;
      predictors = {};
    }
    const McuAttempt attempt = decoder.Attempt(pos, consumed, predictors);
    if (!attempt.ok()) throw DecodeError(*attempt.failure, i, std::move(scan.grids));
    decoder.Store(attempt.blocks, i, scan.grids);
    scan.trace.push_back({i, pos, attempt.end_bit});
    pos = attempt.end_bit;
    predictors = attempt.predictors;
    consumed = false;
  }
  // A conforming scan ends with at most seven padding bits before EOI.
  // Anything more means the MCUs were decoded out of step with the data.
  if (bits.FirstBarrierAtOrAfter(pos) < bits.barriers().size() ||
      bits.bit_count() - std::min(pos, bits.bit_count()) >= 8) {
    throw DecodeError({FailureKind::kUnexpectedMarker, pos, 0, 0},
                      geometry.mcu_count(), std::move(scan.grids));
  }
  return scan;
}

ImageBuffer ReconstructPixels(const std::vector<CoefGrid>& grids,
                              const JpegHeader& header) {
  static const std::array<int, 64> kNatToZz = NaturalToZigzag();
  const ScanGeometry geometry = ComputeGeometry(header);
  const int ncomp = static_cast<int>(header.components.size());

  struct Plane {
    int width = 0;
    std::vector<int32_t> samples;
  };
  std::vector<Plane> planes(ncomp);
  for (int c = 0; c < ncomp; ++c) {
    const CoefGrid& grid = grids[c];
    const QuantTable& qt = *header.quant_tables[header.components[c].quant_table];
    Plane& plane = planes[c];
    plane.width = grid.blocks_x * 8;
    plane.samples.assign(static_cast<size_t>(plane.width) * grid.blocks_y * 8, 0);
    std::array<double, 64> deq{};
    for (int by = 0; by < grid.blocks_y; ++by) {
      for (int bx = 0; bx < grid.blocks_x; ++bx) {
        const CoefBlock& block = grid.at(bx, by);
        for (int i = 0; i < 64; ++i) {
          deq[i] = static_cast<double>(block[i]) * qt[kNatToZz[i]];
        }
        const auto pixels = InverseDct(deq);
        for (int y = 0; y < 8; ++y) {
          int32_t* dst = &plane.samples[static_cast<size_t>(by * 8 + y) * plane.width + bx * 8];
          std::copy_n(&pixels[y * 8], 8, dst);
        }
      }
    }
  }

  if (ncomp == 1) {
    ImageBuffer out(header.width, header.height, 1, SampleDomain::kWorking);
    for (int y = 0; y < header.height; ++y) {
      for (int x = 0; x < header.width; ++x) {
        out.at(x, y, 0) = planes[0].samples[static_cast<size_t>(y) * planes[0].width + x];
      }
    }
    return out;
  }

  ImageBuffer out(header.width, header.height, 3, SampleDomain::kWorking);
  auto sample = [&](int c, int x, int y) {
    const auto& comp = header.components[c];
    const int sx = x * comp.h_sampling / geometry.max_h;
    const int sy = y * comp.v_sampling / geometry.max_v;
    return static_cast<double>(planes[c].samples[static_cast<size_t>(sy) * planes[c].width + sx]);
  };
  for (int y = 0; y < header.height; ++y) {
    for (int x = 0; x < header.width; ++x) {
      const double yy = sample(0, x, y);
      const double cb = sample(1, x, y) - 128.0;
      const double cr = sample(2, x, y) - 128.0;
      out.at(x, y, 0) = RoundHalfAway(yy + 1.402 * cr);
      out.at(x, y, 1) = RoundHalfAway(yy - 0.344136 * cb - 0.714136 * cr);
      out.at(x, y, 2) = RoundHalfAway(yy + 1.772 * cb);
    }
  }
  return out;
}

ImageBuffer DecodeJpeg(std::span<const uint8_t> bytes) {
  const JpegHeader header = ParseHeaders(bytes);
  const ScanBits bits = ScanBits::FromStuffed(ScanPayload(bytes, header));
  const StandardScan scan = DecodeScanStandard(header, bits);
  return ReconstructPixels(scan.grids, header).ToDisplay();
}

std::optional<ImageBuffer> ExtractThumbnail(const JpegHeader& header) {
  if (!header.thumbnail) return std::nullopt;
  const Thumbnail& t = *header.thumbnail;
  if (t.format == ThumbnailFormat::kRgb) {
    if (t.width < 1 || t.height < 1 ||
        t.bytes.size() != static_cast<size_t>(t.width) * t.height * 3) {
      throw Error(ErrorCode::kCorruptThumbnail, "RGB thumbnail size mismatch");
    }
    ImageBuffer out(t.width, t.height, 3);
    std::copy(t.bytes.begin(), t.bytes.end(), out.samples().begin());
    return out;
  }
  try {
    return DecodeJpeg(t.bytes);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptThumbnail, e.what());
  }
}

}  // namespace bitsalvage::jpeg
