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

#ifndef BITSALVAGE_JPEG_DECODER_H_
#define BITSALVAGE_JPEG_DECODER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image.h"
#include "bitsalvage/jpeg/bitstream.h"
#include "bitsalvage/jpeg/header.h"

namespace bitsalvage::jpeg {

// 64 quantized coefficients in natural order. [0] holds the accumulated
// (DPCM-decoded) DC value. int32 because corrupted streams can accumulate
// DC far outside the 12-bit range.
using CoefBlock = std::array<int32_t, 64>;

struct CoefGrid {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<CoefBlock> blocks;

  CoefBlock& at(int bx, int by) {
    return blocks[static_cast<size_t>(by) * blocks_x + bx];
  }
  const CoefBlock& at(int bx, int by) const {
    return blocks[static_cast<size_t>(by) * blocks_x + bx];
  }
  bool operator==(const CoefGrid&) const = default;
};

// Per-frame MCU layout derived from the header.
struct ScanGeometry {
  struct Part {
    int component = 0;  // index into JpegHeader::components
    int h = 1;          // blocks per MCU horizontally for this component
    int v = 1;
  };
  int mcus_x = 0;
  int mcus_y = 0;
  int mcu_width = 8;   // pixels
  int mcu_height = 8;
  int max_h = 1;
  int max_v = 1;
  int blocks_per_mcu = 0;
  std::vector<Part> parts;  // scan order
  std::vector<std::pair<int, int>> grid_dims;  // per frame component

  int mcu_count() const { return mcus_x * mcus_y; }
};

ScanGeometry ComputeGeometry(const JpegHeader& header);
std::vector<CoefGrid> MakeEmptyGrids(const ScanGeometry& geometry);

enum class FailureKind {
  kInvalidCodeword,
  kCoefficientOverflow,
  kUnexpectedMarker,
  kBitstreamExhausted,
};

std::string_view FailureKindName(FailureKind kind);

struct DecodeFailure {
  FailureKind kind = FailureKind::kInvalidCodeword;
  uint64_t bit_address = 0;  // bits from the start of the unstuffed scan
  int component = 0;         // scan part index
  int block_in_mcu = 0;      // block index within the MCU
};

using DcPredictors = std::array<int32_t, 4>;  // indexed by scan part

struct McuBlocks {
  std::array<CoefBlock, 10> blocks{};
  int count = 0;
};

struct McuAttempt {
  std::optional<DecodeFailure> failure;
  uint64_t end_bit = 0;       // first bit after the MCU on success
  DcPredictors predictors{};  // updated predictors on success
  McuBlocks blocks;

  bool ok() const { return !failure.has_value(); }
};

// Huffman/RLE decoding of single MCUs against a fixed header and scan.
class McuDecoder {
 public:
  McuDecoder(const JpegHeader& header, const ScanGeometry& geometry,
             const ScanBits& bits);

  // Decodes one MCU starting at bit `start`. A barrier sitting exactly at
  // `start` is ignored when `barrier_consumed` is set (the restart marker
  // that was just processed). With `zero_fill`, reads past the end of the
  // scan data return 0 bits instead of failing, as libjpeg does for
  // truncated input. Input predictors are never modified.
  McuAttempt Attempt(uint64_t start, bool barrier_consumed,
                     const DcPredictors& predictors,
                     bool zero_fill = false) const;

  // Writes a successful MCU into the coefficient grids.
  void Store(const McuBlocks& blocks, int mcu_index,
             std::vector<CoefGrid>& grids) const;

  const ScanGeometry& geometry() const { return geometry_; }
  const ScanBits& bits() const { return bits_; }

 private:
  const JpegHeader& header_;
  const ScanGeometry& geometry_;
  const ScanBits& bits_;
};

// Start/end bit addresses of one decoded MCU.
struct McuSpan {
  int mcu_index = 0;
  uint64_t start_bit = 0;
  uint64_t end_bit = 0;
  bool operator==(const McuSpan&) const = default;
};

struct StandardScan {
  std::vector<CoefGrid> grids;
  std::vector<McuSpan> trace;
};

// Thrown by DecodeScanStandard. Carries what was decoded before the abort
// so a caller can still render the partial raster.
class DecodeError : public Error {
 public:
  DecodeError(const DecodeFailure& failure, int mcu_index,
              std::vector<CoefGrid> partial);

  const DecodeFailure& failure() const { return failure_; }
  int mcu_index() const { return mcu_index_; }
  const std::vector<CoefGrid>& partial_grids() const { return partial_; }

 private:
  DecodeFailure failure_;
  int mcu_index_;
  std::vector<CoefGrid> partial_;
};

ErrorCode ToErrorCode(FailureKind kind);

// Conventional decoding: the first failure aborts the scan. Restart markers
// must sit exactly where the restart interval puts them, and the data must
// end within one byte of the last MCU; a violation of either is reported as
// kUnexpectedMarker (mcu_index == mcu_count() for trailing data).
StandardScan DecodeScanStandard(const JpegHeader& header, const ScanBits& bits);

// Dequantize, IDCT, chroma upsample (replication), YCbCr -> RGB. Output is
// working domain; call ToDisplay() for a [0, 255] raster.
ImageBuffer ReconstructPixels(const std::vector<CoefGrid>& grids,
                              const JpegHeader& header);

// Convenience: parse + standard decode + reconstruct, display domain.
ImageBuffer DecodeJpeg(std::span<const uint8_t> bytes);

// Decodes the thumbnail carried in the header, if any. Throws
// Error(kCorruptThumbnail) when the payload does not decode.
std::optional<ImageBuffer> ExtractThumbnail(const JpegHeader& header);

}  // namespace bitsalvage::jpeg

#endif  // BITSALVAGE_JPEG_DECODER_H_
