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

#ifndef BITSALVAGE_ROBUST_ROBUST_DECODER_H_
#define BITSALVAGE_ROBUST_ROBUST_DECODER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bitsalvage/jpeg/bitstream.h"
#include "bitsalvage/jpeg/decoder.h"
#include "bitsalvage/jpeg/header.h"
#include "json.hpp"

namespace bitsalvage::robust {

using jpeg::CoefBlock;
using jpeg::CoefGrid;
using jpeg::DcPredictors;
using jpeg::DecodeFailure;
using jpeg::FailureKind;
using jpeg::McuAttempt;

inline constexpr uint32_t FailureBit(FailureKind kind) {
  return 1u << static_cast<uint32_t>(kind);
}

// One successfully decoded MCU. start_bit is the address k at which the
// accepted attempt began, end_bit the address g where the next MCU starts.
struct SyncEntry {
  int mcu_index = 0;
  uint64_t start_bit = 0;
  uint64_t end_bit = 0;
  uint64_t retry_count = 0;   // bits discarded before the accepted attempt
  uint32_t failure_mask = 0;  // FailureBit() of every kind seen while retrying
  bool reanchored = false;    // started at a restart marker found by search

  bool operator==(const SyncEntry&) const = default;
};

struct SyncLog {
  std::vector<SyncEntry> entries;
  int mcu_count = 0;
  int mcus_decoded = 0;
  int unfilled = 0;
  uint64_t bits_discarded = 0;
  int sync_events = 0;  // MCUs that needed at least one retry
  int reanchors = 0;
  bool exhausted = false;       // decoding ran past the end of the data
  uint64_t zero_fill_bits = 0;  // fill bits consumed past the end
  std::array<uint64_t, 4> failure_counts{};  // indexed by FailureKind

  bool operator==(const SyncLog&) const = default;
};

nlohmann::json ToJson(const SyncLog& log, bool include_entries);

struct RobustScan {
  std::vector<CoefGrid> grids;
  SyncLog log;
};

// One MCU decode attempt at `start` with DPCM against `predictors`. Returns
// the failure instead of throwing; predictors are only advanced on success.
McuAttempt DecodeMcuAttempt(const jpeg::McuDecoder& decoder, uint64_t start,
                            const DcPredictors& predictors);

// Error-resilient scan decoding. Whenever an MCU fails, its partial blocks
// are dropped and decoding restarts one bit later, until the MCU decodes
// cleanly. Reads past the end of the data yield zero bits, so MCUs whose
// data was eaten by a block shift are still produced; decoding stops only
// when a start address beyond the data cannot form an MCU, and MCUs never
// reached stay all-zero. With restart intervals, a misplaced RSTn
// re-anchors decoding at the interval that marker opens.
RobustScan RobustDecodeScan(const jpeg::JpegHeader& header,
                            const jpeg::ScanBits& bits);

// Blocks of all components flattened in decode order (MCU by MCU, scan
// component order, row-major within a component's MCU footprint).
std::vector<CoefBlock> BlockSequence(const std::vector<CoefGrid>& grids,
                                     const jpeg::JpegHeader& header);

struct SyncSearch {
  size_t robust_from = 0;       // first robust block to inspect
  std::ptrdiff_t offset = 0;    // original index = robust index + offset
  size_t window = 4;            // blocks that must match to call it synced
  size_t max_shift = 64;        // block-shift search radius
  size_t max_distance = 4096;   // give up after this many blocks
};

struct SyncResult {
  bool corrupted = false;     // false: sequences agree from robust_from on
  size_t first_corrupt = 0;   // robust index of first AC mismatch
  size_t distance = 0;        // blocks from first_corrupt to the sync point
  size_t robust_sync = 0;     // robust index where matching resumes
  size_t original_sync = 0;   // matching original index
  std::ptrdiff_t offset() const {
    return static_cast<std::ptrdiff_t>(original_sync) -
           static_cast<std::ptrdiff_t>(robust_sync);
  }
};

// Number of robust blocks after the first corrupted one until the AC
// coefficients again track the original for `window` consecutive blocks
// (allowing a block shift of up to max_shift). DC is ignored because of DC
// error propagation. Throws Error(kNoSync) when no such point exists.
SyncResult SynchronizationDistance(std::span<const CoefBlock> original,
                                   std::span<const CoefBlock> robust,
                                   const SyncSearch& search = {});

}  // namespace bitsalvage::robust

#endif  // BITSALVAGE_ROBUST_ROBUST_DECODER_H_
