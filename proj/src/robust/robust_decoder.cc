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

#include "bitsalvage/robust/robust_decoder.h"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>

#include "bitsalvage/common/error.h"

namespace bitsalvage::robust {
namespace {

bool AcEqual(const CoefBlock& a, const CoefBlock& b) {
  return std::equal(a.begin() + 1, a.end(), b.begin() + 1);
}

bool HasAc(const CoefBlock& a) {
  return std::any_of(a.begin() + 1, a.end(), [](int32_t v) { return v != 0; });
}

// Smallest interval index J >= min_interval opened by RST number n, i.e.
// (J - 1) mod 8 == n.
int IntervalForRestart(int n, int min_interval) {
  int j = std::max(min_interval, 1);
  while ((j - 1) % 8 != n) ++j;
  return j;
}

class RobustSession {
 public:
  RobustSession(const jpeg::JpegHeader& header, const jpeg::ScanBits& bits)
      : header_(header),
        bits_(bits),
        geometry_(jpeg::ComputeGeometry(header)),
        decoder_(header, geometry_, bits) {
    scan_.grids = jpeg::MakeEmptyGrids(geometry_);
    scan_.log.mcu_count = geometry_.mcu_count();
  }

  RobustScan Run() {
    const int total = geometry_.mcu_count();
    const int interval = header_.restart_interval;
    int i = 0;
    while (i < total) {
      if (interval > 0 && i > 0 && i % interval == 0 && !anchored_) {
        if (!HandleRestartBoundary(i)) continue;  // re-anchored; i changed
      }
      if (!DecodeOne(i)) break;
      ++i;
    }
    SyncLog& log = scan_.log;
    log.mcus_decoded = static_cast<int>(log.entries.size());
    log.unfilled = total - log.mcus_decoded;
    return std::move(scan_);
  }

 private:
  // Expected restart point before MCU i. Returns false when decoding was
  // re-anchored elsewhere (the caller re-reads i).
  bool HandleRestartBoundary(int& i) {
    const uint64_t aligned = (pos_ + 7) & ~uint64_t{7};
    const int interval_index = i / header_.restart_interval;
    const int expected = (interval_index - 1) % 8;
    const auto& barriers = bits_.barriers();
    for (size_t b = bits_.FirstBarrierAtOrAfter(aligned); b < barriers.size(); ++b) {
      if (!barriers[b].is_restart()) continue;
      if (barriers[b].bit_pos == aligned && barriers[b].restart_number() == expected) {
        pos_ = aligned;
        consumed_at_ = pos_;
        predictors_ = {};
        return true;
      }
      Reanchor(barriers[b], interval_index, i);
      return false;
    }
    // No marker left to resynchronize on; keep decoding in place.
    return true;
  }

  void Reanchor(const jpeg::Barrier& barrier, int min_interval, int& i) {
    const int j = IntervalForRestart(barrier.restart_number(), min_interval);
    i = std::min(j * header_.restart_interval, geometry_.mcu_count());
    pos_ = barrier.bit_pos;
    consumed_at_ = pos_;
    predictors_ = {};
    anchored_ = true;
    pending_reanchor_ = true;
    ++scan_.log.reanchors;
  }

  // Decodes MCU i with skip-and-retry. Returns false when the stream is
  // exhausted (or a re-anchor jumped past the frame end).
  bool DecodeOne(int& i) {
    SyncLog& log = scan_.log;
    const uint64_t first_start = pos_;
    uint32_t mask = 0;
    while (true) {
      const bool consumed = consumed_at_ && *consumed_at_ == pos_;
      const McuAttempt attempt =
          decoder_.Attempt(pos_, consumed, predictors_, /*zero_fill=*/true);
      if (attempt.ok()) {
        decoder_.Store(attempt.blocks, i, scan_.grids);
        SyncEntry entry;
        entry.mcu_index = i;
        entry.start_bit = pos_;
        entry.end_bit = attempt.end_bit;
        entry.retry_count = pos_ - first_start;
        entry.failure_mask = mask;
        entry.reanchored = pending_reanchor_;
        log.entries.push_back(entry);
        if (attempt.end_bit > bits_.bit_count()) {
          log.exhausted = true;
          log.zero_fill_bits += attempt.end_bit - std::max(pos_, bits_.bit_count());
        }
        log.bits_discarded += entry.retry_count;
        if (entry.retry_count > 0) ++log.sync_events;
        pos_ = attempt.end_bit;
        predictors_ = attempt.predictors;
        consumed_at_.reset();
        anchored_ = false;
        pending_reanchor_ = false;
        return true;
      }
      const DecodeFailure& failure = *attempt.failure;
      mask |= FailureBit(failure.kind);
      ++log.failure_counts[static_cast<size_t>(failure.kind)];
      if (pos_ >= bits_.bit_count()) {
        // Only fill bits remain and they do not form an MCU.
        log.exhausted = true;
        log.bits_discarded += pos_ - first_start;
        return false;
      }
      if (failure.kind == FailureKind::kUnexpectedMarker &&
          header_.restart_interval > 0) {
        const auto& barriers = bits_.barriers();
        const size_t b = bits_.FirstBarrierAtOrAfter(failure.bit_address);
        if (b < barriers.size() && barriers[b].bit_pos == failure.bit_address &&
            barriers[b].is_restart()) {
          log.bits_discarded += barriers[b].bit_pos - first_start;
          Reanchor(barriers[b], i / header_.restart_interval + 1, i);
          if (i >= geometry_.mcu_count()) return false;
          return DecodeOne(i);
        }
      }
      ++pos_;
    }
  }

  const jpeg::JpegHeader& header_;
  const jpeg::ScanBits& bits_;
  jpeg::ScanGeometry geometry_;
  jpeg::McuDecoder decoder_;
  RobustScan scan_;
  uint64_t pos_ = 0;
  DcPredictors predictors_{};
  std::optional<uint64_t> consumed_at_;
  bool anchored_ = false;
  bool pending_reanchor_ = false;
};

}  // namespace

nlohmann::json ToJson(const SyncLog& log, bool include_entries) {
  nlohmann::json j;
  j["mcu_count"] = log.mcu_count;
  j["mcus_decoded"] = log.mcus_decoded;
  j["unfilled"] = log.unfilled;
  j["bits_discarded"] = log.bits_discarded;
  j["sync_events"] = log.sync_events;
  j["reanchors"] = log.reanchors;
  j["exhausted"] = log.exhausted;
  j["zero_fill_bits"] = log.zero_fill_bits;
  nlohmann::json counts = nlohmann::json::object();
  for (int k = 0; k < 4; ++k) {
    counts[std::string(jpeg::FailureKindName(static_cast<FailureKind>(k)))] =
        log.failure_counts[k];
  }
  j["failure_counts"] = counts;
  if (include_entries) {
    nlohmann::json entries = nlohmann::json::array();
    for (const SyncEntry& e : log.entries) {
      nlohmann::json kinds = nlohmann::json::array();
      for (int k = 0; k < 4; ++k) {
        if (e.failure_mask & (1u << k)) {
          kinds.push_back(jpeg::FailureKindName(static_cast<FailureKind>(k)));
        }
      }
      entries.push_back({{"mcu_index", e.mcu_index},
                         {"start_bit", e.start_bit},
                         {"end_bit", e.end_bit},
                         {"retry_count", e.retry_count},
                         {"failure_kinds", kinds},
                         {"reanchored", e.reanchored}});
    }
    j["entries"] = entries;
  }
  return j;
}

McuAttempt DecodeMcuAttempt(const jpeg::McuDecoder& decoder, uint64_t start,
                            const DcPredictors& predictors) {
  return decoder.Attempt(start, false, predictors);
}

RobustScan RobustDecodeScan(const jpeg::JpegHeader& header,
                            const jpeg::ScanBits& bits) {
  return RobustSession(header, bits).Run();
}

std::vector<CoefBlock> BlockSequence(const std::vector<CoefGrid>& grids,
                                     const jpeg::JpegHeader& header) {
  const jpeg::ScanGeometry g = jpeg::ComputeGeometry(header);
  std::vector<CoefBlock> out;
  out.reserve(static_cast<size_t>(g.mcu_count()) * g.blocks_per_mcu);
  for (int m = 0; m < g.mcu_count(); ++m) {
    const int mx = m % g.mcus_x;
    const int my = m / g.mcus_x;
    for (const auto& part : g.parts) {
      for (int by = 0; by < part.v; ++by) {
        for (int bx = 0; bx < part.h; ++bx) {
          out.push_back(grids[part.component].at(mx * part.h + bx, my * part.v + by));
        }
      }
    }
  }
  return out;
}

SyncResult SynchronizationDistance(std::span<const CoefBlock> original,
                                   std::span<const CoefBlock> robust,
                                   const SyncSearch& search) {
  const auto orig_at = [&](size_t r) -> std::optional<size_t> {
    const std::ptrdiff_t q = static_cast<std::ptrdiff_t>(r) + search.offset;
    if (q < 0 || static_cast<size_t>(q) >= original.size()) return std::nullopt;
    return static_cast<size_t>(q);
  };

  SyncResult result;
  size_t d = search.robust_from;
  for (; d < robust.size(); ++d) {
    const auto q = orig_at(d);
    if (!q || !AcEqual(robust[d], original[*q])) break;
  }
  if (d >= robust.size()) return result;
  result.corrupted = true;
  result.first_corrupt = d;

  const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(search.max_shift);
  for (size_t n = 0; n <= search.max_distance && d + n < robust.size(); ++n) {
    const size_t p = d + n;
    const size_t window = std::min(search.window, robust.size() - p);
    bool informative = false;
    for (size_t w = 0; w < window; ++w) informative |= HasAc(robust[p + w]);
    if (!informative) continue;
    const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(p) + search.offset;
    // Closest candidate alignment first; on equal distance prefer the
    // original lagging behind (blocks eaten by the corruption).
    for (std::ptrdiff_t s = 0; s <= radius; ++s) {
      for (std::ptrdiff_t sign : {1, -1}) {
        if (s == 0 && sign == -1) continue;
        const std::ptrdiff_t q = center + sign * s;
        if (q < 0 || static_cast<size_t>(q) + window > original.size()) continue;
        bool match = true;
        for (size_t w = 0; w < window && match; ++w) {
          match = AcEqual(robust[p + w], original[static_cast<size_t>(q) + w]);
        }
        if (match) {
          result.distance = n;
          result.robust_sync = p;
          result.original_sync = static_cast<size_t>(q);
          return result;
        }
      }
    }
  }
  throw Error(ErrorCode::kNoSync, "AC sequences never re-synchronize after block " +
                                      std::to_string(d));
}

}  // namespace bitsalvage::robust
