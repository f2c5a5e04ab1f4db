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

#include "bitsalvage/common/error.h"

namespace bitsalvage {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMissingSoi: return "MissingSOI";
    case ErrorCode::kUnsupportedMode: return "UnsupportedMode";
    case ErrorCode::kTruncatedSegment: return "TruncatedSegment";
    case ErrorCode::kMalformedSegment: return "MalformedSegment";
    case ErrorCode::kInvalidCodeword: return "InvalidCodeword";
    case ErrorCode::kCoefficientOverflow: return "CoefficientOverflow";
    case ErrorCode::kUnexpectedMarker: return "UnexpectedMarker";
    case ErrorCode::kBitstreamExhausted: return "BitstreamExhausted";
    case ErrorCode::kCorruptThumbnail: return "CorruptThumbnail";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoSync: return "NoSync";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace bitsalvage
