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

#ifndef BITSALVAGE_COMMON_ERROR_H_
#define BITSALVAGE_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bitsalvage {

enum class ErrorCode {
  kInvalidArgument,
  kMissingSoi,
  kUnsupportedMode,
  kTruncatedSegment,
  kMalformedSegment,
  kInvalidCodeword,
  kCoefficientOverflow,
  kUnexpectedMarker,
  kBitstreamExhausted,
  kCorruptThumbnail,
  kLengthMismatch,
  kNoSync,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Library-wide exception. Every throw site in the library uses this type (or
// a subclass) so callers can branch on code() instead of parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bitsalvage

#endif  // BITSALVAGE_COMMON_ERROR_H_
