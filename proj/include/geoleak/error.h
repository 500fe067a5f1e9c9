// Copyright 2026 The Geoleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOLEAK_ERROR_H_
#define GEOLEAK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoleak {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidCoordinate,
  kOutOfProjectionRange,
  kDuplicateId,
  kUnknownUser,
  kSelfFavorite,
  kNegativeDistance,
  kInsufficientSamples,
  kCollinearAdversaries,
  kEmptyRegion,
  kVictimNeverVisible,
  kNonConvergence,
  kDistanceHidden,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. Callers that need to map
// failures onto outcomes (the harness) switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // what() without the code prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace geoleak

#endif  // GEOLEAK_ERROR_H_
