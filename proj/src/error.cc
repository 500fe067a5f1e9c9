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

#include "geoleak/error.h"

namespace geoleak {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidCoordinate: return "InvalidCoordinate";
    case ErrorCode::kOutOfProjectionRange: return "OutOfProjectionRange";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownUser: return "UnknownUser";
    case ErrorCode::kSelfFavorite: return "SelfFavorite";
    case ErrorCode::kNegativeDistance: return "NegativeDistance";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kCollinearAdversaries: return "CollinearAdversaries";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kVictimNeverVisible: return "VictimNeverVisible";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kDistanceHidden: return "DistanceHidden";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace geoleak
