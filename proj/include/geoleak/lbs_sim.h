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

#ifndef GEOLEAK_LBS_SIM_H_
#define GEOLEAK_LBS_SIM_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geoleak/geodesy.h"
#include "geoleak/obfuscation.h"
#include "geoleak/random.h"
#include "json.hpp"

namespace geoleak::sim {

struct UserId {
  std::string value;

  friend auto operator<=>(const UserId&, const UserId&) = default;
  friend bool operator==(const UserId&, const UserId&) = default;
};

enum class DisclosureMode { kExactDistance, kHiddenRespectsFlag, kObfuscated };

// Jack'd-style accuracy preference. Stored with the policy and serialized,
// but it never changes what a query shows.
enum class AccuracySetting { kUnset, kClose, kNear, kFar };

std::string_view DisclosureModeName(DisclosureMode mode);
std::string_view AccuracySettingName(AccuracySetting setting);

struct DisclosurePolicy {
  DisclosureMode mode = DisclosureMode::kExactDistance;
  std::optional<obfuscation::ObfuscationPattern> pattern;  // set iff kObfuscated
  double drop_probability = 0.0;
  AccuracySetting accuracy_setting = AccuracySetting::kUnset;
  // Screen length cap for sensitivity experiments; unlimited when unset.
  std::optional<std::size_t> max_entries;

  static DisclosurePolicy ExactDistance();
  static DisclosurePolicy HiddenRespectsFlag(double drop_probability = 0.0);
  static DisclosurePolicy Obfuscated(const obfuscation::ObfuscationPattern& pattern,
                                     double drop_probability);

  // Throws kInvalidArgument on an out-of-range drop probability or a
  // pattern that is present exactly when it should not be.
  void Validate() const;
};

nlohmann::json ToJson(const DisclosurePolicy& policy);
DisclosurePolicy PolicyFromJson(const nlohmann::json& j);

struct SimUser {
  UserId id;
  geo::GeoPoint location;  // what the service believes, possibly a fake fix
  bool show_distance = true;
};

enum class QueryKind { kNearbyScreen, kFavorites, kProfileView };

std::string_view QueryKindName(QueryKind kind);

struct QueryRecord {
  UserId observer;
  QueryKind kind = QueryKind::kNearbyScreen;
  std::optional<UserId> subject;
  std::uint64_t tick = 0;
};

struct ScreenEntry {
  UserId user;
  std::optional<double> shown_distance;
  // Ground truth for tests and the harness. Attack code reads screens
  // through attack::Session, which does not expose it.
  double true_distance = 0.0;
};

struct QueryResponse {
  std::vector<ScreenEntry> entries;  // ascending true distance, then id

  std::optional<std::size_t> IndexOf(const UserId& id) const;
  bool Contains(const UserId& id) const { return IndexOf(id).has_value(); }
};

nlohmann::json ToJson(const QueryResponse& response);

// The simulated proximity service. Single-owner: callers serialize access.
class World {
 public:
  World(DisclosurePolicy policy, std::uint64_t seed);

  // Throws kDuplicateId or kInvalidCoordinate.
  void AddUser(const UserId& id, const geo::GeoPoint& location, bool show_distance);
  // Throws kUnknownUser or kInvalidCoordinate. The position is not checked
  // against the projection here; a far-away observer fails at query time.
  void MoveUser(const UserId& id, const geo::GeoPoint& location);
  void SetShowDistance(const UserId& id, bool show_distance);

  // Everyone except the observer, sorted, each entry independently dropped
  // with the policy's drop probability. Throws kUnknownUser or
  // kOutOfProjectionRange.
  QueryResponse QueryNearby(const UserId& observer);

  // Throws kUnknownUser or kSelfFavorite. Idempotent.
  void AddFavorite(const UserId& owner, const UserId& target);
  // The observer's favorites, sorted, never dropped.
  QueryResponse QueryFavorites(const UserId& observer);
  // Distance shown on the subject's profile page, absent when hidden.
  std::optional<double> ViewProfile(const UserId& observer, const UserId& subject);

  bool Contains(const UserId& id) const { return index_.contains(id); }
  const SimUser& user(const UserId& id) const;
  const std::vector<SimUser>& users() const { return users_; }
  const std::set<UserId>& favorites(const UserId& owner) const;
  const std::map<UserId, std::set<UserId>>& all_favorites() const { return favorites_; }

  const DisclosurePolicy& policy() const { return policy_; }
  std::uint64_t seed() const { return seed_; }
  // Unset until the first user arrives; frozen by the first query.
  const std::optional<geo::Projection>& projection() const { return projection_; }
  bool projection_frozen() const { return projection_frozen_; }
  const std::vector<QueryRecord>& query_log() const { return query_log_; }

  // Users, policy, seed and favorites. Random state and the query log are
  // not part of a snapshot; FromJson starts a fresh stream from the seed.
  nlohmann::json ToJson() const;
  static World FromJson(const nlohmann::json& j);

 private:
  std::size_t IndexOrThrow(const UserId& id) const;
  void RecenterProjection();
  void FreezeProjection();
  std::optional<double> ShownDistance(const SimUser& subject, double true_distance);
  void Log(const UserId& observer, QueryKind kind, std::optional<UserId> subject);
  QueryResponse BuildResponse(const SimUser& observer, std::vector<std::size_t> subjects, bool allow_drops);

  DisclosurePolicy policy_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<SimUser> users_;
  std::map<UserId, std::size_t> index_;
  std::map<UserId, std::set<UserId>> favorites_;
  std::optional<geo::Projection> projection_;
  bool projection_frozen_ = false;
  std::vector<QueryRecord> query_log_;
  std::uint64_t next_tick_ = 0;
};

}  // namespace geoleak::sim

#endif  // GEOLEAK_LBS_SIM_H_
