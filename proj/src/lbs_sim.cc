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

#include "geoleak/lbs_sim.h"

#include <algorithm>
#include <numeric>

#include "geoleak/error.h"

namespace geoleak::sim {
namespace {

const std::set<UserId> kNoFavorites;

DisclosureMode ModeFromName(const std::string& name) {
  if (name == "exact_distance") return DisclosureMode::kExactDistance;
  if (name == "hidden_respects_flag") return DisclosureMode::kHiddenRespectsFlag;
  if (name == "obfuscated") return DisclosureMode::kObfuscated;
  throw Error(ErrorCode::kConfig, "unknown disclosure mode '" + name + "'");
}

AccuracySetting AccuracyFromName(const std::string& name) {
  if (name == "unset") return AccuracySetting::kUnset;
  if (name == "close") return AccuracySetting::kClose;
  if (name == "near") return AccuracySetting::kNear;
  if (name == "far") return AccuracySetting::kFar;
  throw Error(ErrorCode::kConfig, "unknown accuracy setting '" + name + "'");
}

}  // namespace

std::string_view DisclosureModeName(DisclosureMode mode) {
  switch (mode) {
    case DisclosureMode::kExactDistance: return "exact_distance";
    case DisclosureMode::kHiddenRespectsFlag: return "hidden_respects_flag";
    case DisclosureMode::kObfuscated: return "obfuscated";
  }
  return "unknown";
}

std::string_view AccuracySettingName(AccuracySetting setting) {
  switch (setting) {
    case AccuracySetting::kUnset: return "unset";
    case AccuracySetting::kClose: return "close";
    case AccuracySetting::kNear: return "near";
    case AccuracySetting::kFar: return "far";
  }
  return "unknown";
}

std::string_view QueryKindName(QueryKind kind) {
  switch (kind) {
    case QueryKind::kNearbyScreen: return "nearby_screen";
    case QueryKind::kFavorites: return "favorites";
    case QueryKind::kProfileView: return "profile_view";
  }
  return "unknown";
}

DisclosurePolicy DisclosurePolicy::ExactDistance() { return {}; }

DisclosurePolicy DisclosurePolicy::HiddenRespectsFlag(double drop_probability) {
  DisclosurePolicy p;
  p.mode = DisclosureMode::kHiddenRespectsFlag;
  p.drop_probability = drop_probability;
  return p;
}

DisclosurePolicy DisclosurePolicy::Obfuscated(const obfuscation::ObfuscationPattern& pattern,
                                              double drop_probability) {
  DisclosurePolicy p;
  p.mode = DisclosureMode::kObfuscated;
  p.pattern = pattern;
  p.drop_probability = drop_probability;
  return p;
}

void DisclosurePolicy::Validate() const {
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "drop_probability must be in [0, 1]");
  }
  if ((mode == DisclosureMode::kObfuscated) != pattern.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "pattern must be present exactly for obfuscated mode");
  }
  if (pattern) pattern->Validate();
}

nlohmann::json ToJson(const DisclosurePolicy& p) {
  nlohmann::json j{{"mode", std::string(DisclosureModeName(p.mode))},
                   {"drop_probability", p.drop_probability},
                   {"accuracy_setting", std::string(AccuracySettingName(p.accuracy_setting))}};
  if (p.pattern) j["pattern"] = obfuscation::ToJson(*p.pattern);
  if (p.max_entries) j["max_entries"] = *p.max_entries;
  return j;
}

DisclosurePolicy PolicyFromJson(const nlohmann::json& j) {
  DisclosurePolicy p;
  try {
    p.mode = ModeFromName(j.at("mode").get<std::string>());
    p.drop_probability = j.value("drop_probability", 0.0);
    p.accuracy_setting = AccuracyFromName(j.value("accuracy_setting", std::string("unset")));
    if (j.contains("pattern")) p.pattern = obfuscation::PatternFromJson(j.at("pattern"));
    if (j.contains("max_entries") && !j.at("max_entries").is_null()) {
      p.max_entries = j.at("max_entries").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad policy: ") + e.what());
  }
  try {
    p.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return p;
}

std::optional<std::size_t> QueryResponse::IndexOf(const UserId& id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].user == id) return i;
  }
  return std::nullopt;
}

nlohmann::json ToJson(const QueryResponse& response) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ScreenEntry& e : response.entries) {
    nlohmann::json entry{{"user", e.user.value}, {"true_distance", e.true_distance}};
    entry["shown_distance"] = e.shown_distance ? nlohmann::json(*e.shown_distance) : nlohmann::json();
    entries.push_back(std::move(entry));
  }
  return nlohmann::json{{"entries", std::move(entries)}};
}

World::World(DisclosurePolicy policy, std::uint64_t seed)
    : policy_(std::move(policy)), seed_(seed), rng_(seed) {
  policy_.Validate();
}

std::size_t World::IndexOrThrow(const UserId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::kUnknownUser, "no user '" + id.value + "'");
  return it->second;
}

const SimUser& World::user(const UserId& id) const { return users_[IndexOrThrow(id)]; }

const std::set<UserId>& World::favorites(const UserId& owner) const {
  IndexOrThrow(owner);
  const auto it = favorites_.find(owner);
  return it == favorites_.end() ? kNoFavorites : it->second;
}

void World::RecenterProjection() {
  if (projection_frozen_ || users_.empty()) return;
  std::vector<geo::GeoPoint> points;
  points.reserve(users_.size());
  for (const SimUser& u : users_) points.push_back(u.location);
  projection_ = geo::Projection::AtCentroid(points);
}

void World::FreezeProjection() {
  RecenterProjection();
  projection_frozen_ = true;
}

void World::AddUser(const UserId& id, const geo::GeoPoint& location, bool show_distance) {
  geo::ValidateOrThrow(location);
  if (index_.contains(id)) throw Error(ErrorCode::kDuplicateId, "user '" + id.value + "' already exists");
  index_.emplace(id, users_.size());
  users_.push_back({id, location, show_distance});
  RecenterProjection();
}

void World::MoveUser(const UserId& id, const geo::GeoPoint& location) {
  geo::ValidateOrThrow(location);
  users_[IndexOrThrow(id)].location = location;
  RecenterProjection();
}

void World::SetShowDistance(const UserId& id, bool show_distance) {
  users_[IndexOrThrow(id)].show_distance = show_distance;
}

void World::AddFavorite(const UserId& owner, const UserId& target) {
  IndexOrThrow(owner);
  IndexOrThrow(target);
  if (owner == target) throw Error(ErrorCode::kSelfFavorite, "'" + owner.value + "' cannot favorite itself");
  favorites_[owner].insert(target);
}

void World::Log(const UserId& observer, QueryKind kind, std::optional<UserId> subject) {
  query_log_.push_back({observer, kind, std::move(subject), next_tick_++});
}

std::optional<double> World::ShownDistance(const SimUser& subject, double true_distance) {
  switch (policy_.mode) {
    case DisclosureMode::kExactDistance:
      return true_distance;
    case DisclosureMode::kHiddenRespectsFlag:
      if (!subject.show_distance) return std::nullopt;
      return true_distance;
    case DisclosureMode::kObfuscated:
      if (!subject.show_distance) return std::nullopt;
      return obfuscation::ObfuscateDistance(true_distance, *policy_.pattern, rng_);
  }
  return std::nullopt;
}

QueryResponse World::BuildResponse(const SimUser& observer, std::vector<std::size_t> subjects,
                                   bool allow_drops) {
  FreezeProjection();
  projection_->Project(observer.location);

  struct Candidate {
    std::size_t index;
    double distance;
  };
  std::vector<Candidate> sorted;
  sorted.reserve(subjects.size());
  for (std::size_t i : subjects) {
    sorted.push_back({i, geo::HaversineDistance(observer.location, users_[i].location)});
  }
  std::sort(sorted.begin(), sorted.end(), [this](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return users_[a.index].id < users_[b.index].id;
  });

  QueryResponse response;
  const double drop = allow_drops ? policy_.drop_probability : 0.0;
  for (const Candidate& c : sorted) {
    if (drop > 0.0 && rng_.Bernoulli(drop)) continue;
    const SimUser& subject = users_[c.index];
    response.entries.push_back({subject.id, ShownDistance(subject, c.distance), c.distance});
  }
  if (policy_.max_entries && response.entries.size() > *policy_.max_entries) {
    response.entries.resize(*policy_.max_entries);
  }
  return response;
}

QueryResponse World::QueryNearby(const UserId& observer) {
  const std::size_t self = IndexOrThrow(observer);
  std::vector<std::size_t> subjects;
  subjects.reserve(users_.size());
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (i != self) subjects.push_back(i);
  }
  QueryResponse response = BuildResponse(users_[self], std::move(subjects), /*allow_drops=*/true);
  Log(observer, QueryKind::kNearbyScreen, std::nullopt);
  return response;
}

QueryResponse World::QueryFavorites(const UserId& observer) {
  const std::size_t self = IndexOrThrow(observer);
  std::vector<std::size_t> subjects;
  for (const UserId& id : favorites(observer)) subjects.push_back(IndexOrThrow(id));
  QueryResponse response = BuildResponse(users_[self], std::move(subjects), /*allow_drops=*/false);
  Log(observer, QueryKind::kFavorites, std::nullopt);
  return response;
}

std::optional<double> World::ViewProfile(const UserId& observer, const UserId& subject) {
  const std::size_t self = IndexOrThrow(observer);
  const std::size_t other = IndexOrThrow(subject);
  FreezeProjection();
  projection_->Project(users_[self].location);
  const double d = geo::HaversineDistance(users_[self].location, users_[other].location);
  std::optional<double> shown = ShownDistance(users_[other], d);
  Log(observer, QueryKind::kProfileView, subject);
  return shown;
}

nlohmann::json World::ToJson() const {
  nlohmann::json users = nlohmann::json::array();
  for (const SimUser& u : users_) {
    users.push_back({{"id", u.id.value},
                     {"lat", u.location.lat},
                     {"lon", u.location.lon},
                     {"show_distance", u.show_distance}});
  }
  nlohmann::json favorites = nlohmann::json::object();
  for (const auto& [owner, targets] : favorites_) {
    nlohmann::json list = nlohmann::json::array();
    for (const UserId& t : targets) list.push_back(t.value);
    favorites[owner.value] = std::move(list);
  }
  return nlohmann::json{{"seed", seed_},
                        {"policy", sim::ToJson(policy_)},
                        {"users", std::move(users)},
                        {"favorites", std::move(favorites)}};
}

World World::FromJson(const nlohmann::json& j) {
  try {
    World world(PolicyFromJson(j.at("policy")), j.at("seed").get<std::uint64_t>());
    for (const nlohmann::json& u : j.at("users")) {
      world.AddUser(UserId{u.at("id").get<std::string>()},
                    geo::GeoPoint{u.at("lat").get<double>(), u.at("lon").get<double>()},
                    u.value("show_distance", true));
    }
    if (j.contains("favorites")) {
      for (const auto& [owner, targets] : j.at("favorites").items()) {
        for (const nlohmann::json& t : targets) {
          world.AddFavorite(UserId{owner}, UserId{t.get<std::string>()});
        }
      }
    }
    return world;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad world snapshot: ") + e.what());
  }
}

}  // namespace geoleak::sim
