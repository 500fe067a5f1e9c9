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

#include "geoleak/scenario.h"

#include <algorithm>
#include <fstream>

#include "geoleak/error.h"

namespace geoleak::harness {
namespace {

using nlohmann::json;

AttackKind KindFromName(const std::string& name) {
  if (name == "trilateration") return AttackKind::kTrilateration;
  if (name == "passive_sandwich") return AttackKind::kPassiveSandwich;
  if (name == "colluding") return AttackKind::kColluding;
  if (name == "colluding_favorites") return AttackKind::kColludingFavorites;
  if (name == "infer_pattern") return AttackKind::kInferPattern;
  throw Error(ErrorCode::kConfig, "unknown attack kind '" + name + "'");
}

geo::GeoPoint PointFromJson(const json& j) {
  geo::GeoPoint p{j.at("lat").get<double>(), j.at("lon").get<double>()};
  if (!geo::IsValid(p)) throw Error(ErrorCode::kConfig, "coordinate out of range in " + j.dump());
  return p;
}

json PointToJson(const geo::GeoPoint& p) { return json{{"lat", p.lat}, {"lon", p.lon}}; }

UserSpec UserFromJson(const json& j, const std::string& default_id) {
  UserSpec u;
  u.id = j.value("id", default_id);
  u.location = PointFromJson(j);
  u.show_distance = j.value("show_distance", true);
  if (j.contains("true_location")) u.true_location = PointFromJson(j.at("true_location"));
  return u;
}

json UserToJson(const UserSpec& u) {
  json j{{"id", u.id}, {"lat", u.location.lat}, {"lon", u.location.lon}, {"show_distance", u.show_distance}};
  if (u.true_location) j["true_location"] = PointToJson(*u.true_location);
  return j;
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kTrilateration: return "trilateration";
    case AttackKind::kPassiveSandwich: return "passive_sandwich";
    case AttackKind::kColluding: return "colluding";
    case AttackKind::kColludingFavorites: return "colluding_favorites";
    case AttackKind::kInferPattern: return "infer_pattern";
  }
  return "unknown";
}

void Scenario::Validate() const {
  if (name.empty()) throw Error(ErrorCode::kConfig, "scenario needs a name");
  try {
    policy.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  for (const DiscGenerator& g : generators) {
    if (!(g.radius_m > 0.0)) throw Error(ErrorCode::kConfig, "generator radius must be positive");
    if (!(g.show_distance_fraction >= 0.0 && g.show_distance_fraction <= 1.0)) {
      throw Error(ErrorCode::kConfig, "show_distance_fraction must be in [0, 1]");
    }
  }
  if (!(attacker.epsilon > 0.0)) throw Error(ErrorCode::kConfig, "epsilon must be positive");
  if (!(attacker.cell_size > 0.0)) throw Error(ErrorCode::kConfig, "cell_size must be positive");
  if (!(success_radius_m > 0.0)) throw Error(ErrorCode::kConfig, "success_radius_m must be positive");
  if (attacker.kind == AttackKind::kInferPattern) {
    if (policy.mode != sim::DisclosureMode::kObfuscated) {
      throw Error(ErrorCode::kConfig, "infer_pattern scenarios need an obfuscated policy");
    }
    if (attacker.scatter_locations < 1 || attacker.scatter_queries < 1 || !(attacker.scatter_max_distance > 0.0)) {
      throw Error(ErrorCode::kConfig, "scatter parameters must be positive");
    }
  }
  std::vector<std::string> ids{victim.id};
  for (const UserSpec& u : background) ids.push_back(u.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::kConfig, "duplicate user id in scenario");
  }
}

std::array<geo::LocalPoint, 3> FixtureVantageOffsets() {
  const geo::Projection proj(kKyotoVictim);
  return {proj.Project(kKyotoA1), proj.Project(kKyotoA2), proj.Project(kKyotoA3)};
}

geo::GeoPoint SceneCenter(const Scenario& s) {
  if (s.attacker.scene_center) return *s.attacker.scene_center;
  if (!s.generators.empty()) return s.generators.front().center;
  return s.victim.location;
}

std::array<geo::GeoPoint, 3> ResolveVantagePoints(const Scenario& s) {
  if (s.attacker.vantage_points) return *s.attacker.vantage_points;
  const std::array<geo::LocalPoint, 3> offsets = FixtureVantageOffsets();
  double widest = 0.0;
  for (const geo::LocalPoint& o : offsets) widest = std::max(widest, geo::Norm(o));
  const double scale = s.generators.empty() ? 1.0 : s.generators.front().radius_m / widest;
  const geo::Projection proj(SceneCenter(s));
  std::array<geo::GeoPoint, 3> out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = proj.Unproject(scale * offsets[i]);
  return out;
}

Scenario ScenarioFromJson(const json& j) {
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.policy = sim::PolicyFromJson(j.at("policy"));
    s.seed = j.value("seed", std::uint64_t{0});
    s.success_radius_m = j.value("success_radius_m", 25.0);
    s.victim = UserFromJson(j.at("victim"), "victim");

    if (j.contains("background")) {
      const json& bg = j.at("background");
      if (bg.contains("users")) {
        std::size_t n = 0;
        for (const json& u : bg.at("users")) s.background.push_back(UserFromJson(u, "user-" + std::to_string(n++)));
      }
      if (bg.contains("generators")) {
        for (const json& g : bg.at("generators")) {
          DiscGenerator gen;
          gen.count = g.at("count").get<std::size_t>();
          gen.center = PointFromJson(g.at("center"));
          gen.radius_m = g.at("radius_m").get<double>();
          gen.show_distance_fraction = g.value("show_distance_fraction", 1.0);
          gen.id_prefix = g.value("id_prefix", std::string("bg"));
          s.generators.push_back(gen);
        }
      }
    }

    const json& a = j.at("attacker");
    AttackerSpec& spec = s.attacker;
    spec.kind = KindFromName(a.at("kind").get<std::string>());
    spec.epsilon = a.value("epsilon_m", spec.epsilon);
    spec.cell_size = a.value("cell_size_m", spec.cell_size);
    spec.move_budget = a.value("move_budget", spec.move_budget);
    spec.max_sighting_queries = a.value("max_sighting_queries", spec.max_sighting_queries);
    spec.requery_when_unconfirmed = a.value("requery_when_unconfirmed", spec.requery_when_unconfirmed);
    spec.knows_pattern = a.value("knows_pattern", spec.knows_pattern);
    spec.scatter_locations = a.value("scatter_locations", spec.scatter_locations);
    spec.scatter_queries = a.value("scatter_queries", spec.scatter_queries);
    spec.scatter_max_distance = a.value("scatter_max_distance_m", spec.scatter_max_distance);
    if (a.contains("scene_center")) spec.scene_center = PointFromJson(a.at("scene_center"));
    if (a.contains("vantage_points")) {
      const json& v = a.at("vantage_points");
      if (!v.is_array() || v.size() != 3) throw Error(ErrorCode::kConfig, "vantage_points needs exactly 3 points");
      spec.vantage_points = std::array<geo::GeoPoint, 3>{PointFromJson(v[0]), PointFromJson(v[1]), PointFromJson(v[2])};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad scenario: ") + e.what());
  }
  s.Validate();
  return s;
}

json ToJson(const Scenario& s) {
  json background{{"users", json::array()}, {"generators", json::array()}};
  for (const UserSpec& u : s.background) background["users"].push_back(UserToJson(u));
  for (const DiscGenerator& g : s.generators) {
    background["generators"].push_back({{"count", g.count},
                                        {"center", PointToJson(g.center)},
                                        {"radius_m", g.radius_m},
                                        {"show_distance_fraction", g.show_distance_fraction},
                                        {"id_prefix", g.id_prefix}});
  }
  const AttackerSpec& a = s.attacker;
  json attacker{{"kind", std::string(AttackKindName(a.kind))},
                {"epsilon_m", a.epsilon},
                {"cell_size_m", a.cell_size},
                {"move_budget", a.move_budget},
                {"max_sighting_queries", a.max_sighting_queries},
                {"requery_when_unconfirmed", a.requery_when_unconfirmed},
                {"knows_pattern", a.knows_pattern},
                {"scatter_locations", a.scatter_locations},
                {"scatter_queries", a.scatter_queries},
                {"scatter_max_distance_m", a.scatter_max_distance}};
  if (a.scene_center) attacker["scene_center"] = PointToJson(*a.scene_center);
  if (a.vantage_points) {
    attacker["vantage_points"] = json::array();
    for (const geo::GeoPoint& p : *a.vantage_points) attacker["vantage_points"].push_back(PointToJson(p));
  }
  return json{{"name", s.name},
              {"seed", s.seed},
              {"success_radius_m", s.success_radius_m},
              {"policy", sim::ToJson(s.policy)},
              {"victim", UserToJson(s.victim)},
              {"background", std::move(background)},
              {"attacker", std::move(attacker)}};
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open scenario " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  return ScenarioFromJson(j);
}

}  // namespace geoleak::harness
