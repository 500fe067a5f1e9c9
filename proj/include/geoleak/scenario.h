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

#ifndef GEOLEAK_SCENARIO_H_
#define GEOLEAK_SCENARIO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoleak/geodesy.h"
#include "geoleak/lbs_sim.h"
#include "json.hpp"

namespace geoleak::harness {

// Field setup around Kyoto University: the victim account and the three
// adversary positions used for trilateration.
inline constexpr geo::GeoPoint kKyotoVictim{35.02350485, 135.77687703};
inline constexpr geo::GeoPoint kKyotoA1{35.03051251, 135.77327415};
inline constexpr geo::GeoPoint kKyotoA2{35.01598257, 135.78242585};
inline constexpr geo::GeoPoint kKyotoA3{35.02258561, 135.76493382};

enum class AttackKind { kTrilateration, kPassiveSandwich, kColluding, kColludingFavorites, kInferPattern };

std::string_view AttackKindName(AttackKind kind);

struct UserSpec {
  std::string id;
  geo::GeoPoint location;
  bool show_distance = true;
  // Where the user physically is when it differs from the registered
  // (faked) location. Errors are measured against this point.
  std::optional<geo::GeoPoint> true_location;

  geo::GeoPoint truth() const { return true_location.value_or(location); }
};

// Uniform population over a disc.
struct DiscGenerator {
  std::size_t count = 0;
  geo::GeoPoint center;
  double radius_m = 1000.0;
  double show_distance_fraction = 1.0;
  std::string id_prefix = "bg";
};

struct AttackerSpec {
  AttackKind kind = AttackKind::kTrilateration;
  double epsilon = 20.0;
  double cell_size = 5.0;
  std::optional<std::array<geo::GeoPoint, 3>> vantage_points;
  // Where the attacker accounts start and what default vantage points
  // surround; falls back to the first generator center, then the victim.
  std::optional<geo::GeoPoint> scene_center;
  std::size_t move_budget = 150;
  std::size_t max_sighting_queries = 16;
  std::size_t requery_when_unconfirmed = 0;
  // Whether the attacker inverts shown distances through the policy's
  // pattern (it has inferred the pattern beforehand).
  bool knows_pattern = true;
  // Scatter parameters for infer_pattern runs.
  std::size_t scatter_locations = 3000;
  std::size_t scatter_queries = 30;
  double scatter_max_distance = 3000.0;
};

struct Scenario {
  std::string name;
  sim::DisclosurePolicy policy;
  std::uint64_t seed = 0;
  UserSpec victim{"victim", {}, true, std::nullopt};
  std::vector<UserSpec> background;
  std::vector<DiscGenerator> generators;
  AttackerSpec attacker;
  // A completed attack only counts as a success in suite summaries when its
  // error is within this radius.
  double success_radius_m = 25.0;

  // Throws kConfig.
  void Validate() const;
};

// Offsets of the three adversary positions from the victim in the field
// setup around Kyoto University, meters east/north.
std::array<geo::LocalPoint, 3> FixtureVantageOffsets();
geo::GeoPoint SceneCenter(const Scenario& s);
// Explicit vantage points, or the fixture geometry around the scene center
// scaled so its widest offset matches the first generator radius.
std::array<geo::GeoPoint, 3> ResolveVantagePoints(const Scenario& s);

Scenario ScenarioFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Scenario& s);
Scenario LoadScenario(const std::filesystem::path& path);

}  // namespace geoleak::harness

#endif  // GEOLEAK_SCENARIO_H_
