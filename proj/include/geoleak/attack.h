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

#ifndef GEOLEAK_ATTACK_H_
#define GEOLEAK_ATTACK_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "geoleak/error.h"
#include "geoleak/geodesy.h"
#include "geoleak/lbs_sim.h"
#include "geoleak/obfuscation.h"
#include "geoleak/region.h"
#include "geoleak/trilateration.h"

namespace geoleak::attack {

// One row of a screen as the attacker sees it.
struct VisibleEntry {
  sim::UserId user;
  std::optional<double> shown_distance;
};

struct ScreenView {
  std::vector<VisibleEntry> entries;

  std::optional<std::size_t> IndexOf(const sim::UserId& id) const;
};

// The attacker's handle on the service: the same calls an ordinary client
// can make, plus knowledge of where the attacker placed its own accounts.
class Session {
 public:
  Session(sim::World& world, std::vector<sim::UserId> owned);

  ScreenView Nearby(const sim::UserId& as);
  ScreenView Favorites(const sim::UserId& as);
  std::optional<double> ViewProfile(const sim::UserId& as, const sim::UserId& subject);
  void Favorite(const sim::UserId& as, const sim::UserId& target);
  void Move(const sim::UserId& account, const geo::GeoPoint& position);

  bool Owns(const sim::UserId& id) const;
  geo::GeoPoint PositionOf(const sim::UserId& account) const;
  // True separation of two owned accounts, known from their fake fixes.
  double SideChannelDistance(const sim::UserId& a, const sim::UserId& b) const;

  std::size_t moves() const { return moves_; }
  const std::vector<std::pair<sim::UserId, std::vector<geo::GeoPoint>>>& trajectories() const {
    return trajectories_;
  }

 private:
  void CheckOwned(const sim::UserId& id) const;
  ScreenView Strip(const sim::QueryResponse& response) const;

  sim::World& world_;
  std::vector<sim::UserId> owned_;
  std::vector<std::pair<sim::UserId, std::vector<geo::GeoPoint>>> trajectories_;
  std::size_t moves_ = 0;
};

// How the attacker interprets shown distances: exact, or readings of a known
// obfuscation pattern.
struct ReadingModel {
  std::optional<obfuscation::ObfuscationPattern> pattern;
};

// Bounds on the observer-victim distance implied by the sorted order: the
// tightest known distance among entries before the victim (an1) and after
// it (an2). Owned accounts contribute side-channel distances; other users
// contribute their shown distance, inverted through the pattern when one is
// set. Hidden entries contribute nothing. The victim must be on the screen.
SandwichObservation SandwichFromScreen(const ScreenView& view, const sim::UserId& victim,
                                       const sim::UserId& observer, const Session& session,
                                       const ReadingModel& reading);

struct CollusionOptions {
  bool use_favorites = false;
  double epsilon = 20.0;   // target colluder separation, meters
  double cell_size = 5.0;  // region grid, meters
  std::array<geo::GeoPoint, 3> vantage_points{};
  std::size_t move_budget = 150;
  // Nearby refreshes allowed while waiting for the victim to appear.
  std::size_t max_sighting_queries = 16;
  // Extra refreshes at one placement when a trial could not be read because
  // an account was missing from the screen. Zero reproduces an attacker
  // who reads each placement once.
  std::size_t requery_when_unconfirmed = 0;
  // First outward probe when nothing bounds the victim from above.
  double initial_upper_probe = 500.0;
  ReadingModel reading;
};

struct VantageTrace {
  geo::GeoPoint vantage;
  double initial_separation = 0.0;  // infinite when no upper bound was known
  std::size_t accepted_steps = 0;
  std::size_t backtracks = 0;
  std::vector<double> separations;  // after each accepted step
  double lower = 0.0;
  double upper = 0.0;
};

struct AttackReport {
  geo::GeoPoint estimate;
  std::optional<double> error;  // filled in by whoever knows the truth
  double region_area = 0.0;
  std::size_t moves = 0;
  std::size_t queries = 0;
  std::size_t victim_profile_queries = 0;
  std::vector<VantageTrace> vantages;
  std::vector<RingConstraint> constraints;
  std::optional<CandidateRegion> region;
  std::vector<std::pair<sim::UserId, std::vector<geo::GeoPoint>>> trajectories;
};

// Raised by the attack drivers; carries what the attacker had done up to the
// failure so the harness can still report moves and queries.
class AttackError : public Error {
 public:
  AttackError(const Error& cause, AttackReport partial)
      : Error(cause.code(), cause.message()), partial_(std::make_shared<AttackReport>(std::move(partial))) {}

  const AttackReport& partial() const { return *partial_; }

 private:
  std::shared_ptr<const AttackReport> partial_;
};

// Adaptive colluding trilateration. attackers[0] observes, attackers[1] and
// attackers[2] are the colluders moved below and above the victim. At each
// vantage point the colluders' radial separation is halved until it is at
// most epsilon, keeping the victim sandwiched between them on the
// observer's screen; the three resulting annuli are intersected.
// Throws kVictimNeverVisible, kNonConvergence (move budget spent) or
// kEmptyRegion.
AttackReport ColludingTrilateration(sim::World& world, const std::array<sim::UserId, 3>& attackers,
                                    const sim::UserId& victim, const CollusionOptions& options);

struct SurveyOptions {
  double cell_size = 5.0;
  ReadingModel reading;
};

struct SurveyResult {
  CandidateRegion region;
  std::vector<RingConstraint> constraints;
  std::vector<SandwichObservation> sandwiches;
};

// One screen read from each vantage point by a single account, with real
// users as the flankers. Throws kVictimNeverVisible or kEmptyRegion.
SurveyResult PassiveSandwichSurvey(sim::World& world, const sim::UserId& attacker,
                                   const std::array<geo::GeoPoint, 3>& vantage_points,
                                   const sim::UserId& victim, const SurveyOptions& options = {});

}  // namespace geoleak::attack

#endif  // GEOLEAK_ATTACK_H_
