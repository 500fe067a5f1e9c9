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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geoleak/attack.h"
#include "geoleak/error.h"
#include "geoleak/logging.h"

namespace geoleak::attack {
namespace {

using sim::UserId;

constexpr double kPlacementTolerance = 1e-9;
constexpr double kMaxProbeDistance = 100000.0;
constexpr double kMinStep = 1e-3;

// Point at great-circle distance r from 'from' along a planar direction,
// corrected for the projection's scale error.
geo::GeoPoint PlaceAtDistance(const geo::Projection& proj, const geo::GeoPoint& from, geo::LocalPoint dir,
                              double r) {
  if (r <= 0.0) return from;
  const geo::LocalPoint base = proj.Project(from);
  double scale = r;
  geo::GeoPoint p = proj.Unproject(base + scale * dir);
  for (int i = 0; i < 4; ++i) {
    const double actual = geo::HaversineDistance(from, p);
    if (std::abs(actual - r) < kPlacementTolerance || actual <= 0.0) break;
    scale *= r / actual;
    p = proj.Unproject(base + scale * dir);
  }
  return p;
}

geo::LocalPoint UnitOr(geo::LocalPoint v, geo::LocalPoint fallback) {
  const double n = geo::Norm(v);
  if (n < 1.0) return fallback;
  return (1.0 / n) * v;
}

void FillCounters(AttackReport& report, const sim::World& world, std::size_t log_start,
                  const std::vector<UserId>& attackers, const UserId& victim, const Session& session) {
  const auto& log = world.query_log();
  report.queries = 0;
  report.victim_profile_queries = 0;
  for (std::size_t i = log_start; i < log.size(); ++i) {
    const sim::QueryRecord& rec = log[i];
    if (std::find(attackers.begin(), attackers.end(), rec.observer) == attackers.end()) continue;
    ++report.queries;
    if (rec.kind == sim::QueryKind::kProfileView && rec.subject == victim) ++report.victim_profile_queries;
  }
  report.moves = session.moves();
  report.trajectories = session.trajectories();
}

}  // namespace

std::optional<std::size_t> ScreenView::IndexOf(const UserId& id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].user == id) return i;
  }
  return std::nullopt;
}

Session::Session(sim::World& world, std::vector<UserId> owned) : world_(world), owned_(std::move(owned)) {
  for (const UserId& id : owned_) {
    trajectories_.push_back({id, {world_.user(id).location}});
  }
}

bool Session::Owns(const UserId& id) const {
  return std::find(owned_.begin(), owned_.end(), id) != owned_.end();
}

void Session::CheckOwned(const UserId& id) const {
  if (!Owns(id)) throw Error(ErrorCode::kInvalidArgument, "account '" + id.value + "' is not attacker-owned");
}

ScreenView Session::Strip(const sim::QueryResponse& response) const {
  ScreenView view;
  view.entries.reserve(response.entries.size());
  for (const sim::ScreenEntry& e : response.entries) view.entries.push_back({e.user, e.shown_distance});
  return view;
}

ScreenView Session::Nearby(const UserId& as) {
  CheckOwned(as);
  return Strip(world_.QueryNearby(as));
}

ScreenView Session::Favorites(const UserId& as) {
  CheckOwned(as);
  return Strip(world_.QueryFavorites(as));
}

std::optional<double> Session::ViewProfile(const UserId& as, const UserId& subject) {
  CheckOwned(as);
  return world_.ViewProfile(as, subject);
}

void Session::Favorite(const UserId& as, const UserId& target) {
  CheckOwned(as);
  world_.AddFavorite(as, target);
}

void Session::Move(const UserId& account, const geo::GeoPoint& position) {
  CheckOwned(account);
  world_.MoveUser(account, position);
  ++moves_;
  for (auto& [id, path] : trajectories_) {
    if (id == account) path.push_back(position);
  }
}

geo::GeoPoint Session::PositionOf(const UserId& account) const {
  CheckOwned(account);
  return world_.user(account).location;
}

double Session::SideChannelDistance(const UserId& a, const UserId& b) const {
  return geo::HaversineDistance(PositionOf(a), PositionOf(b));
}

SandwichObservation SandwichFromScreen(const ScreenView& view, const UserId& victim, const UserId& observer,
                                       const Session& session, const ReadingModel& reading) {
  const std::optional<std::size_t> at = view.IndexOf(victim);
  if (!at) throw Error(ErrorCode::kVictimNeverVisible, "victim is not on the screen");

  SandwichObservation s{session.PositionOf(observer), std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < view.entries.size(); ++i) {
    if (i == *at) continue;
    const VisibleEntry& e = view.entries[i];
    const bool before = i < *at;
    std::optional<double> bound;
    if (session.Owns(e.user)) {
      bound = session.SideChannelDistance(observer, e.user);
    } else if (e.shown_distance) {
      if (reading.pattern) {
        const obfuscation::DistanceInterval iv = obfuscation::InvertReading(*e.shown_distance, *reading.pattern);
        if (!iv.empty()) bound = before ? iv.lo : iv.hi;
      } else {
        bound = *e.shown_distance;
      }
    }
    if (!bound) continue;
    if (before) {
      s.an1 = s.an1 ? std::max(*s.an1, *bound) : *bound;
    } else {
      s.an2 = s.an2 ? std::min(*s.an2, *bound) : *bound;
    }
  }
  // Readings inverted independently can cross; keep the tighter side sound.
  if (s.an1 && s.an2 && *s.an1 > *s.an2) s.an1 = *s.an2;
  return s;
}

AttackReport ColludingTrilateration(sim::World& world, const std::array<UserId, 3>& attackers,
                                    const UserId& victim, const CollusionOptions& options) {
  if (!(options.epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  world.user(victim);
  for (const geo::GeoPoint& v : options.vantage_points) geo::ValidateOrThrow(v);

  const UserId& observer = attackers[0];
  const UserId& low = attackers[1];
  const UserId& high = attackers[2];
  const std::vector<UserId> owned(attackers.begin(), attackers.end());
  Session session(world, owned);
  const std::size_t log_start = world.query_log().size();

  const geo::Projection proj = geo::Projection::AtCentroid(options.vantage_points);
  AttackReport report;

  auto fail = [&](ErrorCode code, const std::string& message) -> AttackError {
    FillCounters(report, world, log_start, owned, victim, session);
    return AttackError(Error(code, message), report);
  };

  auto screen = [&]() { return options.use_favorites ? session.Favorites(observer) : session.Nearby(observer); };

  auto sight_victim = [&]() -> std::optional<ScreenView> {
    for (std::size_t q = 0; q < std::max<std::size_t>(1, options.max_sighting_queries); ++q) {
      ScreenView view = session.Nearby(observer);
      if (view.IndexOf(victim)) return view;
    }
    return std::nullopt;
  };

  auto move = [&](const UserId& who, const geo::GeoPoint& where) {
    if (session.moves() >= options.move_budget) {
      throw fail(ErrorCode::kNonConvergence,
                 "move budget of " + std::to_string(options.move_budget) + " exhausted");
    }
    session.Move(who, where);
  };

  try {
    if (options.use_favorites) {
      move(observer, options.vantage_points[0]);
      if (!sight_victim()) {
        throw fail(ErrorCode::kVictimNeverVisible, "victim never appeared on the nearby screen");
      }
      session.Favorite(observer, low);
      session.Favorite(observer, high);
      session.Favorite(observer, victim);
    }

    for (std::size_t k = 0; k < options.vantage_points.size(); ++k) {
      const geo::GeoPoint& vantage = options.vantage_points[k];
      if (!(session.PositionOf(observer) == vantage)) move(observer, vantage);

      std::optional<ScreenView> view;
      if (options.use_favorites) {
        view = screen();
      } else {
        view = sight_victim();
        if (!view) {
          throw fail(ErrorCode::kVictimNeverVisible,
                     "victim never appeared from vantage point " + std::to_string(k));
        }
      }
      const SandwichObservation initial = SandwichFromScreen(*view, victim, observer, session, options.reading);

      const geo::LocalPoint here = proj.Project(vantage);
      geo::LocalPoint toward{0.0, 0.0};
      if (report.constraints.size() >= 2) {
        toward = IntersectConstraints(report.constraints, options.cell_size, proj).CentroidLocal();
      }
      const geo::LocalPoint dir = UnitOr(toward - here, UnitOr(geo::LocalPoint{0.0, 0.0} - here, {1.0, 0.0}));

      auto place = [&](const UserId& who, double r) {
        move(who, PlaceAtDistance(proj, vantage, dir, r));
        return session.SideChannelDistance(observer, who);
      };

      // Reads one placement: true when the screen shows low < victim < high.
      auto sandwiched = [&]() {
        for (std::size_t attempt = 0; attempt <= options.requery_when_unconfirmed; ++attempt) {
          const ScreenView v = screen();
          const auto il = v.IndexOf(low);
          const auto iv = v.IndexOf(victim);
          const auto ih = v.IndexOf(high);
          if (il && iv && ih) return *il < *iv && *iv < *ih;
        }
        return false;
      };

      VantageTrace trace;
      trace.vantage = vantage;
      double lo = place(low, initial.an1.value_or(0.0));
      double hi = 0.0;
      if (initial.an2) {
        hi = place(high, *initial.an2);
      } else {
        // Nothing bounds the victim from above: probe outward until the
        // high colluder lands beyond it.
        double r = std::max(options.initial_upper_probe, 2.0 * lo);
        for (;;) {
          if (r > kMaxProbeDistance) {
            throw fail(ErrorCode::kNonConvergence, "no upper bound within probe range");
          }
          hi = place(high, r);
          const ScreenView v = screen();
          const auto iv = v.IndexOf(victim);
          const auto ih = v.IndexOf(high);
          if (iv && ih && *iv < *ih) break;
          r *= 2.0;
        }
      }
      trace.initial_separation = hi - lo;

      double step = (hi - lo) / 2.0;
      while (hi - lo > options.epsilon) {
        if (step < kMinStep) throw fail(ErrorCode::kNonConvergence, "bisection step collapsed");
        const double trial_low = place(low, lo + step);
        if (sandwiched()) {
          lo = trial_low;
        } else {
          place(low, lo);
          const double trial_high = place(high, hi - step);
          if (sandwiched()) {
            hi = trial_high;
          } else {
            place(high, hi);
            ++trace.backtracks;
            step /= 2.0;
            continue;
          }
        }
        ++trace.accepted_steps;
        trace.separations.push_back(hi - lo);
        step = (hi - lo) / 2.0;
      }
      trace.lower = lo;
      trace.upper = hi;
      Log().debug("vantage {}: bounds [{:.1f}, {:.1f}] m, {} steps, {} backtracks", k, lo, hi, trace.accepted_steps,
                  trace.backtracks);
      report.vantages.push_back(trace);
      report.constraints.push_back(RingConstraint{vantage, lo, hi});
    }

    CandidateRegion region = IntersectConstraints(report.constraints, options.cell_size, proj);
    report.estimate = region.Centroid();
    report.region_area = region.Area();
    report.region = std::move(region);
  } catch (const AttackError&) {
    throw;
  } catch (const Error& e) {
    throw fail(e.code(), e.message());
  }

  FillCounters(report, world, log_start, owned, victim, session);
  return report;
}

SurveyResult PassiveSandwichSurvey(sim::World& world, const UserId& attacker,
                                   const std::array<geo::GeoPoint, 3>& vantage_points, const UserId& victim,
                                   const SurveyOptions& options) {
  world.user(victim);
  Session session(world, {attacker});
  const geo::Projection proj = geo::Projection::AtCentroid(vantage_points);

  std::vector<RingConstraint> constraints;
  std::vector<SandwichObservation> sandwiches;
  for (std::size_t k = 0; k < vantage_points.size(); ++k) {
    session.Move(attacker, vantage_points[k]);
    const ScreenView view = session.Nearby(attacker);
    if (!view.IndexOf(victim)) {
      throw Error(ErrorCode::kVictimNeverVisible, "victim not on the screen at vantage point " + std::to_string(k));
    }
    sandwiches.push_back(SandwichFromScreen(view, victim, attacker, session, options.reading));
    constraints.push_back(AnnulusFromSandwich(sandwiches.back()));
  }
  CandidateRegion region = IntersectConstraints(constraints, options.cell_size, proj);
  return SurveyResult{std::move(region), std::move(constraints), std::move(sandwiches)};
}

}  // namespace geoleak::attack
