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

#include <gtest/gtest.h>

#include <cmath>

#include "geoleak/attack.h"
#include "geoleak/error.h"
#include "geoleak/harness.h"
#include "geoleak/region.h"
#include "geoleak/trilateration.h"
#include "properties.h"
#include "test_support.h"

namespace geoleak::attack {
namespace {

using geo::GeoPoint;
using geo::LocalPoint;
using harness::kKyotoA1;
using harness::kKyotoA2;
using harness::kKyotoA3;
using harness::kKyotoVictim;
using sim::UserId;
using testing::ChordOracleDistance;

const std::array<UserId, 3> kAttackers{UserId{"attacker-1"}, UserId{"attacker-2"}, UserId{"attacker-3"}};

template <typename F>
void ExpectCode(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

CollusionOptions OptionsFor(const harness::Scenario& s) {
  CollusionOptions opts;
  opts.use_favorites = s.attacker.kind == harness::AttackKind::kColludingFavorites;
  opts.epsilon = s.attacker.epsilon;
  opts.cell_size = s.attacker.cell_size;
  opts.vantage_points = harness::ResolveVantagePoints(s);
  if (s.policy.pattern) opts.reading.pattern = s.policy.pattern;
  return opts;
}

harness::Scenario Load(const std::string& name, std::uint64_t seed) {
  harness::Scenario s = harness::LoadScenario(testing::ScenarioPath(name));
  s.seed = seed;
  return s;
}

// ---- trilateration ----

TEST(SolveCircleSystem, PythagoreanConstruction) {
  const std::array<PlanarObservation, 3> obs{
      PlanarObservation{{0, 0}, 5.0}, {{10, 0}, std::sqrt(65.0)}, {{0, 10}, std::sqrt(45.0)}};
  // This triangle has area 50 m^2, under the default guard.
  const PlanarFix fix = SolveCircleSystem(obs, 10.0);
  EXPECT_NEAR(fix.point.x, 3.0, 1e-12);
  EXPECT_NEAR(fix.point.y, 4.0, 1e-12);
  EXPECT_NEAR(fix.residual, 0.0, 1e-12);
  ExpectCode(ErrorCode::kCollinearAdversaries, [&] { SolveCircleSystem(obs); });
}

TEST(SolveCircleSystem, CollinearAnchors) {
  const std::array<PlanarObservation, 3> obs{
      PlanarObservation{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{2, 0}, 1.0}};
  ExpectCode(ErrorCode::kCollinearAdversaries, [&] { SolveCircleSystem(obs); });
  ExpectCode(ErrorCode::kCollinearAdversaries, [&] { SolveCircleSystem(obs, 0.0); });
}

TEST(SolveCircleSystem, NoisyResidual) {
  const LocalPoint target{120.0, -40.0};
  const std::array<LocalPoint, 3> anchors{LocalPoint{0, 0}, {500, 0}, {0, 500}};
  std::array<PlanarObservation, 3> obs;
  const std::array<double, 3> noise{3.0, -2.0, 1.5};
  for (std::size_t i = 0; i < 3; ++i) obs[i] = {anchors[i], geo::Distance(target, anchors[i]) + noise[i]};
  const PlanarFix fix = SolveCircleSystem(obs);
  double residual = 0.0;
  for (const PlanarObservation& o : obs) {
    residual = std::max(residual, std::abs(geo::Distance(fix.point, o.anchor) - o.distance));
  }
  EXPECT_NEAR(fix.residual, residual, 1e-9);
  EXPECT_GT(fix.residual, 0.1);
  EXPECT_LT(geo::Distance(fix.point, target), 20.0);
}

TEST(SolveCircleSystemProperty, ExactOnConsistentDistances) {
  Rng rng(101);
  int solved = 0;
  for (int i = 0; i < 5000; ++i) {
    std::array<LocalPoint, 3> a;
    for (LocalPoint& p : a) p = {testing::Uniform(rng, -2000, 2000), testing::Uniform(rng, -2000, 2000)};
    const double area = std::abs((a[1].x - a[0].x) * (a[2].y - a[0].y) - (a[2].x - a[0].x) * (a[1].y - a[0].y)) / 2;
    if (area <= 10000.0) continue;
    const LocalPoint t{testing::Uniform(rng, -3000, 3000), testing::Uniform(rng, -3000, 3000)};
    std::array<PlanarObservation, 3> obs;
    for (std::size_t k = 0; k < 3; ++k) obs[k] = {a[k], geo::Distance(t, a[k])};
    const PlanarFix fix = SolveCircleSystem(obs);
    ASSERT_LE(geo::Distance(fix.point, t), 1e-6) << i;
    ++solved;
  }
  EXPECT_GT(solved, 4000);
}

TEST(Trilaterate, FixtureWithinOneMeter) {
  const std::array<DistanceObservation, 3> obs{
      DistanceObservation{kKyotoA1, testing::kGoldenVictimToA1, ObservationKind::kExact, std::nullopt},
      DistanceObservation{kKyotoA2, testing::kGoldenVictimToA2, ObservationKind::kExact, std::nullopt},
      DistanceObservation{kKyotoA3, testing::kGoldenVictimToA3, ObservationKind::kExact, std::nullopt}};
  const std::array<GeoPoint, 3> anchors{kKyotoA1, kKyotoA2, kKyotoA3};
  const TrilaterationResult r = Trilaterate(obs, geo::Projection::AtCentroid(anchors));
  EXPECT_LE(ChordOracleDistance(r.position, kKyotoVictim), 1.0);
  EXPECT_LT(r.residual, 1.0);
}

TEST(Trilaterate, RejectsIntervalsAndFarAnchors) {
  std::array<DistanceObservation, 3> obs{
      DistanceObservation{kKyotoA1, 845.0, ObservationKind::kExact, std::nullopt},
      DistanceObservation{kKyotoA2, 977.0, ObservationKind::kInterval, obfuscation::DistanceInterval{900, 1000}},
      DistanceObservation{kKyotoA3, 1092.0, ObservationKind::kExact, std::nullopt}};
  ExpectCode(ErrorCode::kInvalidArgument, [&] { Trilaterate(obs, geo::Projection(kKyotoVictim)); });
  obs[1] = {{kKyotoA2.lat + 3.0, kKyotoA2.lon}, 977.0, ObservationKind::kExact, std::nullopt};
  ExpectCode(ErrorCode::kOutOfProjectionRange, [&] { Trilaterate(obs, geo::Projection(kKyotoVictim)); });
}

// Adversaries spread around the target, as in the fixture; nearly collinear
// anchors amplify any planar distortion without bound.
TEST(TrilaterateProperty, GeographicRoundTrip) {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint center = testing::RandomGeoPoint(rng, 70.0, 179.0);
    const GeoPoint victim = testing::RandomPointNear(rng, center, 300.0);
    std::array<GeoPoint, 3> a;
    const double phase = testing::Uniform(rng, 0.0, 2.0 * geo::kPi);
    for (std::size_t k = 0; k < 3; ++k) {
      const double theta = phase + 2.0 * geo::kPi * k / 3.0 + testing::Uniform(rng, -0.35, 0.35);
      const double r = testing::Uniform(rng, 500.0, 1500.0);
      a[k] = testing::OffsetMeters(center, r * std::cos(theta), r * std::sin(theta));
    }
    std::array<DistanceObservation, 3> obs;
    for (std::size_t k = 0; k < 3; ++k) obs[k] = {a[k], geo::HaversineDistance(a[k], victim), ObservationKind::kExact, {}};
    const TrilaterationResult r = Trilaterate(obs, geo::Projection::AtCentroid(a));
    worst = std::max(worst, ChordOracleDistance(r.position, victim));
  }
  EXPECT_LE(worst, 1.0);
}

// ---- annuli and regions ----

TEST(Annulus, FromSandwich) {
  const GeoPoint a = kKyotoVictim;
  const RingConstraint ring = AnnulusFromSandwich({a, 100.0, 200.0});
  EXPECT_TRUE(ring.Satisfied(testing::OffsetMeters(a, 150.0, 0.0)));
  EXPECT_FALSE(ring.Satisfied(testing::OffsetMeters(a, 0.0, 50.0)));
  EXPECT_FALSE(ring.Satisfied(testing::OffsetMeters(a, -250.0, 0.0)));
  const RingConstraint disc = AnnulusFromSandwich({a, std::nullopt, 200.0});
  EXPECT_EQ(disc.inner, 0.0);
  EXPECT_TRUE(disc.Satisfied(a));
  const RingConstraint open = AnnulusFromSandwich({a, 100.0, std::nullopt});
  EXPECT_FALSE(open.bounded());
  EXPECT_TRUE(open.Satisfied(testing::OffsetMeters(a, 5000.0, 0.0)));
}

TEST(Annulus, FromObfuscatedReading) {
  const auto interval = obfuscation::InvertReading(350.0, obfuscation::ObfuscationPattern::HornetDefault());
  const RingConstraint ring = AnnulusFromInterval(kKyotoA1, interval);
  EXPECT_EQ(ring.inner, 250.0);
  EXPECT_EQ(ring.outer, 350.0);
}

TEST(Region, DiscAreaMatchesAnalytic) {
  for (double r : {50.0, 200.0, 750.0}) {
    const std::array<RingConstraint, 1> c{RingConstraint{kKyotoVictim, 0.0, r}};
    const CandidateRegion region = IntersectConstraints(c, 1.0, geo::Projection(kKyotoVictim));
    const double analytic = geo::kPi * r * r;
    EXPECT_NEAR(region.Area() / analytic, 1.0, 0.03) << r;
    EXPECT_EQ(region.Area(), region.occupied_cells() * 1.0);
  }
}

TEST(Region, TwoAnnuliContainVictim) {
  const double d2 = geo::HaversineDistance(kKyotoA2, kKyotoVictim);
  const double d3 = geo::HaversineDistance(kKyotoA3, kKyotoVictim);
  const std::array<RingConstraint, 2> c{RingConstraint{kKyotoA2, d2 - 30.0, d2 + 40.0},
                                        RingConstraint{kKyotoA3, d3 - 25.0, d3 + 15.0}};
  const CandidateRegion region = IntersectConstraints(c, 5.0, geo::Projection(kKyotoVictim));
  EXPECT_TRUE(region.Contains(kKyotoVictim));
  EXPECT_GT(region.occupied_cells(), 0u);
}

TEST(Region, EmptyCases) {
  const geo::Projection proj(kKyotoVictim);
  const std::array<RingConstraint, 2> disjoint{RingConstraint{kKyotoA1, 0.0, 100.0},
                                               RingConstraint{kKyotoA2, 0.0, 100.0}};
  ExpectCode(ErrorCode::kEmptyRegion, [&] { IntersectConstraints(disjoint, 5.0, proj); });
  const std::array<RingConstraint, 2> nested{RingConstraint{kKyotoA1, 300.0, 400.0},
                                             RingConstraint{kKyotoA1, 0.0, 200.0}};
  ExpectCode(ErrorCode::kEmptyRegion, [&] { IntersectConstraints(nested, 5.0, proj); });
  const std::array<RingConstraint, 1> open{RingConstraint{kKyotoA1, 300.0, std::nullopt}};
  ExpectCode(ErrorCode::kEmptyRegion, [&] { IntersectConstraints(open, 5.0, proj); });
  const std::array<RingConstraint, 1> disc{RingConstraint{kKyotoA1, 0.0, 50.0}};
  ExpectCode(ErrorCode::kInvalidArgument, [&] { IntersectConstraints(disc, 0.0, proj); });
}

TEST(Region, GeometryAccessors) {
  const std::array<RingConstraint, 1> c{RingConstraint{kKyotoVictim, 0.0, 100.0}};
  const geo::Projection proj(kKyotoVictim);
  const CandidateRegion region = IntersectConstraints(c, 5.0, proj);
  const LocalPoint lo = region.min_corner(), hi = region.max_corner();
  EXPECT_LE(lo.x, -95.0);
  EXPECT_GE(hi.x, 95.0);
  EXPECT_NEAR(geo::Norm(region.CentroidLocal()), 0.0, 1.0);
  EXPECT_LE(ChordOracleDistance(region.Centroid(), kKyotoVictim), 1.0);
  EXPECT_TRUE(region.Contains(kKyotoVictim));
  EXPECT_FALSE(region.Contains(testing::OffsetMeters(kKyotoVictim, 200.0, 0.0)));
}

TEST(RegionProperty, ContainmentExactFlankers) {
  const testing::PropertyResult r = testing::CheckRegionContainment(1000, 103);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(RegionProperty, MonotoneArea) {
  const testing::PropertyResult r = testing::CheckRegionMonotonicity(200, 104);
  EXPECT_TRUE(r.ok) << r.detail;
}

// ---- session ----

TEST(Session, OnlyOwnedAccountsMove) {
  sim::World world(sim::DisclosurePolicy::ExactDistance(), 1);
  world.AddUser(kAttackers[0], kKyotoA1, true);
  world.AddUser(UserId{"victim"}, kKyotoVictim, true);
  Session session(world, {kAttackers[0]});
  ExpectCode(ErrorCode::kInvalidArgument, [&] { session.Move(UserId{"victim"}, kKyotoA2); });
  session.Move(kAttackers[0], kKyotoA2);
  EXPECT_EQ(session.moves(), 1u);
  EXPECT_EQ(world.user(kAttackers[0]).location, kKyotoA2);
  const ScreenView view = session.Nearby(kAttackers[0]);
  ASSERT_EQ(view.entries.size(), 1u);
  EXPECT_NEAR(*view.entries[0].shown_distance, testing::kGoldenVictimToA2, 1e-6);
  ASSERT_EQ(session.trajectories().size(), 1u);
  EXPECT_EQ(session.trajectories()[0].second.size(), 2u);
}

TEST(Session, SideChannelDistance) {
  sim::World world(sim::DisclosurePolicy::HiddenRespectsFlag(0.0), 1);
  world.AddUser(kAttackers[0], kKyotoA1, false);
  world.AddUser(kAttackers[1], kKyotoA2, false);
  Session session(world, {kAttackers[0], kAttackers[1]});
  EXPECT_DOUBLE_EQ(session.SideChannelDistance(kAttackers[0], kAttackers[1]),
                   geo::HaversineDistance(kKyotoA1, kKyotoA2));
  EXPECT_FALSE(session.Nearby(kAttackers[0]).entries[0].shown_distance.has_value());
}

// ---- colluding trilateration ----

void ExpectConvergenceBounds(const AttackReport& report, double epsilon) {
  ASSERT_EQ(report.vantages.size(), 3u);
  for (const VantageTrace& t : report.vantages) {
    double previous = t.initial_separation;
    for (double sep : t.separations) {
      EXPECT_LT(sep, previous);
      previous = sep;
    }
    EXPECT_LE(t.upper - t.lower, epsilon + 1e-9);
    EXPECT_EQ(t.accepted_steps, t.separations.size());
    if (std::isfinite(t.initial_separation) && t.initial_separation > epsilon) {
      const double log2_budget = std::ceil(std::log2(t.initial_separation / epsilon));
      EXPECT_LE(static_cast<double>(t.accepted_steps), log2_budget + static_cast<double>(t.backtracks));
    }
  }
}

TEST(Colluding, GrindrHiddenVictim) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const harness::Scenario s = Load("grindr-hidden", seed);
    sim::World world = harness::BuildWorld(s);
    const AttackReport report = ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, OptionsFor(s));
    EXPECT_LE(ChordOracleDistance(report.estimate, s.victim.truth()), 25.0) << seed;
    EXPECT_EQ(report.victim_profile_queries, 0u);
    ASSERT_TRUE(report.region.has_value());
    EXPECT_TRUE(report.region->Contains(s.victim.truth())) << seed;
    EXPECT_EQ(report.constraints.size(), 3u);
    EXPECT_LE(report.moves, s.attacker.move_budget);
    ExpectConvergenceBounds(report, s.attacker.epsilon);
    for (const sim::QueryRecord& rec : world.query_log()) {
      EXPECT_FALSE(rec.kind == sim::QueryKind::kProfileView && rec.subject == UserId{s.victim.id});
    }
  }
}

TEST(Colluding, HornetFavoritesBypass) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const harness::Scenario s = Load("hornet-favorites", seed);
    sim::World world = harness::BuildWorld(s);
    const AttackReport report = ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, OptionsFor(s));
    EXPECT_LE(ChordOracleDistance(report.estimate, s.victim.truth()), 25.0) << seed;
    EXPECT_EQ(report.victim_profile_queries, 0u);
    ExpectConvergenceBounds(report, s.attacker.epsilon);
    EXPECT_TRUE(world.favorites(kAttackers[0]).contains(UserId{s.victim.id}));
  }
}

TEST(Colluding, HornetDropsDefeatNearbyScreen) {
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const harness::Scenario s = Load("hornet-no-favorites", seed);
    sim::World world = harness::BuildWorld(s);
    try {
      ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, OptionsFor(s));
    } catch (const AttackError& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kNonConvergence || e.code() == ErrorCode::kVictimNeverVisible);
      EXPECT_EQ(e.partial().victim_profile_queries, 0u);
      ++failures;
    }
  }
  EXPECT_GE(failures, 9);
}

TEST(Colluding, VictimNeverVisible) {
  harness::Scenario s = Load("grindr-hidden", 1);
  s.policy.drop_probability = 1.0;
  sim::World world = harness::BuildWorld(s);
  try {
    ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, OptionsFor(s));
    FAIL() << "expected kVictimNeverVisible";
  } catch (const AttackError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVictimNeverVisible);
    EXPECT_GT(e.partial().queries, 0u);
  }
}

TEST(Colluding, MoveBudgetExhausted) {
  const harness::Scenario s = Load("grindr-hidden", 1);
  sim::World world = harness::BuildWorld(s);
  CollusionOptions opts = OptionsFor(s);
  opts.move_budget = 8;
  try {
    ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, opts);
    FAIL() << "expected kNonConvergence";
  } catch (const AttackError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonConvergence);
    EXPECT_EQ(e.partial().moves, 8u);
  }
}

// The crowd alone already brackets the victim to tens of meters, so loose
// epsilons may stop before any bisection step.
TEST(Colluding, TighterEpsilonShrinksRegion) {
  const harness::Scenario s = Load("grindr-hidden", 3);
  std::vector<double> areas;
  for (double eps : {200.0, 20.0, 5.0}) {
    sim::World world = harness::BuildWorld(s);
    CollusionOptions opts = OptionsFor(s);
    opts.epsilon = eps;
    const AttackReport report = ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, opts);
    EXPECT_TRUE(report.region->Contains(s.victim.truth())) << eps;
    areas.push_back(report.region_area);
  }
  EXPECT_LE(areas[1], areas[0]);
  EXPECT_LE(areas[2], areas[1]);
  EXPECT_LT(areas[2], areas[0]);
}

// ---- passive survey ----

TEST(PassiveSurvey, DenseExactBackground) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sim::World world(sim::DisclosurePolicy::ExactDistance(), seed);
    Rng rng(seed);
    world.AddUser(UserId{"victim"}, kKyotoVictim, true);
    for (int i = 0; i < 200; ++i) {
      world.AddUser(UserId{"bg" + std::to_string(i)}, testing::RandomPointNear(rng, kKyotoVictim, 2000.0), true);
    }
    world.AddUser(kAttackers[0], kKyotoVictim, true);
    const std::array<GeoPoint, 3> vantages{kKyotoA1, kKyotoA2, kKyotoA3};
    const SurveyResult survey = PassiveSandwichSurvey(world, kAttackers[0], vantages, UserId{"victim"});
    EXPECT_TRUE(survey.region.Contains(kKyotoVictim)) << seed;
    EXPECT_LT(survey.region.Area(), 0.05 * geo::kPi * 2000.0 * 2000.0) << seed;
    EXPECT_EQ(survey.sandwiches.size(), 3u);
  }
}

TEST(PassiveSurvey, SparseRemoteVictim) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const harness::Scenario s = Load("sparse-remote", seed);
    sim::World world = harness::BuildWorld(s);
    const SurveyResult survey = PassiveSandwichSurvey(world, kAttackers[0], harness::ResolveVantagePoints(s),
                                                      UserId{s.victim.id}, {s.attacker.cell_size, {}});
    EXPECT_TRUE(survey.region.Contains(s.victim.truth())) << seed;
    for (const SandwichObservation& obs : survey.sandwiches) {
      const double av = geo::HaversineDistance(obs.adversary_position, s.victim.truth());
      if (obs.an1) EXPECT_LT(*obs.an1, av);
      if (obs.an2) EXPECT_GT(*obs.an2, av);
    }
  }
}

TEST(PassiveSurvey, NoFlankers) {
  sim::World world(sim::DisclosurePolicy::ExactDistance(), 1);
  world.AddUser(UserId{"victim"}, kKyotoVictim, true);
  world.AddUser(kAttackers[0], kKyotoA1, true);
  const std::array<GeoPoint, 3> vantages{kKyotoA1, kKyotoA2, kKyotoA3};
  ExpectCode(ErrorCode::kEmptyRegion, [&] { PassiveSandwichSurvey(world, kAttackers[0], vantages, UserId{"victim"}); });
}

TEST(PassiveSurvey, DroppedVictim) {
  sim::World world(sim::DisclosurePolicy::HiddenRespectsFlag(1.0), 1);
  world.AddUser(UserId{"victim"}, kKyotoVictim, true);
  world.AddUser(kAttackers[0], kKyotoA1, true);
  const std::array<GeoPoint, 3> vantages{kKyotoA1, kKyotoA2, kKyotoA3};
  ExpectCode(ErrorCode::kVictimNeverVisible,
             [&] { PassiveSandwichSurvey(world, kAttackers[0], vantages, UserId{"victim"}); });
}

TEST(PassiveSurvey, ObfuscatedFlankersStillContain) {
  const auto hornet = obfuscation::ObfuscationPattern::HornetDefault();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sim::World world(sim::DisclosurePolicy::Obfuscated(hornet, 0.0), seed);
    Rng rng(seed + 50);
    world.AddUser(UserId{"victim"}, kKyotoVictim, false);
    for (int i = 0; i < 150; ++i) {
      world.AddUser(UserId{"bg" + std::to_string(i)}, testing::RandomPointNear(rng, kKyotoVictim, 2000.0), true);
    }
    world.AddUser(kAttackers[0], kKyotoVictim, true);
    const std::array<GeoPoint, 3> vantages{kKyotoA1, kKyotoA2, kKyotoA3};
    const SurveyResult survey =
        PassiveSandwichSurvey(world, kAttackers[0], vantages, UserId{"victim"}, {5.0, ReadingModel{hornet}});
    EXPECT_TRUE(survey.region.Contains(kKyotoVictim)) << seed;
  }
}

}  // namespace
}  // namespace geoleak::attack
