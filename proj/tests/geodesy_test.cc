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

#include "geoleak/geodesy.h"

#include <gtest/gtest.h>

#include "geoleak/error.h"
#include "geoleak/scenario.h"
#include "test_support.h"

namespace geoleak {
namespace {

using geo::GeoPoint;
using geo::HaversineDistance;
using geo::LocalPoint;
using geo::Projection;
using harness::kKyotoA1;
using harness::kKyotoA2;
using harness::kKyotoA3;
using harness::kKyotoVictim;
using testing::ChordOracleDistance;
using testing::RandomPointNear;

TEST(Haversine, IdentityIsZero) {
  EXPECT_EQ(HaversineDistance(kKyotoVictim, kKyotoVictim), 0.0);
  EXPECT_EQ(HaversineDistance({-89.5, 179.9}, {-89.5, 179.9}), 0.0);
}

TEST(Haversine, FixtureGoldenDistances) {
  EXPECT_NEAR(HaversineDistance(kKyotoVictim, kKyotoA1), testing::kGoldenVictimToA1, 1e-6);
  EXPECT_NEAR(HaversineDistance(kKyotoVictim, kKyotoA2), testing::kGoldenVictimToA2, 1e-6);
  EXPECT_NEAR(HaversineDistance(kKyotoVictim, kKyotoA3), testing::kGoldenVictimToA3, 1e-6);
}

TEST(Haversine, EquatorDegree) {
  EXPECT_NEAR(HaversineDistance({0.0, 10.0}, {0.0, 11.0}), testing::kGoldenEquatorDegree, 1e-6);
  EXPECT_NEAR(testing::kGoldenEquatorDegree, 6371000.0 * geo::kPi / 180.0, 1e-8);
}

TEST(Haversine, AgreesWithChordOracle) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a = testing::RandomGeoPoint(rng);
    const GeoPoint b = i % 2 ? testing::RandomGeoPoint(rng) : RandomPointNear(rng, a, 5000.0);
    const double oracle = ChordOracleDistance(a, b);
    EXPECT_NEAR(HaversineDistance(a, b), oracle, 1e-6 + 1e-9 * oracle);
  }
}

TEST(HaversineProperty, ExactlySymmetric) {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint a = testing::RandomGeoPoint(rng, 90.0);
    const GeoPoint b = i % 3 ? testing::RandomGeoPoint(rng, 90.0) : RandomPointNear(rng, kKyotoVictim, 3000.0);
    ASSERT_EQ(HaversineDistance(a, b), HaversineDistance(b, a));
    ASSERT_GE(HaversineDistance(a, b), 0.0);
  }
}

TEST(HaversineProperty, TriangleInequality) {
  Rng rng(13);
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint a = RandomPointNear(rng, kKyotoVictim, 5000.0);
    const GeoPoint b = RandomPointNear(rng, kKyotoVictim, 5000.0);
    const GeoPoint c = i % 2 ? RandomPointNear(rng, kKyotoVictim, 5000.0) : testing::RandomGeoPoint(rng);
    ASSERT_LE(HaversineDistance(a, c), HaversineDistance(a, b) + HaversineDistance(b, c) + 1e-6);
  }
}

TEST(GeoPoint, Validation) {
  EXPECT_TRUE(geo::IsValid({90.0, -180.0}));
  EXPECT_FALSE(geo::IsValid({90.0001, 0.0}));
  EXPECT_FALSE(geo::IsValid({0.0, 180.5}));
  EXPECT_FALSE(geo::IsValid({std::nan(""), 0.0}));
  EXPECT_FALSE(geo::IsValid({0.0, std::numeric_limits<double>::infinity()}));
  try {
    geo::ValidateOrThrow({-91.0, 0.0});
    FAIL() << "expected kInvalidCoordinate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCoordinate);
  }
}

TEST(Projection, ScaleConstants) {
  const Projection proj(kKyotoVictim);
  EXPECT_NEAR(proj.meters_per_degree_lat(), testing::kGoldenEquatorDegree, 1e-6);
  EXPECT_DOUBLE_EQ(proj.meters_per_degree_lon(),
                   proj.meters_per_degree_lat() * std::cos(kKyotoVictim.lat * geo::kPi / 180.0));
  EXPECT_GT(proj.meters_per_degree_lon(), 0.0);
}

TEST(Projection, OriginMapsToZero) {
  const Projection proj(kKyotoA1);
  const LocalPoint q = proj.Project(kKyotoA1);
  EXPECT_EQ(q.x, 0.0);
  EXPECT_EQ(q.y, 0.0);
  EXPECT_EQ(proj.Unproject({0.0, 0.0}), kKyotoA1);
}

TEST(Projection, DueNorthAxis) {
  const Projection proj(kKyotoVictim);
  const LocalPoint q = proj.Project({kKyotoVictim.lat + 0.01, kKyotoVictim.lon});
  EXPECT_NEAR(q.x, 0.0, 1e-9);
  EXPECT_NEAR(q.y, 0.01 * proj.meters_per_degree_lat(), 1e-6);
}

TEST(Projection, FixtureNormMatchesHaversine) {
  const Projection proj(kKyotoA1);
  const double planar = geo::Norm(proj.Project(kKyotoVictim));
  EXPECT_NEAR(planar / testing::kGoldenVictimToA1, 1.0, 1e-3);
}

TEST(Projection, UnprojectEastAtEquator) {
  const Projection proj(GeoPoint{0.0, 20.0});
  const GeoPoint p = proj.Unproject({100.0, 0.0});
  EXPECT_NEAR(p.lon, 20.0 + 100.0 / proj.meters_per_degree_lon(), 1e-12);
  EXPECT_NEAR(p.lat, 0.0, 1e-12);
}

TEST(Projection, RangeErrors) {
  const Projection proj(kKyotoVictim);
  for (const GeoPoint& p : {GeoPoint{kKyotoVictim.lat + 1.0, kKyotoVictim.lon},
                            GeoPoint{kKyotoVictim.lat, kKyotoVictim.lon - 1.5}}) {
    try {
      proj.Project(p);
      FAIL() << "expected kOutOfProjectionRange";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfProjectionRange);
    }
    EXPECT_FALSE(proj.InRange(p));
  }
  try {
    proj.Unproject({0.0, 120000.0});
    FAIL() << "expected kOutOfProjectionRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfProjectionRange);
  }
}

TEST(Projection, CentroidOrigin) {
  const std::array<GeoPoint, 3> pts{kKyotoA1, kKyotoA2, kKyotoA3};
  const Projection proj = Projection::AtCentroid(pts);
  EXPECT_NEAR(proj.origin().lat, (kKyotoA1.lat + kKyotoA2.lat + kKyotoA3.lat) / 3.0, 1e-12);
  EXPECT_NEAR(proj.origin().lon, (kKyotoA1.lon + kKyotoA2.lon + kKyotoA3.lon) / 3.0, 1e-12);
}

TEST(ProjectionProperty, FidelityWithinFiveKilometers) {
  Rng rng(14);
  for (int i = 0; i < 10000; ++i) {
    // Away from the antimeridian so the offset point stays a valid longitude.
    const GeoPoint origin = testing::RandomGeoPoint(rng, 70.0, 179.0);
    const Projection proj(origin);
    const GeoPoint p = RandomPointNear(rng, origin, 5000.0);
    const double truth = ChordOracleDistance(origin, p);
    if (truth < 1.0) continue;
    ASSERT_LT(std::abs(geo::Norm(proj.Project(p)) - truth) / truth, 1e-3) << "origin " << origin.lat;
  }
}

TEST(ProjectionProperty, RoundTripWithinHalfMeter) {
  Rng rng(15);
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint origin = testing::RandomGeoPoint(rng, 75.0, 178.0);
    const Projection proj(origin);
    const GeoPoint p = RandomPointNear(rng, origin, 50000.0);
    if (!proj.InRange(p)) continue;
    ASSERT_LE(ChordOracleDistance(proj.Unproject(proj.Project(p)), p), 0.5);
  }
}

}  // namespace
}  // namespace geoleak
