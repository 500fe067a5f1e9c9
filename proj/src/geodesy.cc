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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoleak/error.h"

namespace geoleak::geo {
namespace {

constexpr double kDegToRad = kPi / 180.0;

std::string Describe(const GeoPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.lat << ", " << p.lon << ")";
  return os.str();
}

}  // namespace

bool IsValid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

void ValidateOrThrow(const GeoPoint& p) {
  if (!IsValid(p)) {
    throw Error(ErrorCode::kInvalidCoordinate, "coordinate out of range " + Describe(p));
  }
}

double HaversineDistance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double sin_dlat = std::sin((lat2 - lat1) / 2.0);
  const double sin_dlon = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  // Squaring makes both terms invariant under swapping a and b, so the
  // result is exactly symmetric.
  const double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(std::min(1.0, h)));
}

Projection::Projection(const GeoPoint& origin)
    : origin_(origin),
      meters_per_degree_lat_(kEarthRadiusMeters * kDegToRad),
      meters_per_degree_lon_(kEarthRadiusMeters * kDegToRad * std::cos(origin.lat * kDegToRad)) {
  ValidateOrThrow(origin);
  if (!(meters_per_degree_lon_ > 0.0)) {
    throw Error(ErrorCode::kInvalidCoordinate, "projection origin at a pole " + Describe(origin));
  }
}

Projection Projection::AtCentroid(std::span<const GeoPoint> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "centroid of an empty point set");
  }
  double lat = 0.0;
  double lon = 0.0;
  for (const GeoPoint& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const double n = static_cast<double>(points.size());
  return Projection(GeoPoint{lat / n, lon / n});
}

bool Projection::InRange(const GeoPoint& p) const {
  return IsValid(p) && std::abs(p.lat - origin_.lat) < kMaxProjectionSpanDegrees &&
         std::abs(p.lon - origin_.lon) < kMaxProjectionSpanDegrees;
}

LocalPoint Projection::Project(const GeoPoint& p) const {
  if (!InRange(p)) {
    throw Error(ErrorCode::kOutOfProjectionRange,
                Describe(p) + " is too far from projection origin " + Describe(origin_));
  }
  return LocalPoint{(p.lon - origin_.lon) * meters_per_degree_lon_,
                    (p.lat - origin_.lat) * meters_per_degree_lat_};
}

GeoPoint Projection::Unproject(const LocalPoint& q) const {
  if (!std::isfinite(q.x) || !std::isfinite(q.y) || std::abs(q.x) >= kMaxLocalExtentMeters ||
      std::abs(q.y) >= kMaxLocalExtentMeters) {
    throw Error(ErrorCode::kOutOfProjectionRange, "local point outside projection extent");
  }
  return GeoPoint{origin_.lat + q.y / meters_per_degree_lat_,
                  origin_.lon + q.x / meters_per_degree_lon_};
}

}  // namespace geoleak::geo
