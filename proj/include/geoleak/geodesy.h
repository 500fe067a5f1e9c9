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

#ifndef GEOLEAK_GEODESY_H_
#define GEOLEAK_GEODESY_H_

#include <cmath>
#include <span>

namespace geoleak::geo {

inline constexpr double kEarthRadiusMeters = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

// Projected points must stay within this many degrees of the origin.
inline constexpr double kMaxProjectionSpanDegrees = 1.0;
// Local coordinates accepted by Unproject, per axis.
inline constexpr double kMaxLocalExtentMeters = 120000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool IsValid(const GeoPoint& p);
// Throws kInvalidCoordinate when the point is outside WGS84 ranges.
void ValidateOrThrow(const GeoPoint& p);

// Planar coordinates in meters east (x) and north (y) of a projection origin.
struct LocalPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const LocalPoint&, const LocalPoint&) = default;
  friend LocalPoint operator+(LocalPoint a, LocalPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend LocalPoint operator-(LocalPoint a, LocalPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend LocalPoint operator*(double s, LocalPoint a) { return {s * a.x, s * a.y}; }
};

inline double Norm(LocalPoint p) { return std::hypot(p.x, p.y); }
inline double Distance(LocalPoint a, LocalPoint b) { return Norm(a - b); }

// Great-circle distance on a sphere of radius kEarthRadiusMeters.
double HaversineDistance(const GeoPoint& a, const GeoPoint& b);

// Equirectangular tangent plane anchored at an origin. Accurate to well under
// a meter across the few-kilometer scenes this library simulates.
class Projection {
 public:
  explicit Projection(const GeoPoint& origin);

  // Origin at the arithmetic mean of the given points; points must be
  // non-empty.
  static Projection AtCentroid(std::span<const GeoPoint> points);

  const GeoPoint& origin() const { return origin_; }
  double meters_per_degree_lat() const { return meters_per_degree_lat_; }
  double meters_per_degree_lon() const { return meters_per_degree_lon_; }

  // Throws kOutOfProjectionRange when p is a degree or more from the origin
  // on either axis.
  LocalPoint Project(const GeoPoint& p) const;
  // Throws kOutOfProjectionRange when |x| or |y| reaches kMaxLocalExtentMeters.
  GeoPoint Unproject(const LocalPoint& q) const;

  bool InRange(const GeoPoint& p) const;

 private:
  GeoPoint origin_;
  double meters_per_degree_lat_;
  double meters_per_degree_lon_;
};

}  // namespace geoleak::geo

#endif  // GEOLEAK_GEODESY_H_
