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

#include "geoleak/region.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoleak/error.h"

namespace geoleak::attack {
namespace {

constexpr double kDegToRad = geo::kPi / 180.0;

// Haversine "h" term for a great-circle distance; monotone in distance up to
// half the circumference.
double HavTerm(double distance) {
  const double clamped = std::clamp(distance, 0.0, geo::kPi * geo::kEarthRadiusMeters);
  const double s = std::sin(clamped / (2.0 * geo::kEarthRadiusMeters));
  return s * s;
}

double Square(double v) { return v * v; }

}  // namespace

bool RingConstraint::Satisfied(const geo::GeoPoint& p) const {
  const double d = geo::HaversineDistance(center, p);
  return d >= inner && (!outer || d <= *outer);
}

RingConstraint AnnulusFromSandwich(const SandwichObservation& s) {
  if (s.an1 && s.an2 && *s.an1 > *s.an2) {
    throw Error(ErrorCode::kInvalidArgument, "sandwich bounds out of order");
  }
  if ((s.an1 && !(*s.an1 >= 0.0)) || (s.an2 && !(*s.an2 >= 0.0))) {
    throw Error(ErrorCode::kInvalidArgument, "sandwich bounds must be non-negative");
  }
  return RingConstraint{s.adversary_position, s.an1.value_or(0.0), s.an2};
}

RingConstraint AnnulusFromInterval(const geo::GeoPoint& center, const obfuscation::DistanceInterval& interval) {
  if (interval.empty()) throw Error(ErrorCode::kInvalidArgument, "empty distance interval");
  return RingConstraint{center, std::max(0.0, interval.lo), interval.hi};
}

CandidateRegion::CandidateRegion(geo::Projection projection, double cell_size, std::int64_t first_col,
                                 std::int64_t first_row, std::int64_t cols, std::int64_t rows,
                                 std::vector<std::uint8_t> occupancy)
    : projection_(projection),
      cell_size_(cell_size),
      first_col_(first_col),
      first_row_(first_row),
      cols_(cols),
      rows_(rows),
      occupancy_(std::move(occupancy)) {
  occupied_ = static_cast<std::size_t>(std::count(occupancy_.begin(), occupancy_.end(), std::uint8_t{1}));
}

bool CandidateRegion::Occupied(std::int64_t col, std::int64_t row) const {
  const std::int64_t c = col - first_col_;
  const std::int64_t r = row - first_row_;
  if (c < 0 || r < 0 || c >= cols_ || r >= rows_) return false;
  return occupancy_[static_cast<std::size_t>(r * cols_ + c)] != 0;
}

geo::LocalPoint CandidateRegion::CellCenter(std::int64_t col, std::int64_t row) const {
  return {(static_cast<double>(col) + 0.5) * cell_size_, (static_cast<double>(row) + 0.5) * cell_size_};
}

geo::LocalPoint CandidateRegion::min_corner() const {
  return {static_cast<double>(first_col_) * cell_size_, static_cast<double>(first_row_) * cell_size_};
}

geo::LocalPoint CandidateRegion::max_corner() const {
  return {static_cast<double>(first_col_ + cols_) * cell_size_,
          static_cast<double>(first_row_ + rows_) * cell_size_};
}

bool CandidateRegion::Contains(const geo::GeoPoint& p) const {
  if (!projection_.InRange(p)) return false;
  const geo::LocalPoint q = projection_.Project(p);
  return Occupied(static_cast<std::int64_t>(std::floor(q.x / cell_size_)),
                  static_cast<std::int64_t>(std::floor(q.y / cell_size_)));
}

geo::LocalPoint CandidateRegion::CentroidLocal() const {
  double sx = 0.0;
  double sy = 0.0;
  for (std::int64_t r = 0; r < rows_; ++r) {
    for (std::int64_t c = 0; c < cols_; ++c) {
      if (!occupancy_[static_cast<std::size_t>(r * cols_ + c)]) continue;
      const geo::LocalPoint center = CellCenter(first_col_ + c, first_row_ + r);
      sx += center.x;
      sy += center.y;
    }
  }
  const double n = static_cast<double>(occupied_);
  return {sx / n, sy / n};
}

geo::GeoPoint CandidateRegion::Centroid() const { return projection_.Unproject(CentroidLocal()); }

CandidateRegion IntersectConstraints(std::span<const RingConstraint> constraints, double cell_size,
                                     const geo::Projection& projection) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw Error(ErrorCode::kInvalidArgument, "cell_size must be positive");
  }
  // A cell's points lie within its half-diagonal of the center; the extra
  // factor absorbs the plane-to-sphere scale difference over one cell.
  const double slack = cell_size * std::sqrt(0.5) * 1.001 + 1e-6;

  double min_x = -std::numeric_limits<double>::infinity();
  double max_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_y = max_x;
  bool any_bounded = false;
  std::vector<geo::LocalPoint> centers;
  centers.reserve(constraints.size());
  for (const RingConstraint& k : constraints) {
    centers.push_back(projection.Project(k.center));
    if (!k.bounded()) continue;
    any_bounded = true;
    // Generous planar reach of the outer circle; the exact test below decides.
    const double reach = (*k.outer + slack) * 1.05 + cell_size;
    min_x = std::max(min_x, centers.back().x - reach);
    max_x = std::min(max_x, centers.back().x + reach);
    min_y = std::max(min_y, centers.back().y - reach);
    max_y = std::min(max_y, centers.back().y + reach);
  }
  if (!any_bounded) throw Error(ErrorCode::kEmptyRegion, "no bounded constraint to intersect");
  if (min_x > max_x || min_y > max_y) throw Error(ErrorCode::kEmptyRegion, "constraints are disjoint");

  const std::int64_t first_col = static_cast<std::int64_t>(std::floor(min_x / cell_size));
  const std::int64_t last_col = static_cast<std::int64_t>(std::floor(max_x / cell_size));
  const std::int64_t first_row = static_cast<std::int64_t>(std::floor(min_y / cell_size));
  const std::int64_t last_row = static_cast<std::int64_t>(std::floor(max_y / cell_size));
  const std::int64_t cols = last_col - first_col + 1;
  const std::int64_t rows = last_row - first_row + 1;
  if (cols * rows > kMaxRegionCells) {
    throw Error(ErrorCode::kInvalidArgument, "region grid exceeds " + std::to_string(kMaxRegionCells) + " cells");
  }

  // Cell-center coordinates: latitude depends on the row only and longitude
  // on the column only, so the haversine terms separate.
  const geo::GeoPoint& origin = projection.origin();
  std::vector<double> row_lat(static_cast<std::size_t>(rows));
  std::vector<double> col_lon(static_cast<std::size_t>(cols));
  for (std::int64_t r = 0; r < rows; ++r) {
    row_lat[r] = origin.lat + (static_cast<double>(first_row + r) + 0.5) * cell_size / projection.meters_per_degree_lat();
  }
  for (std::int64_t c = 0; c < cols; ++c) {
    col_lon[c] = origin.lon + (static_cast<double>(first_col + c) + 0.5) * cell_size / projection.meters_per_degree_lon();
  }

  struct Terms {
    std::vector<double> lat_term;  // sin^2(dlat/2) per row
    std::vector<double> cos_term;  // cos(lat_row) * cos(lat_center) per row
    std::vector<double> lon_term;  // sin^2(dlon/2) per column
    double h_inner;
    double h_outer;
  };
  // Bounded constraints first: they reject most cells.
  std::vector<const RingConstraint*> ordered;
  for (const RingConstraint& k : constraints) if (k.bounded()) ordered.push_back(&k);
  for (const RingConstraint& k : constraints) if (!k.bounded()) ordered.push_back(&k);

  std::vector<Terms> terms;
  terms.reserve(ordered.size());
  for (const RingConstraint* k : ordered) {
    Terms t;
    const double lat_c = k->center.lat * kDegToRad;
    t.lat_term.resize(static_cast<std::size_t>(rows));
    t.cos_term.resize(static_cast<std::size_t>(rows));
    for (std::int64_t r = 0; r < rows; ++r) {
      const double lat = row_lat[r] * kDegToRad;
      t.lat_term[r] = Square(std::sin((lat - lat_c) / 2.0));
      t.cos_term[r] = std::cos(lat) * std::cos(lat_c);
    }
    t.lon_term.resize(static_cast<std::size_t>(cols));
    for (std::int64_t c = 0; c < cols; ++c) {
      t.lon_term[c] = Square(std::sin((col_lon[c] - k->center.lon) * kDegToRad / 2.0));
    }
    t.h_inner = k->inner - slack > 0.0 ? HavTerm(k->inner - slack) : -1.0;
    t.h_outer = k->outer ? HavTerm(*k->outer + slack) : 2.0;
    terms.push_back(std::move(t));
  }

  std::vector<std::uint8_t> occupancy(static_cast<std::size_t>(cols * rows), 0);
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      bool ok = true;
      for (const Terms& t : terms) {
        const double h = t.lat_term[r] + t.cos_term[r] * t.lon_term[c];
        if (h < t.h_inner || h > t.h_outer) {
          ok = false;
          break;
        }
      }
      if (ok) occupancy[static_cast<std::size_t>(r * cols + c)] = 1;
    }
  }

  CandidateRegion region(projection, cell_size, first_col, first_row, cols, rows, std::move(occupancy));
  if (region.occupied_cells() == 0) {
    throw Error(ErrorCode::kEmptyRegion, "observations are mutually inconsistent");
  }
  return region;
}

}  // namespace geoleak::attack
