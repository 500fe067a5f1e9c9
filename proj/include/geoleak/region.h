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

#ifndef GEOLEAK_REGION_H_
#define GEOLEAK_REGION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geoleak/geodesy.h"
#include "geoleak/obfuscation.h"

namespace geoleak::attack {

// The victim lies at true distance in [inner, outer] from center. An
// unset outer radius leaves the constraint unbounded outward.
struct RingConstraint {
  geo::GeoPoint center;
  double inner = 0.0;
  std::optional<double> outer;

  bool bounded() const { return outer.has_value(); }
  bool Satisfied(const geo::GeoPoint& p) const;
};

// Users flanking the victim on a distance-sorted screen: an1 is the bound
// from the entry just before the victim, an2 from the entry just after.
// Either may be missing when the victim sits at an end of the list.
struct SandwichObservation {
  geo::GeoPoint adversary_position;
  std::optional<double> an1;
  std::optional<double> an2;
};

// Annulus [an1, an2]; a disc when an1 is missing, the outside of a disc
// when an2 is missing. Throws kInvalidArgument when an1 > an2.
RingConstraint AnnulusFromSandwich(const SandwichObservation& s);

// Ring covering a true-distance interval, e.g. from InvertReading.
RingConstraint AnnulusFromInterval(const geo::GeoPoint& center, const obfuscation::DistanceInterval& interval);

// Occupancy grid over a projection plane. Cells sit on a fixed lattice
// (cell boundaries at multiples of cell_size), so regions built from
// nested constraint sets nest cell by cell.
class CandidateRegion {
 public:
  CandidateRegion(geo::Projection projection, double cell_size, std::int64_t first_col,
                  std::int64_t first_row, std::int64_t cols, std::int64_t rows,
                  std::vector<std::uint8_t> occupancy);

  const geo::Projection& projection() const { return projection_; }
  double cell_size() const { return cell_size_; }
  std::int64_t first_col() const { return first_col_; }
  std::int64_t first_row() const { return first_row_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t rows() const { return rows_; }

  // Lattice coordinates, not offsets into the grid.
  bool Occupied(std::int64_t col, std::int64_t row) const;
  std::size_t occupied_cells() const { return occupied_; }
  double Area() const { return static_cast<double>(occupied_) * cell_size_ * cell_size_; }

  geo::LocalPoint CellCenter(std::int64_t col, std::int64_t row) const;
  geo::LocalPoint min_corner() const;
  geo::LocalPoint max_corner() const;

  // Whether the cell holding p is occupied.
  bool Contains(const geo::GeoPoint& p) const;

  geo::LocalPoint CentroidLocal() const;
  geo::GeoPoint Centroid() const;

 private:
  geo::Projection projection_;
  double cell_size_;
  std::int64_t first_col_;
  std::int64_t first_row_;
  std::int64_t cols_;
  std::int64_t rows_;
  std::vector<std::uint8_t> occupancy_;
  std::size_t occupied_ = 0;
};

inline constexpr std::int64_t kMaxRegionCells = 40'000'000;

// Rasterizes the intersection of the constraints. A cell is occupied when
// its center satisfies every constraint widened by the cell's half-diagonal,
// so the cell holding any feasible point is always occupied. Throws
// kEmptyRegion when no constraint is bounded or nothing is feasible, and
// kInvalidArgument for a non-positive cell size or an oversized grid.
CandidateRegion IntersectConstraints(std::span<const RingConstraint> constraints, double cell_size,
                                     const geo::Projection& projection);

}  // namespace geoleak::attack

#endif  // GEOLEAK_REGION_H_
