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

#ifndef GEOLEAK_TRILATERATION_H_
#define GEOLEAK_TRILATERATION_H_

#include <optional>
#include <span>

#include "geoleak/geodesy.h"
#include "geoleak/obfuscation.h"

namespace geoleak::attack {

enum class ObservationKind { kExact, kInterval };

// Distance between the victim and one adversary position.
struct DistanceObservation {
  geo::GeoPoint adversary_position;
  double distance = 0.0;
  ObservationKind kind = ObservationKind::kExact;
  std::optional<obfuscation::DistanceInterval> interval;  // set iff kInterval
};

// Adversary triangles smaller than this are rejected as collinear.
inline constexpr double kMinAdversaryTriangleArea = 100.0;  // m^2

struct PlanarObservation {
  geo::LocalPoint anchor;
  double distance = 0.0;
};

struct PlanarFix {
  geo::LocalPoint point;
  // Largest disagreement between a measured distance and the distance from
  // the solved point to its anchor. Zero for consistent input.
  double residual = 0.0;
};

// Intersects three circles by subtracting the first circle equation from
// the other two and solving the resulting 2x2 linear system. Inconsistent
// distances still give the linear solution; check the residual. Throws
// kCollinearAdversaries when the anchors span less than min_triangle_area.
PlanarFix SolveCircleSystem(std::span<const PlanarObservation, 3> observations,
                            double min_triangle_area = kMinAdversaryTriangleArea);

struct TrilaterationResult {
  geo::GeoPoint position;
  geo::LocalPoint local;
  double residual = 0.0;
};

// Geographic wrapper around SolveCircleSystem. All observations must be
// exact; throws kInvalidArgument otherwise, kOutOfProjectionRange when an
// adversary or the solution falls outside the projection.
TrilaterationResult Trilaterate(std::span<const DistanceObservation, 3> observations,
                                const geo::Projection& projection);

}  // namespace geoleak::attack

#endif  // GEOLEAK_TRILATERATION_H_
