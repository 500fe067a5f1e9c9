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

#include "geoleak/trilateration.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "geoleak/error.h"

namespace geoleak::attack {

PlanarFix SolveCircleSystem(std::span<const PlanarObservation, 3> obs, double min_triangle_area) {
  const geo::LocalPoint a = obs[0].anchor;
  const geo::LocalPoint b = obs[1].anchor;
  const geo::LocalPoint c = obs[2].anchor;

  // Work relative to the first anchor to keep the squares small.
  const geo::LocalPoint ab = b - a;
  const geo::LocalPoint ac = c - a;
  const double cross = ab.x * ac.y - ab.y * ac.x;
  if (!(std::abs(cross) / 2.0 > min_triangle_area)) {
    throw Error(ErrorCode::kCollinearAdversaries,
                "adversary triangle area " + std::to_string(std::abs(cross) / 2.0) + " m^2 is too small");
  }

  const double d0 = obs[0].distance;
  const double d1 = obs[1].distance;
  const double d2 = obs[2].distance;
  // |p - b|^2 - |p - a|^2 = d1^2 - d0^2, with a at the origin:
  //   2 ab . p = |ab|^2 + d0^2 - d1^2
  const double r1 = (ab.x * ab.x + ab.y * ab.y + d0 * d0 - d1 * d1) / 2.0;
  const double r2 = (ac.x * ac.x + ac.y * ac.y + d0 * d0 - d2 * d2) / 2.0;
  const geo::LocalPoint rel{(r1 * ac.y - r2 * ab.y) / cross, (ab.x * r2 - ac.x * r1) / cross};

  PlanarFix fix{a + rel, 0.0};
  for (const PlanarObservation& o : obs) {
    fix.residual = std::max(fix.residual, std::abs(geo::Distance(fix.point, o.anchor) - o.distance));
  }
  return fix;
}

TrilaterationResult Trilaterate(std::span<const DistanceObservation, 3> observations,
                                const geo::Projection& projection) {
  std::array<PlanarObservation, 3> planar;
  for (std::size_t i = 0; i < 3; ++i) {
    const DistanceObservation& o = observations[i];
    if (o.kind != ObservationKind::kExact || !(o.distance >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "trilateration needs exact non-negative distances");
    }
    planar[i] = {projection.Project(o.adversary_position), o.distance};
  }
  const PlanarFix fix = SolveCircleSystem(planar);
  return {projection.Unproject(fix.point), fix.point, fix.residual};
}

}  // namespace geoleak::attack
