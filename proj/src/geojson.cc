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

#include "geoleak/geojson.h"

namespace geoleak::geojson {

using nlohmann::json;

json Position(const geo::GeoPoint& p) { return json::array({p.lon, p.lat}); }

json PointFeature(const geo::GeoPoint& p, json properties) {
  return json{{"type", "Feature"},
              {"geometry", {{"type", "Point"}, {"coordinates", Position(p)}}},
              {"properties", std::move(properties)}};
}

json LineFeature(const std::vector<geo::GeoPoint>& path, json properties) {
  json coords = json::array();
  for (const geo::GeoPoint& p : path) coords.push_back(Position(p));
  return json{{"type", "Feature"},
              {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
              {"properties", std::move(properties)}};
}

json RegionGeometry(const attack::CandidateRegion& region) {
  const geo::Projection& proj = region.projection();
  const double s = region.cell_size();
  json polygons = json::array();
  for (std::int64_t r = region.first_row(); r < region.first_row() + region.rows(); ++r) {
    std::int64_t c = region.first_col();
    const std::int64_t end = region.first_col() + region.cols();
    while (c < end) {
      if (!region.Occupied(c, r)) {
        ++c;
        continue;
      }
      const std::int64_t start = c;
      while (c < end && region.Occupied(c, r)) ++c;
      const double x0 = static_cast<double>(start) * s;
      const double x1 = static_cast<double>(c) * s;
      const double y0 = static_cast<double>(r) * s;
      const double y1 = static_cast<double>(r + 1) * s;
      // Counterclockwise exterior ring, closed.
      json ring = json::array({Position(proj.Unproject({x0, y0})), Position(proj.Unproject({x1, y0})),
                               Position(proj.Unproject({x1, y1})), Position(proj.Unproject({x0, y1})),
                               Position(proj.Unproject({x0, y0}))});
      polygons.push_back(json::array({std::move(ring)}));
    }
  }
  return json{{"type", "MultiPolygon"}, {"coordinates", std::move(polygons)}};
}

json RegionFeature(const attack::CandidateRegion& region, json properties) {
  return json{{"type", "Feature"}, {"geometry", RegionGeometry(region)}, {"properties", std::move(properties)}};
}

std::vector<json> ReportFeatures(const attack::AttackReport& report) {
  std::vector<json> features;
  for (const auto& [id, path] : report.trajectories) {
    if (path.size() >= 2) {
      features.push_back(LineFeature(path, {{"role", "trajectory"}, {"account", id.value}}));
    } else if (!path.empty()) {
      features.push_back(PointFeature(path.front(), {{"role", "trajectory"}, {"account", id.value}}));
    }
  }
  for (const attack::RingConstraint& k : report.constraints) {
    json props{{"role", "constraint"}, {"inner_m", k.inner}};
    props["outer_m"] = k.outer ? json(*k.outer) : json();
    features.push_back(PointFeature(k.center, std::move(props)));
  }
  if (report.region) {
    features.push_back(RegionFeature(*report.region, {{"role", "region"},
                                                      {"cell_size_m", report.region->cell_size()},
                                                      {"area_m2", report.region->Area()}}));
  }
  json props{{"role", "estimate"}};
  props["error_m"] = report.error ? json(*report.error) : json();
  features.push_back(PointFeature(report.estimate, std::move(props)));
  return features;
}

}  // namespace geoleak::geojson
