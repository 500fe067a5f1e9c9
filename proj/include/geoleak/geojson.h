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

#ifndef GEOLEAK_GEOJSON_H_
#define GEOLEAK_GEOJSON_H_

#include <optional>
#include <string>
#include <vector>

#include "geoleak/attack.h"
#include "geoleak/region.h"
#include "json.hpp"

namespace geoleak::geojson {

// RFC 7946 positions are [longitude, latitude].
nlohmann::json Position(const geo::GeoPoint& p);
nlohmann::json PointFeature(const geo::GeoPoint& p, nlohmann::json properties);
nlohmann::json LineFeature(const std::vector<geo::GeoPoint>& path, nlohmann::json properties);

// Occupied cells as a MultiPolygon, one rectangle per horizontal run.
nlohmann::json RegionGeometry(const attack::CandidateRegion& region);
nlohmann::json RegionFeature(const attack::CandidateRegion& region, nlohmann::json properties);

// Estimate, region, constraints and account trajectories of one attack.
std::vector<nlohmann::json> ReportFeatures(const attack::AttackReport& report);

}  // namespace geoleak::geojson

#endif  // GEOLEAK_GEOJSON_H_
