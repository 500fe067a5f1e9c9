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

#include "geoleak/obfuscation.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "geoleak/error.h"

namespace geoleak::obfuscation {
namespace {

constexpr double kReadingTolerance = 1e-6;

void CheckDistance(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw Error(ErrorCode::kNegativeDistance, "distance must be finite and >= 0, got " + std::to_string(d));
  }
}

// Number of quantized values floor + k*step that do not exceed near_cutoff.
std::uint64_t NearBandCount(const ObfuscationPattern& p) {
  return static_cast<std::uint64_t>(
             std::floor((p.near_cutoff - p.floor_value) / p.mid_step + kReadingTolerance)) +
         1;
}

std::uint64_t MidOffsetCount(const ObfuscationPattern& p) {
  return static_cast<std::uint64_t>(std::llround(p.mid_band / p.mid_step)) + 1;
}

// Returns k when value == origin + k*step for an integer k in [0, count).
std::optional<std::uint64_t> LatticeIndex(double value, double origin, double step, std::uint64_t count) {
  const double k = (value - origin) / step;
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > kReadingTolerance || rounded < 0.0) return std::nullopt;
  if (rounded >= static_cast<double>(count)) return std::nullopt;
  return static_cast<std::uint64_t>(rounded);
}

bool IsMultiple(double value, double unit) {
  const double k = value / unit;
  return std::abs(k - std::round(k)) <= kReadingTolerance;
}

}  // namespace

void ObfuscationPattern::Validate() const {
  const bool finite = std::isfinite(floor_value) && std::isfinite(near_cutoff) &&
                      std::isfinite(mid_cutoff) && std::isfinite(mid_band) &&
                      std::isfinite(mid_step) && std::isfinite(far_unit);
  if (!finite || !(floor_value > 0.0) || !(floor_value < near_cutoff) ||
      !(near_cutoff <= mid_cutoff)) {
    throw Error(ErrorCode::kInvalidArgument, "pattern cutoffs must satisfy 0 < floor < near <= mid");
  }
  if (!(mid_step > 0.0) || !(mid_band >= 0.0) || !IsMultiple(mid_band, mid_step)) {
    throw Error(ErrorCode::kInvalidArgument, "mid_step must be positive and divide mid_band");
  }
  if (!(far_unit > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "far_unit must be positive");
  }
}

nlohmann::json ToJson(const ObfuscationPattern& p) {
  return nlohmann::json{{"floor_value", p.floor_value}, {"near_cutoff", p.near_cutoff},
                        {"mid_cutoff", p.mid_cutoff},   {"mid_band", p.mid_band},
                        {"mid_step", p.mid_step},       {"far_unit", p.far_unit}};
}

ObfuscationPattern PatternFromJson(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "preset:hornet") return ObfuscationPattern::HornetDefault();
    throw Error(ErrorCode::kConfig, "unknown pattern preset '" + j.get<std::string>() + "'");
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "pattern must be an object or preset string");
  ObfuscationPattern p;
  try {
    p.floor_value = j.at("floor_value").get<double>();
    p.near_cutoff = j.at("near_cutoff").get<double>();
    p.mid_cutoff = j.at("mid_cutoff").get<double>();
    p.mid_band = j.at("mid_band").get<double>();
    p.mid_step = j.at("mid_step").get<double>();
    p.far_unit = j.at("far_unit").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad pattern object: ") + e.what());
  }
  try {
    p.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return p;
}

double RoundHalfUp(double value, double unit) { return std::floor(value / unit + 0.5) * unit; }

double ObfuscateDistance(double d, const ObfuscationPattern& p, Rng& rng) {
  CheckDistance(d);
  if (d < p.floor_value) return p.floor_value;
  if (d < p.near_cutoff) {
    return p.floor_value + p.mid_step * static_cast<double>(rng.UniformIndex(NearBandCount(p)));
  }
  if (d < p.mid_cutoff) {
    return RoundHalfUp(d, kMidBaseUnit) +
           p.mid_step * static_cast<double>(rng.UniformIndex(MidOffsetCount(p)));
  }
  return RoundHalfUp(d, p.far_unit);
}

Envelope ObfuscationEnvelope(double d, const ObfuscationPattern& p) {
  CheckDistance(d);
  if (d < p.floor_value) return {p.floor_value, p.floor_value};
  if (d < p.near_cutoff) {
    return {p.floor_value, p.floor_value + p.mid_step * static_cast<double>(NearBandCount(p) - 1)};
  }
  if (d < p.mid_cutoff) {
    const double base = RoundHalfUp(d, kMidBaseUnit);
    return {base, base + p.mid_step * static_cast<double>(MidOffsetCount(p) - 1)};
  }
  const double r = RoundHalfUp(d, p.far_unit);
  return {r, r};
}

std::vector<DistanceInterval> InvertReadingPieces(double shown, const ObfuscationPattern& p) {
  std::vector<DistanceInterval> pieces;
  if (!(shown >= 0.0) || !std::isfinite(shown)) return pieces;

  auto add = [&pieces](double lo, double hi) {
    if (lo < hi) pieces.push_back({lo, hi});
  };

  if (std::abs(shown - p.floor_value) <= kReadingTolerance) add(0.0, p.floor_value);
  if (LatticeIndex(shown, p.floor_value, p.mid_step, NearBandCount(p))) {
    add(p.floor_value, p.near_cutoff);
  }
  // Mid branch: shown = base + j*step, base a multiple of kMidBaseUnit, and
  // base = round(d) for d in [base - unit/2, base + unit/2).
  const std::uint64_t offsets = MidOffsetCount(p);
  for (std::uint64_t j = 0; j < offsets; ++j) {
    const double base = shown - p.mid_step * static_cast<double>(j);
    if (base < 0.0 || !IsMultiple(base, kMidBaseUnit)) continue;
    const double snapped = std::round(base / kMidBaseUnit) * kMidBaseUnit;
    add(std::max(snapped - kMidBaseUnit / 2.0, p.near_cutoff),
        std::min(snapped + kMidBaseUnit / 2.0, p.mid_cutoff));
  }
  if (IsMultiple(shown, p.far_unit)) {
    const double snapped = std::round(shown / p.far_unit) * p.far_unit;
    add(std::max(snapped - p.far_unit / 2.0, p.mid_cutoff), snapped + p.far_unit / 2.0);
  }

  std::sort(pieces.begin(), pieces.end(),
            [](const DistanceInterval& a, const DistanceInterval& b) { return a.lo < b.lo; });
  std::vector<DistanceInterval> merged;
  for (const DistanceInterval& piece : pieces) {
    if (!merged.empty() && piece.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, piece.hi);
    } else {
      merged.push_back(piece);
    }
  }
  return merged;
}

DistanceInterval InvertReading(double shown, const ObfuscationPattern& p) {
  const std::vector<DistanceInterval> pieces = InvertReadingPieces(shown, p);
  if (pieces.empty()) return {0.0, 0.0};
  return {pieces.front().lo, pieces.back().hi};
}

std::string_view ConfidenceName(Confidence c) {
  return c == Confidence::kExact ? "exact" : "ambiguous";
}

bool InferredPattern::AllExact() const {
  return floor_value.exact() && near_cutoff.exact() && mid_cutoff.exact() && mid_band.exact() &&
         mid_step.exact() && far_unit.exact();
}

ObfuscationPattern InferredPattern::ToPattern() const {
  return ObfuscationPattern{floor_value.value, near_cutoff.value, mid_cutoff.value,
                            mid_band.value,    mid_step.value,    far_unit.value};
}

nlohmann::json ToJson(const InferredPattern& inferred) {
  auto field = [](const InferredValue& v) {
    return nlohmann::json{{"value", v.value}, {"confidence", std::string(ConfidenceName(v.confidence))}};
  };
  return nlohmann::json{{"floor_value", field(inferred.floor_value)},
                        {"near_cutoff", field(inferred.near_cutoff)},
                        {"mid_cutoff", field(inferred.mid_cutoff)},
                        {"mid_band", field(inferred.mid_band)},
                        {"mid_step", field(inferred.mid_step)},
                        {"far_unit", field(inferred.far_unit)},
                        {"all_exact", inferred.AllExact()}};
}

}  // namespace geoleak::obfuscation
