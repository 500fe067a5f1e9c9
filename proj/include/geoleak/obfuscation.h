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

#ifndef GEOLEAK_OBFUSCATION_H_
#define GEOLEAK_OBFUSCATION_H_

#include <span>
#include <string_view>
#include <vector>

#include "geoleak/random.h"
#include "json.hpp"

namespace geoleak::obfuscation {

// Mid-range readings start from the true distance rounded to this unit.
inline constexpr double kMidBaseUnit = 100.0;

// Piecewise distance obfuscation in four branches, by true distance d:
//   d < floor_value                 -> floor_value
//   floor_value <= d < near_cutoff  -> uniform over floor_value + k*mid_step,
//                                      up to near_cutoff
//   near_cutoff <= d < mid_cutoff   -> round(d, 100) + uniform {0, mid_step,
//                                      ..., mid_band}
//   d >= mid_cutoff                 -> round(d, far_unit)
// All rounding is half-up.
struct ObfuscationPattern {
  double floor_value = 80.0;
  double near_cutoff = 100.0;
  double mid_cutoff = 1000.0;
  double mid_band = 100.0;
  double mid_step = 10.0;
  double far_unit = 1000.0;

  static ObfuscationPattern HornetDefault() { return {}; }

  // Throws kInvalidArgument unless 0 < floor < near <= mid, mid_step divides
  // mid_band and far_unit > 0.
  void Validate() const;

  friend bool operator==(const ObfuscationPattern&, const ObfuscationPattern&) = default;
};

nlohmann::json ToJson(const ObfuscationPattern& pattern);
// Accepts the six-field object or the string "preset:hornet".
ObfuscationPattern PatternFromJson(const nlohmann::json& j);

double RoundHalfUp(double value, double unit);

// Fresh draw from the pattern's output distribution. Throws kNegativeDistance.
double ObfuscateDistance(double true_distance, const ObfuscationPattern& pattern, Rng& rng);

struct Envelope {
  double lo = 0.0;
  double hi = 0.0;
};

// Tight bounds on every value ObfuscateDistance can return for this input.
Envelope ObfuscationEnvelope(double true_distance, const ObfuscationPattern& pattern);

// Half-open interval of true distances [lo, hi). Empty when lo >= hi.
struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo < hi); }
  bool Contains(double d) const { return d >= lo && d < hi; }

  friend bool operator==(const DistanceInterval&, const DistanceInterval&) = default;
};

// Every maximal run of true distances that can produce 'shown', ascending
// and non-touching.
std::vector<DistanceInterval> InvertReadingPieces(double shown, const ObfuscationPattern& pattern);

// True distances consistent with a reading. For patterns shaped like the
// default the consistent set is a single interval; otherwise the hull of the
// pieces is returned, which is still a sound bound. Impossible readings give
// an empty interval.
DistanceInterval InvertReading(double shown, const ObfuscationPattern& pattern);

// A (true distance, shown distance) pair as recorded by an observer who
// knows the real separation.
struct ObfuscationSample {
  double true_distance = 0.0;
  double shown_distance = 0.0;
};

enum class Confidence { kExact, kAmbiguous };

std::string_view ConfidenceName(Confidence c);

struct InferredValue {
  double value = 0.0;
  Confidence confidence = Confidence::kAmbiguous;

  bool exact() const { return confidence == Confidence::kExact; }
};

struct InferredPattern {
  InferredValue floor_value;
  InferredValue near_cutoff;
  InferredValue mid_cutoff;
  InferredValue mid_band;
  InferredValue mid_step;
  InferredValue far_unit;

  bool AllExact() const;
  ObfuscationPattern ToPattern() const;
};

nlohmann::json ToJson(const InferredPattern& inferred);

inline constexpr std::size_t kMinInferenceSamples = 500;
// Distinct true distances a range needs before its fields count as exact.
inline constexpr std::size_t kMinLocationsPerRange = 10;

// Reconstructs a pattern from observed samples. Samples sharing a true
// distance are treated as repeated queries from one location, so the
// procedure needs several queries per location to see the randomized bands.
// Throws kInsufficientSamples below kMinInferenceSamples.
InferredPattern InferPattern(std::span<const ObfuscationSample> samples);

}  // namespace geoleak::obfuscation

#endif  // GEOLEAK_OBFUSCATION_H_
