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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "geoleak/error.h"
#include "geoleak/obfuscation.h"

namespace geoleak::obfuscation {
namespace {

// All repeated readings taken at one true distance, rounded to whole meters.
struct Location {
  double true_distance = 0.0;
  std::vector<std::int64_t> outputs;  // sorted, unique

  bool randomized() const { return outputs.size() > 1; }
  std::int64_t max_output() const { return outputs.back(); }
};

std::vector<Location> GroupByLocation(std::span<const ObfuscationSample> samples) {
  std::vector<ObfuscationSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const ObfuscationSample& a, const ObfuscationSample& b) {
    return a.true_distance < b.true_distance ||
           (a.true_distance == b.true_distance && a.shown_distance < b.shown_distance);
  });
  std::vector<Location> locations;
  for (const ObfuscationSample& s : sorted) {
    if (locations.empty() || locations.back().true_distance != s.true_distance) {
      locations.push_back({s.true_distance, {}});
    }
    const std::int64_t meters = std::llround(s.shown_distance);
    std::vector<std::int64_t>& out = locations.back().outputs;
    if (out.empty() || out.back() != meters) out.push_back(meters);
  }
  return locations;
}

// The single multiple of step in (lo, hi], if exactly one exists.
std::optional<double> SnapToStep(double lo, double hi, double step) {
  const double first = std::floor(lo / step) + 1.0;
  const double last = std::floor(hi / step);
  if (first != last) return std::nullopt;
  return first * step;
}

InferredValue Exact(double v) { return {v, Confidence::kExact}; }
InferredValue Ambiguous(double v) { return {v, Confidence::kAmbiguous}; }

}  // namespace

InferredPattern InferPattern(std::span<const ObfuscationSample> samples) {
  if (samples.size() < kMinInferenceSamples) {
    throw Error(ErrorCode::kInsufficientSamples,
                "need at least " + std::to_string(kMinInferenceSamples) + " samples, got " +
                    std::to_string(samples.size()));
  }
  for (const ObfuscationSample& s : samples) {
    if (!(s.true_distance >= 0.0) || !(s.shown_distance >= 0.0) || !std::isfinite(s.true_distance) ||
        !std::isfinite(s.shown_distance)) {
      throw Error(ErrorCode::kInvalidArgument, "samples must be finite and non-negative");
    }
  }

  const std::vector<Location> locs = GroupByLocation(samples);
  const auto first_rand = std::find_if(locs.begin(), locs.end(), [](const Location& l) { return l.randomized(); });
  const auto last_rand_rev = std::find_if(locs.rbegin(), locs.rend(), [](const Location& l) { return l.randomized(); });

  // Deterministic locations below the randomized run form the floor region,
  // those above it the far region; without a randomized run everything is
  // treated as low-range data.
  const std::span<const Location> low(locs.begin(), first_rand);
  std::span<const Location> mid;
  std::span<const Location> far;
  if (first_rand != locs.end()) {
    const auto last_rand = last_rand_rev.base();  // one past the last randomized
    mid = std::span<const Location>(first_rand, last_rand);
    far = std::span<const Location>(last_rand, locs.end());
  }

  InferredPattern result;

  // Floor: the low region must be one constant reading at or above every
  // true distance it covers.
  {
    const Location* first = low.empty() ? (locs.empty() ? nullptr : &locs.front()) : &low.front();
    const double value = first ? static_cast<double>(first->outputs.front()) : 0.0;
    bool constant = !low.empty();
    for (const Location& l : low) {
      if (l.outputs.size() != 1 || l.outputs.front() != first->outputs.front() ||
          static_cast<double>(l.outputs.front()) < l.true_distance) {
        constant = false;
        break;
      }
    }
    result.floor_value = constant && low.size() >= kMinLocationsPerRange ? Exact(value) : Ambiguous(value);
  }

  // Split the randomized run: the near band's readings top out at a fixed
  // ceiling, while mid-range readings follow the true distance upward. A
  // near location may miss the ceiling in its draws, so the ceiling is the
  // majority maximum over the first few randomized locations.
  std::span<const Location> near_band;
  std::span<const Location> mid_band;
  bool ceiling_clear = false;
  if (!mid.empty()) {
    const std::size_t head = std::min(kMinLocationsPerRange, mid.size());
    std::map<std::int64_t, std::size_t> votes;
    for (std::size_t i = 0; i < head; ++i) ++votes[mid[i].max_output()];
    std::int64_t ceiling = 0;
    std::size_t most = 0;
    for (const auto& [value, count] : votes) {
      if (count >= most) {
        ceiling = value;
        most = count;
      }
    }
    ceiling_clear = 2 * most > head;
    std::size_t split = 0;
    while (split < mid.size() && mid[split].max_output() <= ceiling) ++split;
    near_band = mid.subspan(0, split);
    mid_band = mid.subspan(split);
  }
  const bool mid_supported = mid_band.size() >= kMinLocationsPerRange;

  // Step: GCD of the spacing between readings taken at the same location.
  std::int64_t step_gcd = 0;
  for (const Location& l : mid) {
    for (std::size_t i = 1; i < l.outputs.size(); ++i) {
      step_gcd = std::gcd(step_gcd, l.outputs[i] - l.outputs[i - 1]);
    }
  }
  result.mid_step = step_gcd > 0 && mid_supported ? Exact(static_cast<double>(step_gcd))
                                                  : Ambiguous(static_cast<double>(step_gcd));
  const double snap_step = step_gcd > 0 ? static_cast<double>(step_gcd) : 1.0;

  // Band: largest offset above the rounded base.
  {
    double band = 0.0;
    for (const Location& l : mid_band) {
      band = std::max(band, static_cast<double>(l.max_output()) - RoundHalfUp(l.true_distance, kMidBaseUnit));
    }
    result.mid_band = mid_supported ? Exact(band) : Ambiguous(band);
  }

  // Cutoffs are change points between adjacent locations, snapped to the
  // reading lattice.
  auto change_point = [&](std::span<const Location> before, std::span<const Location> after,
                          bool supported) -> InferredValue {
    if (before.empty() || after.empty()) return Ambiguous(0.0);
    const double lo = before.back().true_distance;
    const double hi = after.front().true_distance;
    const std::optional<double> snapped = SnapToStep(lo, hi, snap_step);
    if (snapped && supported && step_gcd > 0) return Exact(*snapped);
    return Ambiguous(snapped.value_or(hi));
  };
  const std::size_t low_range_count = low.size() + near_band.size();
  result.near_cutoff = change_point(near_band, mid_band,
                                    ceiling_clear && mid_supported && low_range_count >= kMinLocationsPerRange);

  const bool far_supported = far.size() >= kMinLocationsPerRange;
  result.mid_cutoff = change_point(mid, far, mid_supported && far_supported);

  // Far unit: GCD of the rounded readings. A single distinct reading cannot
  // distinguish the unit from its multiples.
  {
    std::int64_t far_gcd = 0;
    std::vector<std::int64_t> distinct;
    for (const Location& l : far) {
      for (std::int64_t v : l.outputs) {
        far_gcd = std::gcd(far_gcd, v);
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
      }
    }
    const bool exact = far_supported && distinct.size() >= 2 && far_gcd > 0;
    result.far_unit = exact ? Exact(static_cast<double>(far_gcd)) : Ambiguous(static_cast<double>(far_gcd));
  }

  return result;
}

}  // namespace geoleak::obfuscation
