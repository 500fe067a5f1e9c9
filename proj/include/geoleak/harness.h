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

#ifndef GEOLEAK_HARNESS_H_
#define GEOLEAK_HARNESS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoleak/attack.h"
#include "geoleak/obfuscation.h"
#include "geoleak/scenario.h"

namespace geoleak::harness {

enum class Outcome {
  kSuccess,
  kVictimNeverVisible,
  kNonConvergence,
  kEmptyRegion,
  kDistanceHidden,
  kInferenceMismatch,
};

std::string_view OutcomeName(Outcome outcome);

struct MetricsRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::optional<double> localization_error;  // present iff kSuccess
  double region_area = 0.0;
  std::size_t moves = 0;
  std::size_t queries = 0;
  std::size_t victim_profile_queries = 0;
  Outcome outcome = Outcome::kSuccess;
};

struct RunArtifacts {
  MetricsRow row;
  std::string geojson;
  std::optional<attack::AttackReport> report;
  // infer_pattern runs only.
  std::vector<obfuscation::ObfuscationSample> scatter;
  std::optional<obfuscation::InferredPattern> inferred;
};

// Builds the world with every user and the attacker accounts attacker-1..3
// at the scene center.
sim::World BuildWorld(const Scenario& s);

// Deterministic in (scenario, seed). Attack failures become outcomes;
// configuration problems throw kConfig.
RunArtifacts RunScenario(const Scenario& s);

// Writes <name>-<seed>.geojson (plus scatter/inferred files for
// infer_pattern runs) and appends the row to metrics.csv.
RunArtifacts RunScenarioToDir(const Scenario& s, const std::filesystem::path& dir);

inline constexpr std::string_view kMetricsHeader =
    "scenario,seed,outcome,localization_error_m,region_area_m2,moves,queries,victim_profile_queries";
inline constexpr std::string_view kSummaryHeader = "scenario,runs,successes,success_rate,median_error_m";

std::string FormatMetricsRow(const MetricsRow& row);

struct SuiteSummary {
  std::string scenario;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::optional<double> median_error;
};

struct SuiteReport {
  std::vector<MetricsRow> rows;  // sorted by (scenario, seed)
  std::vector<SuiteSummary> summaries;

  // Rows under kMetricsHeader, a blank line, then summaries under
  // kSummaryHeader.
  std::string ToCsv() const;
};

// Repetition i runs with seed + i. A run counts as a success when it
// completes with error within the scenario's success radius. jobs > 1 runs
// repetitions on that many threads; results do not depend on it.
// Sorts rows and computes one summary per scenario name.
SuiteReport AssembleReport(std::vector<MetricsRow> rows, const std::vector<Scenario>& scenarios);

SuiteReport RunSuite(const std::vector<Scenario>& scenarios, std::size_t repetitions, std::size_t jobs = 1);

// Scatter of shown against true distance: n_locations true distances
// uniform on (0, max_distance], each queried queries_per_location times.
std::vector<obfuscation::ObfuscationSample> EmitScatter(const obfuscation::ObfuscationPattern& pattern,
                                                        std::size_t n_locations, std::size_t queries_per_location,
                                                        double max_distance, std::uint64_t seed);

void WriteScatterCsv(std::ostream& out, const std::vector<obfuscation::ObfuscationSample>& samples);
// Throws kConfig on malformed input.
std::vector<obfuscation::ObfuscationSample> ReadScatterCsv(std::istream& in);

// Shortest round-trip decimal form.
std::string FormatDouble(double v);

}  // namespace geoleak::harness

#endif  // GEOLEAK_HARNESS_H_
