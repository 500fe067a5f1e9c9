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

// geoleak: run attack scenarios, emit obfuscation scatters, infer patterns.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "geoleak/error.h"
#include "geoleak/harness.h"
#include "geoleak/logging.h"
#include "geoleak/obfuscation.h"
#include "json.hpp"

namespace {

using namespace geoleak;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAttackFailure = 2;

obfuscation::ObfuscationPattern LoadPattern(const std::string& arg) {
  if (arg.rfind("preset:", 0) == 0) return obfuscation::PatternFromJson(arg);
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open pattern file " + arg);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, arg + ": " + e.what());
  }
  return obfuscation::PatternFromJson(j);
}

int Run(const std::string& scenario_path, std::uint64_t seed, bool seed_set, const std::string& out,
        std::size_t reps) {
  harness::Scenario base = harness::LoadScenario(scenario_path);
  if (seed_set) base.seed = seed;
  std::vector<harness::MetricsRow> rows;
  bool all_success = true;
  for (std::size_t i = 0; i < reps; ++i) {
    harness::Scenario s = base;
    s.seed = base.seed + i;
    const harness::RunArtifacts art = harness::RunScenarioToDir(s, out);
    std::cout << harness::FormatMetricsRow(art.row) << "\n";
    all_success = all_success && art.row.outcome == harness::Outcome::kSuccess;
    rows.push_back(art.row);
  }
  if (reps > 1) {
    const harness::SuiteReport report = harness::AssembleReport(std::move(rows), {base});
    std::ofstream(std::filesystem::path(out) / (base.name + "-suite.csv"), std::ios::binary) << report.ToCsv();
  }
  return all_success ? kExitOk : kExitAttackFailure;
}

}  // namespace

int main(int argc, char** argv) {
  InitLoggingFromEnv();
  CLI::App app{"Distance-disclosure attack simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  CLI::App* run = app.add_subcommand("run", "Run a scenario and write GeoJSON and metrics");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Seed (overrides the scenario's)");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--reps", reps, "Repetitions with seeds seed+i")->check(CLI::PositiveNumber);

  std::string pattern_arg, scatter_out;
  std::size_t locations = 3000, queries = 30;
  double max_dist = 3000.0;
  std::uint64_t scatter_seed = 0;
  CLI::App* scatter = app.add_subcommand("scatter", "Sample obfuscated readings to CSV");
  scatter->add_option("--pattern", pattern_arg, "Pattern JSON file or preset:hornet")->required();
  scatter->add_option("--locations", locations)->check(CLI::PositiveNumber);
  scatter->add_option("--queries", queries)->check(CLI::PositiveNumber);
  scatter->add_option("--max-dist", max_dist)->check(CLI::PositiveNumber);
  scatter->add_option("--seed", scatter_seed);
  scatter->add_option("--out", scatter_out, "Output CSV")->required();

  std::string samples_path;
  CLI::App* infer = app.add_subcommand("infer", "Infer an obfuscation pattern from a scatter CSV");
  infer->add_option("--samples", samples_path, "Scatter CSV")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return Run(scenario_path, seed, seed_opt->count() > 0, out_dir, reps);
    if (*scatter) {
      const auto samples = harness::EmitScatter(LoadPattern(pattern_arg), locations, queries, max_dist, scatter_seed);
      std::ofstream out(scatter_out, std::ios::binary);
      if (!out) throw Error(ErrorCode::kConfig, "cannot write " + scatter_out);
      harness::WriteScatterCsv(out, samples);
      return kExitOk;
    }
    if (*infer) {
      std::ifstream in(samples_path);
      const auto inferred = obfuscation::InferPattern(harness::ReadScatterCsv(in));
      std::cout << obfuscation::ToJson(inferred).dump(2) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "geoleak: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "geoleak: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
