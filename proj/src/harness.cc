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

#include "geoleak/harness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "geoleak/error.h"
#include "geoleak/geojson.h"
#include "geoleak/logging.h"

namespace geoleak::harness {
namespace {

using nlohmann::json;
using sim::UserId;

constexpr std::uint64_t kGeneratorSalt = 0x9E3779B97F4A7C15ULL;

const std::array<UserId, 3> kAttackers{UserId{"attacker-1"}, UserId{"attacker-2"}, UserId{"attacker-3"}};

std::string PaddedIndex(std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return digits;
}

std::optional<Outcome> OutcomeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kVictimNeverVisible: return Outcome::kVictimNeverVisible;
    case ErrorCode::kNonConvergence: return Outcome::kNonConvergence;
    case ErrorCode::kEmptyRegion: return Outcome::kEmptyRegion;
    case ErrorCode::kDistanceHidden: return Outcome::kDistanceHidden;
    default: return std::nullopt;
  }
}

void CountQueries(const sim::World& world, const UserId& victim, attack::AttackReport& report) {
  report.queries = 0;
  report.victim_profile_queries = 0;
  for (const sim::QueryRecord& rec : world.query_log()) {
    if (std::find(kAttackers.begin(), kAttackers.end(), rec.observer) == kAttackers.end()) continue;
    ++report.queries;
    if (rec.kind == sim::QueryKind::kProfileView && rec.subject == victim) ++report.victim_profile_queries;
  }
}

attack::AttackReport RunTrilateration(sim::World& world, const Scenario& s,
                                      const std::array<geo::GeoPoint, 3>& vantages) {
  const UserId victim{s.victim.id};
  attack::Session session(world, {kAttackers[0]});
  std::array<attack::DistanceObservation, 3> obs;
  for (std::size_t i = 0; i < 3; ++i) {
    session.Move(kAttackers[0], vantages[i]);
    const std::optional<double> shown = session.ViewProfile(kAttackers[0], victim);
    if (!shown) {
      attack::AttackReport partial;
      partial.moves = session.moves();
      partial.trajectories = session.trajectories();
      CountQueries(world, victim, partial);
      throw attack::AttackError(Error(ErrorCode::kDistanceHidden, "victim hides its distance"), partial);
    }
    obs[i] = {vantages[i], *shown, attack::ObservationKind::kExact, std::nullopt};
  }
  const attack::TrilaterationResult fix = attack::Trilaterate(obs, geo::Projection::AtCentroid(vantages));
  Log().info("trilateration residual {:.3f} m", fix.residual);
  attack::AttackReport report;
  report.estimate = fix.position;
  report.moves = session.moves();
  report.trajectories = session.trajectories();
  CountQueries(world, victim, report);
  return report;
}

attack::AttackReport RunPassive(sim::World& world, const Scenario& s, const std::array<geo::GeoPoint, 3>& vantages,
                                const attack::ReadingModel& reading) {
  const UserId victim{s.victim.id};
  attack::AttackReport report;
  report.trajectories.push_back({kAttackers[0], {world.user(kAttackers[0]).location}});
  for (const geo::GeoPoint& v : vantages) report.trajectories.front().second.push_back(v);
  report.moves = vantages.size();
  try {
    attack::SurveyResult survey =
        attack::PassiveSandwichSurvey(world, kAttackers[0], vantages, victim, {s.attacker.cell_size, reading});
    report.estimate = survey.region.Centroid();
    report.region_area = survey.region.Area();
    report.constraints = std::move(survey.constraints);
    report.region = std::move(survey.region);
  } catch (const Error& e) {
    CountQueries(world, victim, report);
    throw attack::AttackError(e, report);
  }
  CountQueries(world, victim, report);
  return report;
}

double MaxFieldDeviation(const obfuscation::ObfuscationPattern& a, const obfuscation::ObfuscationPattern& b) {
  return std::max({std::abs(a.floor_value - b.floor_value), std::abs(a.near_cutoff - b.near_cutoff),
                   std::abs(a.mid_cutoff - b.mid_cutoff), std::abs(a.mid_band - b.mid_band),
                   std::abs(a.mid_step - b.mid_step), std::abs(a.far_unit - b.far_unit)});
}

std::string ArtifactStem(const Scenario& s) { return s.name + "-" + std::to_string(s.seed); }

}  // namespace

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess: return "success";
    case Outcome::kVictimNeverVisible: return "victim_never_visible";
    case Outcome::kNonConvergence: return "non_convergence";
    case Outcome::kEmptyRegion: return "empty_region";
    case Outcome::kDistanceHidden: return "distance_hidden";
    case Outcome::kInferenceMismatch: return "inference_mismatch";
  }
  return "unknown";
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

sim::World BuildWorld(const Scenario& s) {
  sim::World world(s.policy, s.seed);
  try {
    world.AddUser(UserId{s.victim.id}, s.victim.location, s.victim.show_distance);
    for (const UserSpec& u : s.background) world.AddUser(UserId{u.id}, u.location, u.show_distance);
    Rng gen(s.seed ^ kGeneratorSalt);
    for (const DiscGenerator& g : s.generators) {
      const geo::Projection local(g.center);
      for (std::size_t i = 0; i < g.count; ++i) {
        const double r = g.radius_m * std::sqrt(gen.NextDouble());
        const double theta = 2.0 * geo::kPi * gen.NextDouble();
        const bool show = gen.Bernoulli(g.show_distance_fraction);
        world.AddUser(UserId{g.id_prefix + "-" + PaddedIndex(i)},
                      local.Unproject({r * std::cos(theta), r * std::sin(theta)}), show);
      }
    }
    const geo::GeoPoint start = SceneCenter(s);
    for (const UserId& id : kAttackers) world.AddUser(id, start, true);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return world;
}

RunArtifacts RunScenario(const Scenario& s) {
  s.Validate();
  RunArtifacts art;
  art.row.scenario = s.name;
  art.row.seed = s.seed;
  const geo::GeoPoint truth = s.victim.truth();

  json features = json::array();
  features.push_back(geojson::PointFeature(s.victim.location, {{"role", "victim"}, {"id", s.victim.id}}));
  if (s.victim.true_location) {
    features.push_back(geojson::PointFeature(*s.victim.true_location, {{"role", "victim_true"}, {"id", s.victim.id}}));
  }

  if (s.attacker.kind == AttackKind::kInferPattern) {
    const obfuscation::ObfuscationPattern& pattern = *s.policy.pattern;
    art.scatter = EmitScatter(pattern, s.attacker.scatter_locations, s.attacker.scatter_queries,
                              s.attacker.scatter_max_distance, s.seed);
    try {
      art.inferred = obfuscation::InferPattern(art.scatter);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, e.what());
    }
    if (art.inferred->AllExact() && art.inferred->ToPattern() == pattern) {
      art.row.outcome = Outcome::kSuccess;
      art.row.localization_error = MaxFieldDeviation(art.inferred->ToPattern(), pattern);
    } else {
      art.row.outcome = Outcome::kInferenceMismatch;
    }
    art.row.queries = art.scatter.size();
  } else {
    sim::World world = BuildWorld(s);
    const std::array<geo::GeoPoint, 3> vantages = ResolveVantagePoints(s);
    for (std::size_t i = 0; i < vantages.size(); ++i) {
      features.push_back(geojson::PointFeature(vantages[i], {{"role", "vantage"}, {"index", i}}));
    }
    attack::ReadingModel reading;
    if (s.attacker.knows_pattern && s.policy.pattern) reading.pattern = s.policy.pattern;

    try {
      attack::AttackReport report;
      switch (s.attacker.kind) {
        case AttackKind::kTrilateration:
          report = RunTrilateration(world, s, vantages);
          break;
        case AttackKind::kPassiveSandwich:
          report = RunPassive(world, s, vantages, reading);
          break;
        case AttackKind::kColluding:
        case AttackKind::kColludingFavorites: {
          attack::CollusionOptions opts;
          opts.use_favorites = s.attacker.kind == AttackKind::kColludingFavorites;
          opts.epsilon = s.attacker.epsilon;
          opts.cell_size = s.attacker.cell_size;
          opts.vantage_points = vantages;
          opts.move_budget = s.attacker.move_budget;
          opts.max_sighting_queries = s.attacker.max_sighting_queries;
          opts.requery_when_unconfirmed = s.attacker.requery_when_unconfirmed;
          opts.reading = reading;
          report = attack::ColludingTrilateration(world, kAttackers, UserId{s.victim.id}, opts);
          break;
        }
        case AttackKind::kInferPattern:
          break;
      }
      report.error = geo::HaversineDistance(report.estimate, truth);
      art.row.outcome = Outcome::kSuccess;
      art.row.localization_error = report.error;
      art.report = std::move(report);
    } catch (const attack::AttackError& e) {
      const std::optional<Outcome> outcome = OutcomeFor(e.code());
      if (!outcome) throw Error(ErrorCode::kConfig, e.what());
      Log().info("{} seed {}: {}", s.name, s.seed, e.what());
      art.row.outcome = *outcome;
      art.report = e.partial();
    } catch (const Error& e) {
      const std::optional<Outcome> outcome = OutcomeFor(e.code());
      if (!outcome) throw Error(ErrorCode::kConfig, e.what());
      art.row.outcome = *outcome;
    }
    if (art.report) {
      art.row.region_area = art.report->region_area;
      art.row.moves = art.report->moves;
      art.row.queries = art.report->queries;
      art.row.victim_profile_queries = art.report->victim_profile_queries;
      const bool success = art.row.outcome == Outcome::kSuccess;
      for (json& f : geojson::ReportFeatures(*art.report)) {
        // A failed run has no estimate worth drawing.
        if (!success && f["properties"]["role"] == "estimate") continue;
        features.push_back(std::move(f));
      }
    }
  }

  json collection{{"type", "FeatureCollection"},
                  {"scenario", s.name},
                  {"seed", s.seed},
                  {"outcome", std::string(OutcomeName(art.row.outcome))},
                  {"features", std::move(features)}};
  art.geojson = collection.dump() + "\n";
  return art;
}

RunArtifacts RunScenarioToDir(const Scenario& s, const std::filesystem::path& dir) {
  RunArtifacts art = RunScenario(s);
  std::filesystem::create_directories(dir);
  const std::string stem = ArtifactStem(s);
  std::ofstream(dir / (stem + ".geojson"), std::ios::binary) << art.geojson;
  if (!art.scatter.empty()) {
    std::ofstream scatter(dir / (stem + "-scatter.csv"), std::ios::binary);
    WriteScatterCsv(scatter, art.scatter);
  }
  if (art.inferred) {
    std::ofstream(dir / (stem + "-inferred.json"), std::ios::binary) << obfuscation::ToJson(*art.inferred).dump(2)
                                                                      << "\n";
  }
  const std::filesystem::path metrics = dir / "metrics.csv";
  const bool fresh = !std::filesystem::exists(metrics) || std::filesystem::file_size(metrics) == 0;
  std::ofstream out(metrics, std::ios::binary | std::ios::app);
  if (fresh) out << kMetricsHeader << "\n";
  out << FormatMetricsRow(art.row) << "\n";
  return art;
}

std::string FormatMetricsRow(const MetricsRow& row) {
  std::ostringstream os;
  os << row.scenario << ',' << row.seed << ',' << OutcomeName(row.outcome) << ','
     << (row.localization_error ? FormatDouble(*row.localization_error) : "") << ','
     << FormatDouble(row.region_area) << ',' << row.moves << ',' << row.queries << ','
     << row.victim_profile_queries;
  return os.str();
}

std::string SuiteReport::ToCsv() const {
  std::ostringstream os;
  os << kMetricsHeader << "\n";
  for (const MetricsRow& row : rows) os << FormatMetricsRow(row) << "\n";
  os << "\n" << kSummaryHeader << "\n";
  for (const SuiteSummary& s : summaries) {
    os << s.scenario << ',' << s.runs << ',' << s.successes << ',' << FormatDouble(s.success_rate) << ','
       << (s.median_error ? FormatDouble(*s.median_error) : "") << "\n";
  }
  return os.str();
}

SuiteReport RunSuite(const std::vector<Scenario>& scenarios, std::size_t repetitions, std::size_t jobs) {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
  std::vector<Scenario> tasks;
  for (const Scenario& base : scenarios) {
    for (std::size_t i = 0; i < repetitions; ++i) {
      Scenario s = base;
      s.seed = base.seed + i;
      tasks.push_back(std::move(s));
    }
  }
  std::vector<MetricsRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  auto work = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t t = worker; t < tasks.size(); t += stride) {
      try {
        rows[t] = RunScenario(tasks[t]).row;
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  return AssembleReport(std::move(rows), scenarios);
}

SuiteReport AssembleReport(std::vector<MetricsRow> rows, const std::vector<Scenario>& scenarios) {
  SuiteReport report;
  report.rows = std::move(rows);
  std::sort(report.rows.begin(), report.rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return a.scenario != b.scenario ? a.scenario < b.scenario : a.seed < b.seed;
  });

  for (const Scenario& base : scenarios) {
    SuiteSummary summary;
    summary.scenario = base.name;
    std::vector<double> errors_m;
    for (const MetricsRow& row : report.rows) {
      if (row.scenario != base.name) continue;
      ++summary.runs;
      if (row.localization_error) errors_m.push_back(*row.localization_error);
      if (row.outcome == Outcome::kSuccess && row.localization_error &&
          *row.localization_error <= base.success_radius_m) {
        ++summary.successes;
      }
    }
    summary.success_rate =
        summary.runs ? static_cast<double>(summary.successes) / static_cast<double>(summary.runs) : 0.0;
    if (!errors_m.empty()) {
      std::sort(errors_m.begin(), errors_m.end());
      const std::size_t n = errors_m.size();
      summary.median_error = n % 2 ? errors_m[n / 2] : (errors_m[n / 2 - 1] + errors_m[n / 2]) / 2.0;
    }
    report.summaries.push_back(std::move(summary));
  }
  std::sort(report.summaries.begin(), report.summaries.end(),
            [](const SuiteSummary& a, const SuiteSummary& b) { return a.scenario < b.scenario; });
  return report;
}

std::vector<obfuscation::ObfuscationSample> EmitScatter(const obfuscation::ObfuscationPattern& pattern,
                                                        std::size_t n_locations, std::size_t queries_per_location,
                                                        double max_distance, std::uint64_t seed) {
  if (n_locations < 1 || queries_per_location < 1 || !(max_distance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scatter needs at least one location, one query and a positive range");
  }
  pattern.Validate();
  Rng rng(seed);
  std::vector<obfuscation::ObfuscationSample> samples;
  samples.reserve(n_locations * queries_per_location);
  for (std::size_t i = 0; i < n_locations; ++i) {
    const double d = (1.0 - rng.NextDouble()) * max_distance;  // (0, max]
    for (std::size_t q = 0; q < queries_per_location; ++q) {
      samples.push_back({d, obfuscation::ObfuscateDistance(d, pattern, rng)});
    }
  }
  return samples;
}

void WriteScatterCsv(std::ostream& out, const std::vector<obfuscation::ObfuscationSample>& samples) {
  out << "true_m,shown_m\n";
  for (const obfuscation::ObfuscationSample& s : samples) {
    out << FormatDouble(s.true_distance) << ',' << FormatDouble(s.shown_distance) << '\n';
  }
}

std::vector<obfuscation::ObfuscationSample> ReadScatterCsv(std::istream& in) {
  std::vector<obfuscation::ObfuscationSample> samples;
  std::string line;
  std::size_t line_no = 0;
  auto parse = [&](std::string_view field, double& out) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    const auto r = std::from_chars(field.data(), field.data() + field.size(), out);
    if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1 && line.rfind("true_m", 0) == 0) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_no) + ": expected two columns");
    }
    obfuscation::ObfuscationSample s;
    parse(std::string_view(line).substr(0, comma), s.true_distance);
    parse(std::string_view(line).substr(comma + 1), s.shown_distance);
    samples.push_back(s);
  }
  return samples;
}

}  // namespace geoleak::harness
