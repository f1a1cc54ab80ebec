// Copyright 2026 The parkcover Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "parkcover/bnb_solver.h"
#include "parkcover/cardinality.h"
#include "parkcover/city_model.h"
#include "parkcover/error.h"
#include "parkcover/evaluation.h"
#include "parkcover/row_generation.h"
#include "parkcover/scp_instance.h"
#include "parkcover/trajectory.h"
#include "run_manifest.h"

namespace parkcover::cli {
namespace fs = std::filesystem;
namespace {

// Thrown for command-line mistakes that CLI11 cannot see (bad file
// combinations, malformed lists).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInfeasible:
      return kExitInfeasible;
    case ErrorKind::kResourceLimit:
    case ErrorKind::kNumeric:
      return kExitResourceLimit;
    default:
      return kExitBadInput;
  }
}

// "HH:MM" or plain minutes after midnight.
Minutes ParseClock(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) return std::stod(text);
    return 60.0 * std::stoi(text.substr(0, colon)) +
           std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError(fmt::format("bad time of day '{}'", text));
  }
}

std::string FormatClock(Minutes m) {
  const int whole = static_cast<int>(std::lround(m));
  if (std::abs(m - whole) > 1e-9) return fmt::format("{}", m);
  return fmt::format("{:02d}:{:02d}", whole / 60, whole % 60);
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("bad integer '{}' in list '{}'", item, text));
    }
  }
  return out;
}

std::string JoinInts(const std::vector<int>& values) {
  return fmt::format("{}", fmt::join(values, ","));
}

std::string FormatDouble(double v) { return fmt::format("{}", v); }

fs::path ResolveOutDir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    dir = env != nullptr && *env != '\0' ? env : ".";
  }
  fs::path path = fs::absolute(dir).lexically_normal();
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, fmt::format("cannot create output directory "
                                            "{}: {}", path.string(),
                                            ec.message()));
  }
  return path;
}

fs::path Absolute(const std::string& path) {
  return fs::absolute(path).lexically_normal();
}

// Sidecar metadata lives next to the matrix: instance.txt ->
// instance.meta.csv.
fs::path MetaPathFor(fs::path instance_path) {
  return instance_path.replace_extension(".meta.csv");
}

// Flags shared by every command.
struct Common {
  std::string out;
  std::string prefix;
  std::uint64_t seed = 1;
  int threads = 1;
};

void AddCommon(CLI::App* cmd, Common& common) {
  cmd->add_option("--out", common.out,
                  fmt::format("output directory (default: ${} or .)",
                              kOutputDirEnv));
  cmd->add_option("--prefix", common.prefix, "prefix for output file names");
  cmd->add_option("--seed", common.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", common.threads,
                  "worker threads for parallel stages")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void PushCommon(std::vector<std::string>& argv, const fs::path& out,
                const Common& common) {
  argv.insert(argv.end(), {"--out", out.string(), "--prefix", common.prefix,
                           "--seed", std::to_string(common.seed), "--threads",
                           std::to_string(common.threads)});
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  Common common;
  std::string grid = "15x15";
  double street_length = 500.0;
  int routes = 400;
  int route_length = 140;
  int trips_per_route = 12;
  double headway = 5.0;
  double period_T = 30.0;
  double speed = 30.0;
  std::string start = "06:00";
  std::string end = "19:00";
  std::string activity_csv;
  double activity_threshold = kDefaultActivityThreshold;
  std::string departures = "balance";
  std::string first_departure;
};

void RegisterGen(CLI::App& app, GenOptions& o) {
  CLI::App* cmd = app.add_subcommand("gen", "generate a synthetic scenario");
  AddCommon(cmd, o.common);
  cmd->add_option("--streets-grid", o.grid, "junction grid ROWSxCOLS")
      ->capture_default_str();
  cmd->add_option("--street-length", o.street_length, "street length in m")
      ->capture_default_str();
  cmd->add_option("--routes", o.routes, "number of bus routes")
      ->capture_default_str();
  cmd->add_option("--route-length", o.route_length, "streets per route")
      ->capture_default_str();
  cmd->add_option("--trips-per-route", o.trips_per_route, "trips per route")
      ->capture_default_str();
  cmd->add_option("--headway", o.headway, "minutes between trips of a route")
      ->capture_default_str();
  cmd->add_option("--T", o.period_T, "detection period T in minutes")
      ->capture_default_str();
  cmd->add_option("--speed", o.speed, "bus speed in km/h")
      ->capture_default_str();
  cmd->add_option("--start", o.start, "active period start (HH:MM)")
      ->capture_default_str();
  cmd->add_option("--end", o.end, "active period end (HH:MM)")
      ->capture_default_str();
  cmd->add_option("--activity-csv", o.activity_csv,
                  "parking-change series; overrides --start/--end")
      ->check(CLI::ExistingFile);
  cmd->add_option("--activity-threshold", o.activity_threshold,
                  "fraction of peak activity that counts as active")
      ->capture_default_str();
  cmd->add_option("--departures", o.departures,
                  "first-departure scheme: balance, stagger or uniform")
      ->capture_default_str();
  cmd->add_option("--first-departure", o.first_departure,
                  "first departure for --departures uniform (default: start)");
}

int RunGen(const GenOptions& o, RunManifest& manifest) {
  ScenarioParams p;
  const auto x = o.grid.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(o.grid);
    p.grid_rows = std::stoi(o.grid.substr(0, x));
    p.grid_cols = std::stoi(o.grid.substr(x + 1));
  } catch (const std::exception&) {
    throw UsageError(fmt::format("--streets-grid expects ROWSxCOLS, got '{}'",
                                 o.grid));
  }
  p.street_length_m = o.street_length;
  p.route_count = o.routes;
  p.route_length = o.route_length;
  p.trips_per_route = o.trips_per_route;
  p.headway = o.headway;
  p.speed_kmh = o.speed;
  p.period_T = o.period_T;
  p.seed = o.common.seed;
  p.departures = ParseDepartureMode(o.departures);
  if (!o.activity_csv.empty()) {
    const auto series = LoadChangeSeries(o.activity_csv);
    p.active = DetectActivePeriod(series, o.activity_threshold);
    manifest.AddInput(Absolute(o.activity_csv));
  } else {
    p.active = {ParseClock(o.start), ParseClock(o.end)};
  }
  p.first_departure = o.first_departure.empty()
                          ? p.active.start
                          : ParseClock(o.first_departure);
  // Fail early on a grid that cannot be discretized.
  BuildTimeGrid(p.active.start, p.active.end, p.period_T);

  const CityScenario scenario = GenerateScenario(p);
  const fs::path out = ResolveOutDir(o.common.out);
  const fs::path file = out / (o.common.prefix + "scenario.json");
  SaveScenario(scenario, file);
  manifest.AddOutput(file);

  manifest.SetParam("grid", o.grid);
  manifest.SetParam("street_length_m", p.street_length_m);
  manifest.SetParam("routes", p.route_count);
  manifest.SetParam("route_length", p.route_length);
  manifest.SetParam("trips_per_route", p.trips_per_route);
  manifest.SetParam("headway_min", p.headway);
  manifest.SetParam("T_min", p.period_T);
  manifest.SetParam("speed_kmh", p.speed_kmh);
  manifest.SetParam("active_start_min", p.active.start);
  manifest.SetParam("active_end_min", p.active.end);
  manifest.SetParam("departures", std::string(DepartureModeName(p.departures)));
  manifest.SetParam("first_departure_min", p.first_departure);

  // Replay uses the resolved period, not the activity file.
  std::vector<std::string> argv = {
      "gen", "--streets-grid", o.grid, "--street-length",
      FormatDouble(p.street_length_m), "--routes",
      std::to_string(p.route_count), "--route-length",
      std::to_string(p.route_length), "--trips-per-route",
      std::to_string(p.trips_per_route), "--headway", FormatDouble(p.headway),
      "--T", FormatDouble(p.period_T), "--speed", FormatDouble(p.speed_kmh),
      "--start", FormatClock(p.active.start), "--end",
      FormatClock(p.active.end), "--departures",
      std::string(DepartureModeName(p.departures)), "--first-departure",
      FormatClock(p.first_departure)};
  PushCommon(argv, out, o.common);
  manifest.SetArgv(std::move(argv));

  std::cout << fmt::format(
      "scenario: {} streets, {} routes, {} trips, active {}-{}, T = {} min "
      "-> {}\n",
      scenario.network().size(), scenario.routes().size(),
      scenario.trips().size(), FormatClock(p.active.start),
      FormatClock(p.active.end), p.period_T, file.string());
  return kExitOk;
}

// ---------------------------------------------------------------- build

struct BuildOptions {
  Common common;
  std::string scenario;
  bool coverage_csv = false;
};

void RegisterBuild(CLI::App& app, BuildOptions& o) {
  CLI::App* cmd = app.add_subcommand(
      "build", "discretize a scenario into a set-covering instance");
  AddCommon(cmd, o.common);
  cmd->add_option("scenario", o.scenario, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--coverage-csv", o.coverage_csv,
                "also export the (street, interval, trip) memberships");
}

int RunBuild(const BuildOptions& o, RunManifest& manifest) {
  const fs::path in = Absolute(o.scenario);
  manifest.AddInput(in);
  const CityScenario scenario = LoadScenario(in);
  const TimeGrid grid = BuildTimeGrid(scenario);
  const CoverageSet coverage = BuildCoverage(scenario, grid, o.common.threads);
  const fs::path out = ResolveOutDir(o.common.out);

  std::vector<std::string> argv = {"build", in.string()};
  if (o.coverage_csv) argv.push_back("--coverage-csv");
  PushCommon(argv, out, o.common);
  manifest.SetArgv(std::move(argv));
  manifest.SetParam("coverage_csv", o.coverage_csv);

  if (o.coverage_csv) {
    const fs::path file = out / (o.common.prefix + "coverage.csv");
    WriteCoverageCsv(coverage, file);
    manifest.AddOutput(file);
  }
  const ScpInstance instance =
      AssembleInstance(coverage, grid, scenario.trips());
  const fs::path matrix = out / (o.common.prefix + "instance.txt");
  WriteInstance(instance, matrix);
  WriteInstanceMeta(instance, MetaPathFor(matrix));
  manifest.AddOutput(matrix);
  manifest.AddOutput(MetaPathFor(matrix));

  const MatrixStats stats = ComputeMatrixStats(instance);
  nlohmann::ordered_json j;
  j["rows"] = stats.rows;
  j["cols"] = stats.cols;
  j["nnz"] = stats.nnz;
  j["density"] = stats.density;
  j["avg_nnz_per_row"] = stats.avg_nnz_per_row;
  j["intervals"] = grid.interval_count;
  j["interval_minutes"] = grid.interval_duration;
  j["pruned_trips"] = instance.pruned_trip_ids().size();
  const fs::path stats_file = out / (o.common.prefix + "stats.json");
  std::ofstream(stats_file) << j.dump(2) << "\n";
  manifest.AddOutput(stats_file);

  std::cout << fmt::format(
      "{} rows x {} columns, nnz {}, density {:.4f}%, {:.2f} nnz/row "
      "({} intervals of {} min, {} unused trips dropped)\n",
      stats.rows, stats.cols, stats.nnz, 100.0 * stats.density,
      stats.avg_nnz_per_row, grid.interval_count, grid.interval_duration,
      instance.pruned_trip_ids().size());
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  Common common;
  std::string instance;
  bool stcb = false;
  double time_limit = 60.0;
  double gap = 0.0;
  std::int64_t node_limit = 0;
  double log_every = 0.0;
  // STCB knobs.
  std::string cut_mode = "warmstart";
  int slack = -1;
  int clusters = 2;
  int batch_size = 50;
  int row_cap = 0;
  double pretrain_time_limit = 0.0;
  std::string cuts_file;
};

void RegisterSolve(CLI::App& app, SolveOptions& o) {
  CLI::App* cmd = app.add_subcommand("solve", "solve a set-covering instance");
  AddCommon(cmd, o.common);
  cmd->add_option("instance", o.instance,
                  "instance file (its .meta.csv sidecar is read if present)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--stcb", o.stcb,
                "self-trained cardinality branching instead of plain B&B");
  cmd->add_option("--time-limit", o.time_limit, "wall-clock limit in seconds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--gap", o.gap, "stop when incumbent - bound <= gap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--node-limit", o.node_limit, "node limit (0: none)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--log-every", o.log_every,
                  "progress line every N seconds on stderr (0: off)")
      ->capture_default_str();
  cmd->add_option("--cut-mode", o.cut_mode, "literal or warmstart")
      ->capture_default_str();
  cmd->add_option("--slack", o.slack,
                  "warmstart slack (default max(1, round(0.05 |S+|)))");
  cmd->add_option("--clusters", o.clusters, "spectral clusters k")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  cmd->add_option("--batch-size", o.batch_size, "rows added per round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--row-cap", o.row_cap,
                  "sub-problem row cap (0: min(m, max(10 n, m / 10)))")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--pretrain-time-limit", o.pretrain_time_limit,
                  "limit per pre-training sub-solve (0: time limit / 10)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cuts", o.cuts_file,
                  "solve with these cuts instead of self-training")
      ->check(CLI::ExistingFile);
}

int RunSolve(const SolveOptions& o, RunManifest& manifest) {
  const fs::path in = Absolute(o.instance);
  const fs::path meta = MetaPathFor(in);
  const bool has_meta = fs::exists(meta);
  manifest.AddInput(in);
  if (has_meta) manifest.AddInput(meta);
  const ScpInstance instance =
      ReadInstance(in, has_meta ? std::optional<fs::path>(meta) : std::nullopt);
  if (o.stcb && !o.cuts_file.empty()) {
    throw UsageError("--stcb and --cuts are mutually exclusive");
  }

  const fs::path out = ResolveOutDir(o.common.out);
  const std::string method = o.stcb ? "stcb" : "benchmark";
  const std::string prefix =
      o.common.prefix.empty() ? method + "_" : o.common.prefix;

  SolveConfig config;
  config.time_limit_s = o.time_limit;
  config.gap_tolerance = o.gap;
  if (o.node_limit > 0) config.node_limit = o.node_limit;
  config.seed = o.common.seed;
  config.log_every_s = o.log_every;

  const double pretrain_limit = o.pretrain_time_limit > 0.0
                                    ? o.pretrain_time_limit
                                    : o.time_limit / 10.0;
  std::vector<std::string> argv = {
      "solve", in.string(), "--time-limit", FormatDouble(o.time_limit),
      "--gap", FormatDouble(o.gap), "--node-limit",
      std::to_string(o.node_limit), "--log-every", FormatDouble(o.log_every)};
  manifest.SetParam("method", method);
  manifest.SetParam("time_limit_s", o.time_limit);
  manifest.SetParam("gap", o.gap);
  manifest.SetParam("node_limit", o.node_limit);
  manifest.SetParam("single_threaded_solver", true);

  SolveResult result;
  if (o.stcb) {
    StcbConfig stcb;
    stcb.mode = ParseCutMode(o.cut_mode);
    if (o.slack >= 0) stcb.slack = o.slack;
    stcb.k = o.clusters;
    stcb.seed = o.common.seed;
    stcb.rowgen.batch_size = o.batch_size;
    if (o.row_cap > 0) stcb.rowgen.row_cap = o.row_cap;
    stcb.rowgen.sub_solve_config.time_limit_s = pretrain_limit;
    stcb.rowgen.sub_solve_config.seed = o.common.seed;
    stcb.solve = config;
    argv.insert(argv.end(),
                {"--stcb", "--cut-mode", o.cut_mode, "--slack",
                 std::to_string(o.slack), "--clusters",
                 std::to_string(o.clusters), "--batch-size",
                 std::to_string(o.batch_size), "--row-cap",
                 std::to_string(o.row_cap), "--pretrain-time-limit",
                 FormatDouble(pretrain_limit)});
    manifest.SetParam("cut_mode", o.cut_mode);
    manifest.SetParam("slack", o.slack);
    manifest.SetParam("clusters", o.clusters);
    manifest.SetParam("batch_size", o.batch_size);
    manifest.SetParam("row_cap", o.row_cap > 0 ? o.row_cap
                                               : DefaultRowCap(instance));
    manifest.SetParam("pretrain_time_limit_s", pretrain_limit);

    StcbResult stcb_result = SolveStcb(instance, stcb);
    result = std::move(stcb_result.solve);
    const fs::path trace = out / (prefix + "pretrain.csv");
    WritePretrainTrace(stcb_result.pretrain, trace);
    manifest.AddOutput(trace);
    if (stcb_result.cuts) {
      const fs::path cuts = out / (prefix + "cuts.json");
      WriteCuts(*stcb_result.cuts, cuts);
      manifest.AddOutput(cuts);
    }
    if (stcb_result.partition) {
      const fs::path part = out / (prefix + "partition.csv");
      WritePartition(*stcb_result.partition, part);
      manifest.AddOutput(part);
    }
    manifest.SetParam("fallback", stcb_result.fallback);
    manifest.SetParam("fallback_reason", stcb_result.fallback_reason);
    manifest.SetParam("pretrain_degraded", stcb_result.pretrain.degraded);
    std::cerr << fmt::format(
        "pretrain: {} rounds, {} sub rows, x*_sub = {}{}, {:.3f} s; "
        "clustering {:.3f} s\n",
        stcb_result.pretrain.iterations, stcb_result.pretrain.sub_rows.size(),
        stcb_result.pretrain.x_star_sub.objective(),
        stcb_result.pretrain.degraded ? " (degraded)" : "",
        stcb_result.pretrain_s, stcb_result.cluster_s);
    if (stcb_result.fallback) {
      std::cerr << "fallback to the plain model: "
                << stcb_result.fallback_reason << "\n";
    }
  } else {
    std::vector<LinearCut> cuts;
    if (!o.cuts_file.empty()) {
      const fs::path cuts_path = Absolute(o.cuts_file);
      cuts = ReadCuts(cuts_path).AsVector();
      manifest.AddInput(cuts_path);
      argv.insert(argv.end(), {"--cuts", cuts_path.string()});
    }
    result = Solve(instance, cuts, config);
  }
  PushCommon(argv, out, {o.common.out, prefix, o.common.seed, o.common.threads});
  manifest.SetArgv(std::move(argv));

  const fs::path log = out / (prefix + "incumbents.csv");
  WriteIncumbentLog(result.log, log);
  manifest.AddOutput(log);
  const fs::path solution = out / (prefix + "solution.json");
  WriteSolution(MakeSolutionRecord(instance, result, method), solution);
  manifest.AddOutput(solution);
  manifest.SetParam("status", std::string(SolveStatusName(result.status())));

  std::cout << SummaryLine(result) << "\n";
  if (result.status() == SolveStatus::kInfeasible) return kExitInfeasible;
  if (!result.best) {
    std::cerr << "no incumbent within the limits\n";
    return kExitResourceLimit;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  Common common;
  std::string scenario;
  std::string solution;
  std::string random_sizes = "500,600,700,900,1100";
  int trials = 10;
  double window = 30.0;
  std::string benchmark_log;
  std::string stcb_log;
  std::string targets;
  bool no_plots = false;
};

void RegisterEvaluate(CLI::App& app, EvaluateOptions& o) {
  CLI::App* cmd = app.add_subcommand(
      "evaluate",
      "undetected-street report for a plan and/or a time-to-objective table");
  AddCommon(cmd, o.common);
  cmd->add_option("--scenario", o.scenario, "scenario JSON file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--solution", o.solution, "solution JSON file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--random-sizes", o.random_sizes,
                  "comma-separated random plan sizes")
      ->capture_default_str();
  cmd->add_option("--trials", o.trials, "random trials per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--window", o.window, "window width in minutes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--benchmark-log", o.benchmark_log,
                  "incumbent log of the plain solve")
      ->check(CLI::ExistingFile);
  cmd->add_option("--stcb-log", o.stcb_log, "incumbent log of the STCB solve")
      ->check(CLI::ExistingFile);
  cmd->add_option("--targets", o.targets,
                  "comma-separated target objectives (default: every "
                  "objective in the benchmark log)");
  cmd->add_flag("--no-plots", o.no_plots, "skip the SVG plots");
}

int RunEvaluate(const EvaluateOptions& o, RunManifest& manifest) {
  const bool plan_mode = !o.scenario.empty() || !o.solution.empty();
  const bool speed_mode = !o.benchmark_log.empty() || !o.stcb_log.empty();
  if (!plan_mode && !speed_mode) {
    throw UsageError(
        "nothing to evaluate: give --scenario and --solution, and/or "
        "--benchmark-log and --stcb-log");
  }
  if (plan_mode && (o.scenario.empty() || o.solution.empty())) {
    throw UsageError("--scenario and --solution go together");
  }
  if (speed_mode && (o.benchmark_log.empty() || o.stcb_log.empty())) {
    throw UsageError("--benchmark-log and --stcb-log go together");
  }
  const fs::path out = ResolveOutDir(o.common.out);
  std::vector<std::string> argv = {"evaluate"};
  const std::string& prefix = o.common.prefix;

  if (plan_mode) {
    const fs::path scenario_path = Absolute(o.scenario);
    const fs::path solution_path = Absolute(o.solution);
    manifest.AddInput(scenario_path);
    manifest.AddInput(solution_path);
    const CityScenario scenario = LoadScenario(scenario_path);
    const SolutionRecord record = ReadSolution(solution_path);
    if (!record.selection) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("{} holds no incumbent", solution_path.string()));
    }
    if (record.trip_ids.empty() && record.selection->objective() > 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("{} has no trip ids; solve an instance with its "
                              ".meta.csv sidecar", solution_path.string()));
    }
    AllocationPlan plan;
    plan.trip_ids = record.trip_ids;
    std::sort(plan.trip_ids.begin(), plan.trip_ids.end());
    plan.origin =
        record.method == "stcb" ? PlanOrigin::kStcb : PlanOrigin::kOptimal;
    std::vector<int> missing;
    for (int id : plan.trip_ids) {
      if (!scenario.HasTrip(id)) missing.push_back(id);
    }
    if (!missing.empty()) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("solution trips not in the scenario: {}",
                              JoinInts(missing)));
    }
    const std::vector<int> sizes = ParseIntList(o.random_sizes);
    const EvaluationReport report =
        ComparePlans(scenario, plan, sizes, o.trials, o.window,
                     o.common.seed, o.common.threads);

    const fs::path undetected = out / (prefix + "undetected.csv");
    const fs::path summary = out / (prefix + "summary.csv");
    WriteUndetectedCsv(report, undetected);
    WriteSummaryCsv(report, summary);
    manifest.AddOutput(undetected);
    manifest.AddOutput(summary);
    if (!o.no_plots) {
      const fs::path svg = out / (prefix + "undetected.svg");
      WriteUndetectedSvg(report, svg);
      manifest.AddOutput(svg);
    }
    std::cout << fmt::format("{:<14} {:>6} {:>18}\n", "plan", "size",
                             "mean undetected");
    std::cout << fmt::format("{:<14} {:>6} {:>18.3f}\n", report.optimal.label,
                             report.optimal.plan_size,
                             report.optimal.mean_undetected);
    for (const RandomSizeSummary& s : report.random_sizes) {
      std::cout << fmt::format("{:<14} {:>6} {:>18.3f}\n",
                               fmt::format("random-{}", s.size), s.size,
                               s.mean_undetected);
    }
    argv.insert(argv.end(),
                {"--scenario", scenario_path.string(), "--solution",
                 solution_path.string(), "--random-sizes", JoinInts(sizes),
                 "--trials", std::to_string(o.trials), "--window",
                 FormatDouble(o.window)});
    manifest.SetParam("random_sizes", sizes);
    manifest.SetParam("trials", o.trials);
    manifest.SetParam("window_min", o.window);
  }

  if (speed_mode) {
    const fs::path bench_path = Absolute(o.benchmark_log);
    const fs::path stcb_path = Absolute(o.stcb_log);
    manifest.AddInput(bench_path);
    manifest.AddInput(stcb_path);
    const IncumbentLog bench = ReadIncumbentLog(bench_path);
    const IncumbentLog stcb = ReadIncumbentLog(stcb_path);
    if (bench.entries.empty() || stcb.entries.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "incumbent logs must be non-empty");
    }
    std::vector<int> targets = ParseIntList(o.targets);
    if (targets.empty()) {
      for (const IncumbentEntry& e : bench.entries) {
        targets.push_back(e.objective);
      }
    }
    const std::vector<SpeedupRow> rows = SpeedupTable(bench, stcb, targets);
    const fs::path speedup = out / (prefix + "speedup.csv");
    WriteSpeedupCsv(rows, speedup);
    manifest.AddOutput(speedup);
    if (!o.no_plots) {
      const fs::path svg = out / (prefix + "incumbents.svg");
      WriteIncumbentSvg(bench, stcb, svg);
      manifest.AddOutput(svg);
    }
    std::cout << fmt::format("{:>9} {:>12} {:>12} {:>10}\n", "objective",
                             "benchmark_s", "stcb_s", "percent");
    for (const SpeedupRow& r : rows) {
      std::cout << fmt::format("{:>9} {:>12} {:>12} {:>10}\n", r.objective,
                               FormatSeconds(r.benchmark_s),
                               FormatSeconds(r.stcb_s),
                               FormatPercent(r.percent));
    }
    argv.insert(argv.end(), {"--benchmark-log", bench_path.string(),
                             "--stcb-log", stcb_path.string(), "--targets",
                             JoinInts(targets)});
    manifest.SetParam("targets", targets);
  }
  if (o.no_plots) argv.push_back("--no-plots");
  PushCommon(argv, out, o.common);
  manifest.SetArgv(std::move(argv));
  return kExitOk;
}

fs::path ManifestPath(const Common& common, const std::string& command,
                      const std::string& prefix_override = "") {
  const std::string prefix =
      prefix_override.empty() ? common.prefix : prefix_override;
  return ResolveOutDir(common.out) / (prefix + command + ".manifest.json");
}

// Runs `body`, then writes the manifest whatever the outcome, so failed
// runs leave a record too. Exceptions are translated to exit codes.
int Guarded(const std::string& command, const fs::path& manifest_path,
            const std::function<int(RunManifest&)>& body,
            const Common& common) {
  RunManifest manifest(command);
  manifest.SetSeed(common.seed);
  manifest.SetParam("threads", common.threads);
  int code = kExitOk;
  try {
    code = body(manifest);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitBadInput;
  } catch (const Error& e) {
    std::cerr << fmt::format("error ({}): {}\n", ErrorKindName(e.kind()),
                             e.what());
    code = ExitCodeFor(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    code = kExitResourceLimit;
  }
  manifest.SetExitCode(code);
  try {
    manifest.Write(manifest_path);
  } catch (const Error& e) {
    std::cerr << "warning: " << e.what() << "\n";
  }
  return code;
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  CLI::App app{"parkcover: probing-vehicle allocation for parking sensing",
               "parkcover"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PARKCOVER_VERSION);

  GenOptions gen;
  BuildOptions build;
  SolveOptions solve;
  EvaluateOptions evaluate;
  std::string replay_manifest;
  RegisterGen(app, gen);
  RegisterBuild(app, build);
  RegisterSolve(app, solve);
  RegisterEvaluate(app, evaluate);
  CLI::App* replay = app.add_subcommand(
      "replay", "rerun the command recorded in a manifest");
  replay->add_option("manifest", replay_manifest, "manifest JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (app.got_subcommand("gen")) {
      return Guarded("gen", ManifestPath(gen.common, "gen"),
                     [&](RunManifest& m) { return RunGen(gen, m); },
                     gen.common);
    }
    if (app.got_subcommand("build")) {
      return Guarded("build", ManifestPath(build.common, "build"),
                     [&](RunManifest& m) { return RunBuild(build, m); },
                     build.common);
    }
    if (app.got_subcommand("solve")) {
      const std::string prefix =
          solve.common.prefix.empty()
              ? std::string(solve.stcb ? "stcb_" : "benchmark_")
              : solve.common.prefix;
      return Guarded("solve", ManifestPath(solve.common, "solve", prefix),
                     [&](RunManifest& m) { return RunSolve(solve, m); },
                     solve.common);
    }
    if (app.got_subcommand("evaluate")) {
      return Guarded("evaluate", ManifestPath(evaluate.common, "evaluate"),
                     [&](RunManifest& m) { return RunEvaluate(evaluate, m); },
                     evaluate.common);
    }
    const std::vector<std::string> replayed = ReplayArguments(replay_manifest);
    if (replayed.empty() || replayed.front() == "replay") {
      std::cerr << "error: manifest has no replayable command\n";
      return kExitBadInput;
    }
    return RunCli(replayed);
  } catch (const Error& e) {
    // Only reachable before a manifest exists (output directory, replay).
    std::cerr << fmt::format("error ({}): {}\n", ErrorKindName(e.kind()),
                             e.what());
    return ExitCodeFor(e.kind());
  }
}

}  // namespace parkcover::cli
