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

#include "parkcover/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "parkcover/error.h"
#include "parkcover/trajectory.h"
#include "random.h"

namespace parkcover {

std::string AllocationPlan::Label() const {
  switch (origin) {
    case PlanOrigin::kOptimal:
      return "optimal";
    case PlanOrigin::kStcb:
      return "stcb";
    case PlanOrigin::kGreedy:
      return "greedy";
    case PlanOrigin::kRandom:
      return fmt::format("random-{}", random_size);
  }
  return "plan";
}

AllocationPlan PlanFromSelection(const ScpInstance& instance,
                                 const Selection& selection,
                                 PlanOrigin origin) {
  if (!instance.has_col_meta()) {
    throw Error(ErrorKind::kInvalidArgument,
                "instance has no column-to-trip metadata");
  }
  AllocationPlan plan;
  plan.origin = origin;
  for (int c : selection.chosen) {
    if (c < 0 || c >= instance.col_count()) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("selected column {} out of range", c));
    }
    plan.trip_ids.push_back(instance.col_trip_ids()[c]);
  }
  std::sort(plan.trip_ids.begin(), plan.trip_ids.end());
  return plan;
}

std::vector<int> UndetectedStreets(const CityScenario& scenario,
                                   const AllocationPlan& plan, Minutes window) {
  const Minutes length = scenario.active().end - scenario.active().start;
  const double ratio = length / window;
  if (!(window > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 ||
      std::round(ratio) < 1.0) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("window {} min does not divide the {} min active "
                            "period",
                            window, length));
  }
  // Windows of width w are the half-intervals of a grid with T = 2w.
  const TimeGrid windows = BuildTimeGrid(scenario.active().start,
                                         scenario.active().end, 2.0 * window);
  const int q = windows.interval_count;
  const auto& network = scenario.network();
  const size_t streets = network.size();
  std::vector<char> detected(streets * q, 0);
  for (int trip_id : plan.trip_ids) {
    if (!scenario.HasTrip(trip_id)) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("plan trip {} not in the scenario", trip_id));
    }
    for (const auto& span :
         TripTraversalSpans(scenario.TripById(trip_id), scenario)) {
      const auto [first, last] =
          OverlappedIntervals(windows, span.enter, span.exit);
      const size_t s = network.IndexOf(span.street_id);
      for (int w = first; w < last; ++w) detected[s * q + w] = 1;
    }
  }
  std::vector<int> counts(q, static_cast<int>(streets));
  for (size_t s = 0; s < streets; ++s) {
    for (int w = 0; w < q; ++w) counts[w] -= detected[s * q + w];
  }
  return counts;
}

AllocationPlan RandomPlan(std::span<const BusTrip> trips, int size,
                          std::uint64_t seed) {
  if (size < 0 || size > static_cast<int>(trips.size())) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("random plan size {} outside [0, {}]", size,
                            trips.size()));
  }
  std::vector<int> ids;
  ids.reserve(trips.size());
  for (const auto& t : trips) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  // Partial Fisher-Yates over the sorted ids.
  internal::Rng rng(seed);
  for (int i = 0; i < size; ++i) {
    const size_t j =
        i + internal::UniformIndex(rng, ids.size() - static_cast<size_t>(i));
    std::swap(ids[i], ids[j]);
  }
  AllocationPlan plan;
  plan.origin = PlanOrigin::kRandom;
  plan.random_size = size;
  plan.random_seed = seed;
  plan.trip_ids.assign(ids.begin(), ids.begin() + size);
  std::sort(plan.trip_ids.begin(), plan.trip_ids.end());
  return plan;
}

namespace {

double Mean(const std::vector<int>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

PlanEvaluation Evaluate(const CityScenario& scenario, const AllocationPlan& plan,
                        Minutes window, int trial) {
  PlanEvaluation e;
  e.label = plan.Label();
  e.plan_size = plan.size();
  e.trial = trial;
  e.undetected = UndetectedStreets(scenario, plan, window);
  e.mean_undetected = Mean(e.undetected);
  return e;
}

}  // namespace

EvaluationReport ComparePlans(const CityScenario& scenario,
                              const AllocationPlan& optimal_plan,
                              std::span<const int> random_sizes,
                              int trials_per_size, Minutes window,
                              std::uint64_t seed, int threads) {
  if (trials_per_size < 1) {
    throw Error(ErrorKind::kInvalidArgument, "trials per size must be >= 1");
  }
  for (int size : random_sizes) {
    if (size < 0 || size > static_cast<int>(scenario.trips().size())) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("random plan size {} outside [0, {}]", size,
                              scenario.trips().size()));
    }
  }
  EvaluationReport report;
  report.window = window;
  report.street_count = static_cast<int>(scenario.network().size());
  report.optimal = Evaluate(scenario, optimal_plan, window, 0);

  const size_t jobs = random_sizes.size() * trials_per_size;
  report.random_trials.resize(jobs);
  auto run = [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      const int size = random_sizes[j / trials_per_size];
      const int trial = static_cast<int>(j % trials_per_size);
      const AllocationPlan plan =
          RandomPlan(scenario.trips(), size, seed + static_cast<std::uint64_t>(trial));
      report.random_trials[j] = Evaluate(scenario, plan, window, trial);
    }
  };
  const size_t workers =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1,
                         std::max<size_t>(jobs, 1));
  if (workers == 1) {
    run(0, jobs);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (jobs + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
      const size_t begin = w * chunk;
      const size_t end = std::min(jobs, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  for (size_t s = 0; s < random_sizes.size(); ++s) {
    RandomSizeSummary summary;
    summary.size = random_sizes[s];
    for (int t = 0; t < trials_per_size; ++t) {
      summary.trial_means.push_back(
          report.random_trials[s * trials_per_size + t].mean_undetected);
    }
    summary.mean_undetected =
        std::accumulate(summary.trial_means.begin(), summary.trial_means.end(),
                        0.0) /
        trials_per_size;
    report.random_sizes.push_back(std::move(summary));
  }
  return report;
}

double SpeedupPercent(double benchmark_s, double stcb_s) {
  return (benchmark_s / stcb_s - 1.0) * 100.0;
}

std::vector<SpeedupRow> SpeedupTable(const IncumbentLog& benchmark,
                                     const IncumbentLog& stcb,
                                     std::span<const int> targets) {
  if (benchmark.entries.empty() || stcb.entries.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "speedup table needs two non-empty incumbent logs");
  }
  std::vector<SpeedupRow> rows;
  for (int target : targets) {
    SpeedupRow row;
    row.objective = target;
    row.benchmark_s = benchmark.TimeToReach(target);
    row.stcb_s = stcb.TimeToReach(target);
    if (row.benchmark_s && row.stcb_s && *row.stcb_s > 0.0) {
      row.percent = SpeedupPercent(*row.benchmark_s, *row.stcb_s);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string FormatSeconds(const std::optional<double>& seconds) {
  return seconds ? fmt::format("{:.3f}", *seconds) : std::string(">limit");
}

std::string FormatPercent(const std::optional<double>& percent) {
  return percent ? fmt::format("{:.2f}", *percent) : std::string("/");
}

}  // namespace parkcover
