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

#ifndef PARKCOVER_EVALUATION_H_
#define PARKCOVER_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parkcover/bnb_solver.h"
#include "parkcover/city_model.h"
#include "parkcover/scp_instance.h"

namespace parkcover {

enum class PlanOrigin { kOptimal, kStcb, kRandom, kGreedy };

struct AllocationPlan {
  std::vector<int> trip_ids;  // sorted, unique
  PlanOrigin origin = PlanOrigin::kOptimal;
  int random_size = 0;        // kRandom only
  std::uint64_t random_seed = 0;

  int size() const { return static_cast<int>(trip_ids.size()); }
  // "optimal", "stcb", "greedy" or "random-<size>".
  std::string Label() const;
};

// Trip ids of the chosen columns; needs column metadata.
AllocationPlan PlanFromSelection(const ScpInstance& instance,
                                 const Selection& selection, PlanOrigin origin);

// The active period is cut into consecutive windows of width `window`. A
// street is undetected in a window when no plan trip traverses it during a
// stretch of positive length inside the window. Throws kInvalidArgument when
// the window does not divide the period or a trip id is unknown.
std::vector<int> UndetectedStreets(const CityScenario& scenario,
                                   const AllocationPlan& plan, Minutes window);

// Uniform sample of `size` distinct trip ids; deterministic per seed.
AllocationPlan RandomPlan(std::span<const BusTrip> trips, int size,
                          std::uint64_t seed);

struct PlanEvaluation {
  std::string label;
  int plan_size = 0;
  int trial = 0;  // 0 for deterministic plans
  std::vector<int> undetected;
  double mean_undetected = 0.0;
};

struct RandomSizeSummary {
  int size = 0;
  std::vector<double> trial_means;  // per trial, mean over windows
  double mean_undetected = 0.0;     // over trials and windows
};

struct EvaluationReport {
  Minutes window = 0.0;
  int street_count = 0;
  PlanEvaluation optimal;
  std::vector<PlanEvaluation> random_trials;
  std::vector<RandomSizeSummary> random_sizes;
};

// Trial i of each size uses seed + i; trials run on up to `threads` threads
// with identical results.
EvaluationReport ComparePlans(const CityScenario& scenario,
                              const AllocationPlan& optimal_plan,
                              std::span<const int> random_sizes,
                              int trials_per_size, Minutes window,
                              std::uint64_t seed, int threads = 1);

struct SpeedupRow {
  int objective = 0;
  std::optional<double> benchmark_s;  // nullopt: not reached
  std::optional<double> stcb_s;
  // (benchmark / stcb - 1) * 100 when both are reached and stcb > 0.
  std::optional<double> percent;
};

double SpeedupPercent(double benchmark_s, double stcb_s);

// Throws kInvalidArgument if either log is empty.
std::vector<SpeedupRow> SpeedupTable(const IncumbentLog& benchmark,
                                     const IncumbentLog& stcb,
                                     std::span<const int> targets);

// Unreached times print as ">limit"; percent with two decimals, "/" when
// undefined.
std::string FormatSeconds(const std::optional<double>& seconds);
std::string FormatPercent(const std::optional<double>& percent);

// CSV plan,window_index,undetected (every evaluated plan and trial).
void WriteUndetectedCsv(const EvaluationReport& report,
                        const std::filesystem::path& path);
// CSV plan,plan_size,mean_undetected (optimal plus one line per size).
void WriteSummaryCsv(const EvaluationReport& report,
                     const std::filesystem::path& path);
// CSV objective,benchmark_s,stcb_s,percent.
void WriteSpeedupCsv(std::span<const SpeedupRow> rows,
                     const std::filesystem::path& path);
// Bar chart of mean undetected streets per window for each plan.
void WriteUndetectedSvg(const EvaluationReport& report,
                        const std::filesystem::path& path);
// Objective against time as two step curves.
void WriteIncumbentSvg(const IncumbentLog& benchmark, const IncumbentLog& stcb,
                       const std::filesystem::path& path);

}  // namespace parkcover

#endif  // PARKCOVER_EVALUATION_H_
