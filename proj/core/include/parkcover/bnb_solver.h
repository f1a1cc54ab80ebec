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

#ifndef PARKCOVER_BNB_SOLVER_H_
#define PARKCOVER_BNB_SOLVER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parkcover/scp_instance.h"

namespace parkcover {

enum class CutSense { kAtLeast, kAtMost };

// sum_{j in support} x_j  (>= | <=)  rhs.
struct LinearCut {
  std::vector<int> support;  // sorted, unique column indices
  CutSense sense = CutSense::kAtLeast;
  int rhs = 0;

  // Throws kInvalidArgument unless support is non-empty and in range and
  // 0 <= rhs <= |support|.
  void Validate(int col_count) const;
  bool SatisfiedBy(std::span<const char> chosen) const;

  friend bool operator==(const LinearCut&, const LinearCut&) = default;
};

enum class SolveStatus { kOptimal, kFeasibleLimit, kInfeasible, kUnknown };

std::string_view SolveStatusName(SolveStatus status);

struct IncumbentEntry {
  double elapsed_s = 0.0;
  int objective = 0;
};

struct IncumbentLog {
  std::vector<IncumbentEntry> entries;  // objectives strictly decreasing
  SolveStatus final_status = SolveStatus::kUnknown;

  // First time the objective is <= target, if ever.
  std::optional<double> TimeToReach(int target) const;
};

// Called on every improving incumbent with the full selection.
using IncumbentCallback =
    std::function<void(const Selection& selection, double elapsed_s)>;
// Polled once per node; returning true stops the search.
using StopCheck =
    std::function<bool(double elapsed_s, std::optional<int> incumbent)>;

struct SolveConfig {
  double time_limit_s = 60.0;
  double gap_tolerance = 0.0;
  std::optional<std::int64_t> node_limit;
  std::uint64_t seed = 0;
  // Progress lines on stderr every `log_every_s` seconds; <= 0 disables.
  double log_every_s = 0.0;
  // Subgradient iterations at the root and at every other node.
  int root_iterations = 400;
  int node_iterations = 40;

  IncumbentCallback on_incumbent;
  StopCheck should_stop;
};

struct SolveResult {
  std::optional<Selection> best;
  IncumbentLog log;
  double lower_bound = 0.0;
  std::int64_t nodes_explored = 0;
  double elapsed_s = 0.0;
  bool stopped_by_callback = false;

  SolveStatus status() const { return log.final_status; }
};

// Exact branch and bound for uni-cost set covering with the cuts as hard
// constraints. Anytime: every improving incumbent is logged.
//
// Bounds come from a Lagrangian relaxation of the covering rows and the cuts
// (subgradient optimisation), which is dominated by the LP relaxation and
// valid for every multiplier. Depth-first dives (x_j = 1 branch first) are
// started from the open node with the best bound.
SolveResult Solve(const ScpInstance& instance, std::span<const LinearCut> cuts,
                  const SolveConfig& config);

// A valid lower bound on min 1'x over covers that also satisfy `cuts` and
// the fixings. +infinity when even the linear relaxation is infeasible.
double LpLowerBound(const ScpInstance& instance,
                    std::span<const LinearCut> cuts,
                    std::span<const int> fixed_zero,
                    std::span<const int> fixed_one);

struct Reduction {
  ScpInstance reduced;             // same columns, surviving rows only
  std::vector<int> kept_rows;      // original index of each reduced row
  std::vector<int> forced_one;     // sorted
  std::vector<int> forced_zero;    // sorted
  bool infeasible = false;
  std::string infeasible_reason;
};

// Classical preprocessing to a fixpoint: cut propagation, removal of
// zero-fixed columns, singleton rows forcing their column, rows covered by
// forced columns dropped, and dominated (superset) rows dropped.
Reduction Reduce(const ScpInstance& instance, std::span<const LinearCut> cuts);

// CSV "elapsed_s,objective".
void WriteIncumbentLog(const IncumbentLog& log,
                       const std::filesystem::path& path);
IncumbentLog ReadIncumbentLog(const std::filesystem::path& path);

// One machine-parseable line:
// status=<s> objective=<k|none> lower_bound=<x> nodes=<k> elapsed_s=<x>
std::string SummaryLine(const SolveResult& result);

// Inverse of SolveStatusName. Throws kParse on unknown names.
SolveStatus ParseSolveStatus(std::string_view name);

// What a solve leaves on disk: the chosen columns plus the trips they stand
// for, so a plan can be evaluated without the instance.
struct SolutionRecord {
  std::string method;  // "benchmark" or "stcb"
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Selection> selection;
  std::vector<int> trip_ids;  // empty when the instance has no column meta
  double lower_bound = 0.0;
  std::int64_t nodes_explored = 0;
  double elapsed_s = 0.0;
};

SolutionRecord MakeSolutionRecord(const ScpInstance& instance,
                                  const SolveResult& result,
                                  std::string method);

// JSON keys: method, status, objective (null without incumbent), columns,
// trip_ids, lower_bound, nodes, elapsed_s.
void WriteSolution(const SolutionRecord& record,
                   const std::filesystem::path& path);
SolutionRecord ReadSolution(const std::filesystem::path& path);

}  // namespace parkcover

#endif  // PARKCOVER_BNB_SOLVER_H_
