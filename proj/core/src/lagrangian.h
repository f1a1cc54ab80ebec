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

#ifndef PARKCOVER_SRC_LAGRANGIAN_H_
#define PARKCOVER_SRC_LAGRANGIAN_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "parkcover/bnb_solver.h"
#include "parkcover/scp_instance.h"

namespace parkcover::internal {

enum class ColState : std::int8_t { kFree = 0, kOne = 1, kZero = 2 };

struct Fixing {
  int col = 0;
  bool one = false;
};

struct SubgradientParams {
  int max_iterations = 100;
  // Stop as soon as the bound on the free part exceeds this value.
  double stop_above = std::numeric_limits<double>::infinity();
  // Polyak target for the free part; adaptive when unset.
  std::optional<double> target;
  std::function<bool()> out_of_time;
};

// Node subproblem of uni-cost set covering with side cuts:
//   min sum x  s.t. rows covered, cuts hold, x_j fixed for some j.
//
// Prepare() applies fixings and propagates them (cut residuals, singleton
// rows). Optimize() maximises the Lagrangian dual of the remaining free part
//   L(u, mu) = sum_r u_r + sum_k mu_k c_k + sum_j min(0, rc_j)
// where rc_j = 1 - sum_{r ∋ j} u_r -/+ sum_{k ∋ j} mu_k s_k for >=/<= cuts
// and s_k = 1/|support_k| (c_k above is likewise scaled).
// Any u, mu >= 0 gives a valid bound; the best found is kept.
class CoverEngine {
 public:
  CoverEngine(const ScpInstance& instance, std::span<const LinearCut> cuts);

  // Returns false if the fixings are contradictory or propagation proves the
  // node infeasible.
  bool Prepare(std::span<const Fixing> fixings);

  // --- valid after a successful Prepare() ---
  int ones() const { return ones_; }
  std::span<const int> active_rows() const { return active_rows_; }
  std::span<const int> free_cols() const { return free_cols_; }
  // Columns fixed by propagation during the last Prepare().
  std::span<const Fixing> propagated() const { return propagated_; }
  ColState state(int col) const { return state_[col]; }
  // Active rows covered by a free column.
  int active_cover(int col) const { return active_cover_[col]; }
  // True when no row is uncovered and every cut holds for the fixed ones.
  bool Solved() const;
  std::vector<int> OneColumns() const;
  // Free columns in a >= cut that still needs more ones; lowest index first.
  std::vector<int> DeficitCutColumns() const;

  // Subgradient ascent; returns the best free-part bound (>= 0).
  double Optimize(const SubgradientParams& params);

  // --- valid after Optimize() ---
  double reduced_cost(int col) const { return best_rc_[col]; }
  double primal_average(int col) const { return x_avg_[col]; }
  // Best cover found among the Lagrangian solutions, as a column list.
  const std::optional<std::vector<int>>& lagrangian_cover() const {
    return lagrangian_cover_;
  }

  // Greedy completion guided by the best reduced costs, followed by
  // redundant-column removal. Respects fixed zeros and every cut.
  std::optional<std::vector<int>> Heuristic() const;

  // Beasley's dual-feasible start u_r = min_{j in r} 1 / |active rows of j|.
  void ResetMultipliers();

 private:
  struct CutStatus {
    int ones = 0;
    int free = 0;
    bool active = false;
    // >=: rhs - ones (ones still needed); <=: rhs - ones (budget left).
    int residual = 0;
  };

  void SetOne(int col);
  void SetZero(int col);
  bool Propagate();
  void RefreshCutStatus();
  bool CutsHold(std::span<const char> chosen) const;
  // Greedy cover; with `defer_budgeted`, columns of <= cuts are used only
  // for rows nothing else covers.
  std::optional<std::vector<int>> Greedy(bool defer_budgeted) const;

  const ScpInstance& instance_;
  std::vector<LinearCut> cuts_;
  std::vector<std::vector<int>> col_cuts_;

  std::vector<ColState> state_;
  std::vector<int> cover_;  // fixed ones covering each row
  int ones_ = 0;
  std::vector<Fixing> propagated_;
  std::vector<CutStatus> cut_status_;
  std::vector<int> active_rows_;
  std::vector<char> row_active_;
  std::vector<int> free_cols_;
  std::vector<int> active_cover_;

  std::vector<double> u_;
  std::vector<double> mu_;
  // Each cut is dualised as (1/|support|) times itself, keeping its
  // subgradient component on the scale of a covering row.
  std::vector<double> cut_scale_;
  bool multipliers_ready_ = false;

  std::vector<double> rc_;
  std::vector<double> best_rc_;
  std::vector<double> x_avg_;
  std::vector<char> x_;
  std::vector<int> row_hits_;
  std::optional<std::vector<int>> lagrangian_cover_;
};

}  // namespace parkcover::internal

#endif  // PARKCOVER_SRC_LAGRANGIAN_H_
