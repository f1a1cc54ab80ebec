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

#ifndef PARKCOVER_ROW_GENERATION_H_
#define PARKCOVER_ROW_GENERATION_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "parkcover/bnb_solver.h"
#include "parkcover/scp_instance.h"

namespace parkcover {

struct RowGenConfig {
  int batch_size = 50;          // rows added per round, >= 1
  std::optional<int> row_cap;   // tau; DefaultRowCap() when unset
  int max_iterations = 1000;    // row-addition rounds
  SolveConfig sub_solve_config;
};

// min(m, max(10 n_eff, m / 10)) with n_eff the columns that cover any row.
int DefaultRowCap(const ScpInstance& instance);

struct PretrainIteration {
  int iteration = 0;
  int sub_rows = 0;
  int sub_objective = 0;
  int violated_remaining = 0;
  double elapsed_s = 0.0;
};

struct PretrainResult {
  Selection x_star_sub;       // over all n columns
  std::vector<int> sub_rows;  // sorted original row indices
  int iterations = 0;         // row-addition rounds performed
  int violated_remaining = 0;
  // A sub-solve stopped before proving optimality; x_star_sub is then its
  // best incumbent and the lower-bound property is no longer guaranteed.
  bool degraded = false;
  std::vector<PretrainIteration> trace;
  double elapsed_s = 0.0;
};

struct ViolatedRow {
  int row = 0;
  int nnz = 0;

  friend bool operator==(const ViolatedRow&, const ViolatedRow&) = default;
};

// Rows the selection leaves uncovered, by ascending nnz then index.
std::vector<ViolatedRow> ViolatedRows(const ScpInstance& instance,
                                      const Selection& selection);

using SubSolver =
    std::function<SolveResult(const ScpInstance& sub, const SolveConfig&)>;

// Row generation from the empty row set: solve the sub-problem, stop once
// tau rows are in or nothing is violated or the round budget is spent,
// otherwise add the batch_size sparsest violated rows and repeat.
// `solver` defaults to Solve() without cuts.
PretrainResult Pretrain(const ScpInstance& instance, const RowGenConfig& config,
                        const SubSolver& solver = {});

// CSV: iteration,sub_rows,sub_objective,violated_remaining,elapsed_s.
void WritePretrainTrace(const PretrainResult& result,
                        const std::filesystem::path& path);

}  // namespace parkcover

#endif  // PARKCOVER_ROW_GENERATION_H_
