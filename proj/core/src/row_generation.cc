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

#include "parkcover/row_generation.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "parkcover/error.h"

namespace parkcover {

int DefaultRowCap(const ScpInstance& instance) {
  const int m = instance.row_count();
  int n_eff = 0;
  for (int c = 0; c < instance.col_count(); ++c) {
    if (instance.ColumnSize(c) > 0) ++n_eff;
  }
  const long long tenfold = 10LL * n_eff;
  const long long tenth = m / 10;
  return static_cast<int>(std::min<long long>(m, std::max(tenfold, tenth)));
}

std::vector<ViolatedRow> ViolatedRows(const ScpInstance& instance,
                                      const Selection& selection) {
  std::vector<char> chosen(instance.col_count(), 0);
  for (int c : selection.chosen) {
    if (c >= 0 && c < instance.col_count()) chosen[c] = 1;
  }
  std::vector<ViolatedRow> out;
  for (int r = 0; r < instance.row_count(); ++r) {
    bool covered = false;
    for (int c : instance.Row(r)) {
      if (chosen[c]) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back({r, instance.RowSize(r)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ViolatedRow& a, const ViolatedRow& b) {
                     return a.nnz < b.nnz;
                   });
  return out;
}

PretrainResult Pretrain(const ScpInstance& instance, const RowGenConfig& config,
                        const SubSolver& solver) {
  if (config.batch_size < 1) {
    throw Error(ErrorKind::kInvalidArgument, "batch size must be >= 1");
  }
  const int tau = config.row_cap.value_or(DefaultRowCap(instance));
  if (tau < 0 || tau > instance.row_count()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("row cap {} outside [0, {}]", tau,
                            instance.row_count()));
  }
  if (!instance.EmptyRows().empty()) {
    throw Error(ErrorKind::kInfeasible, "instance has an empty row");
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  PretrainResult result;
  std::vector<int> sub_rows;
  while (true) {
    const ScpInstance sub = RestrictRows(instance, sub_rows);
    SolveResult solved = solver ? solver(sub, config.sub_solve_config)
                                : Solve(sub, {}, config.sub_solve_config);
    bool stop = false;
    if (solved.status() != SolveStatus::kOptimal) {
      result.degraded = true;
      stop = true;
      std::cerr << fmt::format(
          "warning: pretrain sub-solve at {} rows ended with status {}\n",
          sub_rows.size(), SolveStatusName(solved.status()));
    }
    result.x_star_sub = solved.best ? *solved.best : GreedyCover(sub);

    const auto violated = ViolatedRows(instance, result.x_star_sub);
    result.violated_remaining = static_cast<int>(violated.size());
    result.trace.push_back({result.iterations,
                            static_cast<int>(sub_rows.size()),
                            result.x_star_sub.objective(),
                            result.violated_remaining, elapsed()});

    if (stop || static_cast<int>(sub_rows.size()) >= tau || violated.empty() ||
        result.iterations >= config.max_iterations) {
      break;
    }
    const size_t take =
        std::min<size_t>(violated.size(), config.batch_size);
    for (size_t i = 0; i < take; ++i) sub_rows.push_back(violated[i].row);
    std::sort(sub_rows.begin(), sub_rows.end());
    ++result.iterations;
  }
  result.sub_rows = std::move(sub_rows);
  result.elapsed_s = elapsed();
  return result;
}

void WritePretrainTrace(const PretrainResult& result,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write pretrain trace {}", path.string()));
  }
  out << "iteration,sub_rows,sub_objective,violated_remaining,elapsed_s\n";
  for (const auto& it : result.trace) {
    out << fmt::format("{},{},{},{},{:.6f}\n", it.iteration, it.sub_rows,
                       it.sub_objective, it.violated_remaining, it.elapsed_s);
  }
}

}  // namespace parkcover
