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

#include <algorithm>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "parkcover/bnb_solver.h"
#include "parkcover/error.h"

namespace parkcover {
namespace {

enum class State : char { kFree, kOne, kZero };

// Returns false and sets `reason` on a proven contradiction.
bool PropagateCuts(std::span<const LinearCut> cuts, std::vector<State>& state,
                   bool& changed, std::string& reason) {
  for (size_t k = 0; k < cuts.size(); ++k) {
    const LinearCut& cut = cuts[k];
    int ones = 0, free = 0;
    for (int c : cut.support) {
      if (state[c] == State::kOne) ++ones;
      if (state[c] == State::kFree) ++free;
    }
    const int residual = cut.rhs - ones;
    if (cut.sense == CutSense::kAtLeast) {
      if (residual > free) {
        reason = fmt::format("cut {} needs {} more ones but only {} free",
                             k, residual, free);
        return false;
      }
      if (residual > 0 && residual == free) {
        for (int c : cut.support) {
          if (state[c] == State::kFree) state[c] = State::kOne;
        }
        changed = true;
      }
    } else {
      if (residual < 0) {
        reason = fmt::format("cut {} exceeded by {}", k, -residual);
        return false;
      }
      if (residual == 0 && free > 0) {
        for (int c : cut.support) {
          if (state[c] == State::kFree) state[c] = State::kZero;
        }
        changed = true;
      }
    }
  }
  return true;
}

}  // namespace

Reduction Reduce(const ScpInstance& instance, std::span<const LinearCut> cuts) {
  const int n = instance.col_count();
  const int m = instance.row_count();
  for (const auto& cut : cuts) cut.Validate(n);

  Reduction out;
  std::vector<State> state(n, State::kFree);
  std::vector<char> alive(m, 1);
  std::vector<std::vector<int>> rows(m);
  for (int r = 0; r < m; ++r) {
    auto row = instance.Row(r);
    rows[r].assign(row.begin(), row.end());
  }

  auto fail = [&](std::string reason) {
    out.infeasible = true;
    out.infeasible_reason = std::move(reason);
    return out;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    if (!PropagateCuts(cuts, state, changed, out.infeasible_reason)) {
      return fail(out.infeasible_reason);
    }
    for (int r = 0; r < m; ++r) {
      if (!alive[r]) continue;
      auto& row = rows[r];
      bool covered = false;
      for (int c : row) covered = covered || state[c] == State::kOne;
      if (covered) {
        alive[r] = 0;
        changed = true;
        continue;
      }
      std::erase_if(row, [&](int c) { return state[c] == State::kZero; });
      if (row.empty()) {
        return fail(fmt::format("row {} has no admissible column", r));
      }
      if (row.size() == 1) {
        state[row.front()] = State::kOne;
        alive[r] = 0;
        changed = true;
      }
    }
  }

  // Row domination: a row containing another surviving row's column set is
  // implied by it. Each kept row is indexed under its rarest column only; a
  // subset of `row` necessarily has its rarest column inside `row`.
  std::vector<int> col_freq(n, 0);
  std::vector<int> order;
  for (int r = 0; r < m; ++r) {
    if (!alive[r]) continue;
    order.push_back(r);
    for (int c : rows[r]) ++col_freq[c];
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rows[a].size() < rows[b].size();
  });
  std::vector<std::vector<int>> kept_by_col(n);
  for (int r : order) {
    const auto& row = rows[r];
    bool dominated = false;
    for (int c : row) {
      for (int other : kept_by_col[c]) {
        if (std::includes(row.begin(), row.end(), rows[other].begin(),
                          rows[other].end())) {
          dominated = true;
          break;
        }
      }
      if (dominated) break;
    }
    if (dominated) {
      alive[r] = 0;
      continue;
    }
    int rarest = row.front();
    for (int c : row) {
      if (col_freq[c] < col_freq[rarest]) rarest = c;
    }
    kept_by_col[rarest].push_back(r);
  }

  std::vector<std::vector<int>> reduced_rows;
  std::vector<RowMeta> meta;
  for (int r = 0; r < m; ++r) {
    if (!alive[r]) continue;
    out.kept_rows.push_back(r);
    reduced_rows.push_back(rows[r]);
    if (instance.has_row_meta()) meta.push_back(instance.row_meta()[r]);
  }
  for (int c = 0; c < n; ++c) {
    if (state[c] == State::kOne) out.forced_one.push_back(c);
    if (state[c] == State::kZero) out.forced_zero.push_back(c);
  }
  out.reduced = ScpInstance(n, std::move(reduced_rows), std::move(meta),
                            instance.col_trip_ids());
  return out;
}

}  // namespace parkcover
