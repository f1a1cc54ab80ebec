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

#include "lagrangian.h"

#include <algorithm>
#include <cmath>
#include <queue>

namespace parkcover::internal {

CoverEngine::CoverEngine(const ScpInstance& instance,
                         std::span<const LinearCut> cuts)
    : instance_(instance), cuts_(cuts.begin(), cuts.end()) {
  const int n = instance_.col_count();
  const int m = instance_.row_count();
  col_cuts_.assign(n, {});
  for (size_t k = 0; k < cuts_.size(); ++k) {
    for (int c : cuts_[k].support) col_cuts_[c].push_back(static_cast<int>(k));
  }
  state_.assign(n, ColState::kFree);
  cover_.assign(m, 0);
  row_active_.assign(m, 0);
  active_cover_.assign(n, 0);
  u_.assign(m, 0.0);
  mu_.assign(cuts_.size(), 0.0);
  for (const LinearCut& cut : cuts_) {
    cut_scale_.push_back(1.0 / static_cast<double>(cut.support.size()));
  }
  rc_.assign(n, 0.0);
  best_rc_.assign(n, 0.0);
  x_avg_.assign(n, 0.0);
  x_.assign(n, 0);
  row_hits_.assign(m, 0);
  cut_status_.resize(cuts_.size());
}

void CoverEngine::SetOne(int col) {
  state_[col] = ColState::kOne;
  ++ones_;
  for (int r : instance_.Column(col)) ++cover_[r];
}

void CoverEngine::SetZero(int col) { state_[col] = ColState::kZero; }

bool CoverEngine::Propagate() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const LinearCut& cut : cuts_) {
      int ones = 0, free = 0;
      for (int c : cut.support) {
        if (state_[c] == ColState::kOne) ++ones;
        if (state_[c] == ColState::kFree) ++free;
      }
      const int residual = cut.rhs - ones;
      if (cut.sense == CutSense::kAtLeast) {
        if (residual > free) return false;
        if (residual > 0 && residual == free) {
          for (int c : cut.support) {
            if (state_[c] == ColState::kFree) {
              SetOne(c);
              propagated_.push_back({c, true});
            }
          }
          changed = true;
        }
      } else {
        if (residual < 0) return false;
        if (residual == 0 && free > 0) {
          for (int c : cut.support) {
            if (state_[c] == ColState::kFree) {
              SetZero(c);
              propagated_.push_back({c, false});
            }
          }
          changed = true;
        }
      }
    }
    for (int r = 0; r < instance_.row_count(); ++r) {
      if (cover_[r] > 0) continue;
      int free = 0, last = -1;
      for (int c : instance_.Row(r)) {
        if (state_[c] == ColState::kFree) {
          ++free;
          last = c;
          if (free > 1) break;
        }
      }
      if (free == 0) return false;
      if (free == 1) {
        SetOne(last);
        propagated_.push_back({last, true});
        changed = true;
      }
    }
  }
  return true;
}

void CoverEngine::RefreshCutStatus() {
  for (size_t k = 0; k < cuts_.size(); ++k) {
    CutStatus& s = cut_status_[k];
    s = CutStatus{};
    for (int c : cuts_[k].support) {
      if (state_[c] == ColState::kOne) ++s.ones;
      if (state_[c] == ColState::kFree) ++s.free;
    }
    s.residual = cuts_[k].rhs - s.ones;
    s.active = cuts_[k].sense == CutSense::kAtLeast ? s.residual > 0
                                                    : s.residual < s.free;
  }
}

bool CoverEngine::Prepare(std::span<const Fixing> fixings) {
  std::fill(state_.begin(), state_.end(), ColState::kFree);
  std::fill(cover_.begin(), cover_.end(), 0);
  ones_ = 0;
  propagated_.clear();
  active_rows_.clear();
  free_cols_.clear();
  lagrangian_cover_.reset();

  for (const Fixing& f : fixings) {
    if (state_[f.col] != ColState::kFree) {
      if ((state_[f.col] == ColState::kOne) != f.one) return false;
      continue;
    }
    if (f.one) {
      SetOne(f.col);
    } else {
      SetZero(f.col);
    }
  }
  if (!Propagate()) return false;

  RefreshCutStatus();
  std::fill(row_active_.begin(), row_active_.end(), 0);
  std::fill(active_cover_.begin(), active_cover_.end(), 0);
  for (int r = 0; r < instance_.row_count(); ++r) {
    if (cover_[r] > 0) continue;
    active_rows_.push_back(r);
    row_active_[r] = 1;
    for (int c : instance_.Row(r)) {
      if (state_[c] == ColState::kFree) ++active_cover_[c];
    }
  }
  for (int c = 0; c < instance_.col_count(); ++c) {
    if (state_[c] != ColState::kFree) continue;
    bool relevant = active_cover_[c] > 0;
    for (int k : col_cuts_[c]) {
      if (cuts_[k].sense == CutSense::kAtLeast && cut_status_[k].active) {
        relevant = true;
      }
    }
    if (relevant) free_cols_.push_back(c);
  }
  return true;
}

bool CoverEngine::Solved() const {
  if (!active_rows_.empty()) return false;
  for (size_t k = 0; k < cuts_.size(); ++k) {
    if (cuts_[k].sense == CutSense::kAtLeast && cut_status_[k].residual > 0) {
      return false;
    }
  }
  return true;
}

std::vector<int> CoverEngine::OneColumns() const {
  std::vector<int> ones;
  ones.reserve(ones_);
  for (int c = 0; c < instance_.col_count(); ++c) {
    if (state_[c] == ColState::kOne) ones.push_back(c);
  }
  return ones;
}

std::vector<int> CoverEngine::DeficitCutColumns() const {
  std::vector<int> cols;
  for (size_t k = 0; k < cuts_.size(); ++k) {
    if (cuts_[k].sense != CutSense::kAtLeast || cut_status_[k].residual <= 0) {
      continue;
    }
    for (int c : cuts_[k].support) {
      if (state_[c] == ColState::kFree) cols.push_back(c);
    }
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

void CoverEngine::ResetMultipliers() {
  for (int r : active_rows_) {
    double best = 0.0;
    bool any = false;
    for (int c : instance_.Row(r)) {
      if (state_[c] != ColState::kFree || active_cover_[c] == 0) continue;
      const double v = 1.0 / active_cover_[c];
      best = any ? std::min(best, v) : v;
      any = true;
    }
    u_[r] = best;
  }
  std::fill(mu_.begin(), mu_.end(), 0.0);
  multipliers_ready_ = true;
}

double CoverEngine::Optimize(const SubgradientParams& params) {
  if (!multipliers_ready_) ResetMultipliers();
  for (int c : free_cols_) {
    x_avg_[c] = 0.0;
    best_rc_[c] = 1.0;
  }
  lagrangian_cover_.reset();

  std::vector<double> best_u(active_rows_.size());
  std::vector<double> best_mu(mu_);
  double best = -std::numeric_limits<double>::infinity();
  double lambda = 2.0;
  int stall = 0;
  const int patience = std::max(3, params.max_iterations / 20);
  int iterations = 0;

  for (int it = 0; it < params.max_iterations; ++it) {
    ++iterations;
    double value = 0.0;
    for (int r : active_rows_) value += u_[r];
    for (size_t k = 0; k < cuts_.size(); ++k) {
      if (!cut_status_[k].active) continue;
      const double sign = cuts_[k].sense == CutSense::kAtLeast ? 1.0 : -1.0;
      value += sign * mu_[k] * cut_scale_[k] * cut_status_[k].residual;
    }
    for (int c : free_cols_) {
      double rc = 1.0;
      for (int r : instance_.Column(c)) {
        if (row_active_[r]) rc -= u_[r];
      }
      for (int k : col_cuts_[c]) {
        if (!cut_status_[k].active) continue;
        const double w = mu_[k] * cut_scale_[k];
        rc += cuts_[k].sense == CutSense::kAtLeast ? -w : w;
      }
      rc_[c] = rc;
      x_[c] = rc < 0.0;
      if (rc < 0.0) value += rc;
    }

    if (value > best + 1e-12) {
      best = value;
      for (int c : free_cols_) best_rc_[c] = rc_[c];
      for (size_t i = 0; i < active_rows_.size(); ++i) {
        best_u[i] = u_[active_rows_[i]];
      }
      best_mu = mu_;
      stall = 0;
    } else if (++stall >= patience) {
      lambda *= 0.5;
      stall = 0;
    }

    // Subgradient and a feasibility check of the Lagrangian solution.
    for (int r : active_rows_) row_hits_[r] = 0;
    int picked = 0;
    for (int c : free_cols_) {
      if (!x_[c]) continue;
      x_avg_[c] += 1.0;
      ++picked;
      for (int r : instance_.Column(c)) {
        if (row_active_[r]) ++row_hits_[r];
      }
    }
    double norm = 0.0;
    bool covers = true;
    for (int r : active_rows_) {
      const double g = 1.0 - row_hits_[r];
      if (g > 0.0) covers = false;
      if (u_[r] > 0.0 || g > 0.0) norm += g * g;
    }
    std::vector<double> cut_g(cuts_.size(), 0.0);
    for (size_t k = 0; k < cuts_.size(); ++k) {
      if (!cut_status_[k].active) continue;
      int in = 0;
      for (int c : cuts_[k].support) {
        if (state_[c] == ColState::kFree && x_[c]) ++in;
      }
      const double g = cuts_[k].sense == CutSense::kAtLeast
                           ? cut_status_[k].residual - in
                           : in - cut_status_[k].residual;
      if (g > 0.0) covers = false;
      cut_g[k] = g * cut_scale_[k];
      if (mu_[k] > 0.0 || g > 0.0) norm += cut_g[k] * cut_g[k];
    }
    if (covers && (!lagrangian_cover_ ||
                   ones_ + picked <
                       static_cast<int>(lagrangian_cover_->size()))) {
      std::vector<int> cols = OneColumns();
      for (int c : free_cols_) {
        if (x_[c]) cols.push_back(c);
      }
      std::sort(cols.begin(), cols.end());
      lagrangian_cover_ = std::move(cols);
    }

    if (best > params.stop_above) break;
    if (norm < 1e-12) break;
    if (lambda < 1e-4) break;
    if (params.out_of_time && params.out_of_time()) break;

    double target = params.target.value_or(
        best + std::max(0.5, 0.05 * std::abs(best)));
    if (target <= value) target = value + std::max(0.5, 0.05 * std::abs(value));
    const double step = lambda * (target - value) / norm;
    for (int r : active_rows_) {
      u_[r] = std::max(0.0, u_[r] + step * (1.0 - row_hits_[r]));
    }
    for (size_t k = 0; k < cuts_.size(); ++k) {
      if (cut_status_[k].active) {
        mu_[k] = std::max(0.0, mu_[k] + step * cut_g[k]);
      }
    }
  }

  for (size_t i = 0; i < active_rows_.size(); ++i) {
    u_[active_rows_[i]] = best_u[i];
  }
  mu_ = best_mu;
  if (iterations > 0) {
    for (int c : free_cols_) x_avg_[c] /= iterations;
  }
  return std::max(best, 0.0);
}

bool CoverEngine::CutsHold(std::span<const char> chosen) const {
  for (const LinearCut& cut : cuts_) {
    if (!cut.SatisfiedBy(chosen)) return false;
  }
  return true;
}

std::optional<std::vector<int>> CoverEngine::Heuristic() const {
  if (auto cover = Greedy(false)) return cover;
  bool budgeted = false;
  for (const LinearCut& cut : cuts_) {
    budgeted = budgeted || cut.sense == CutSense::kAtMost;
  }
  if (budgeted) return Greedy(true);
  return std::nullopt;
}

std::optional<std::vector<int>> CoverEngine::Greedy(bool defer_budgeted) const {
  const int n = instance_.col_count();
  const int m = instance_.row_count();
  std::vector<char> chosen(n, 0);
  std::vector<int> count(m, 0);
  std::vector<int> cut_count(cuts_.size(), 0);

  auto cost = [&](int c) {
    return state_[c] == ColState::kFree ? best_rc_[c] : 1.0;
  };
  auto in_budget = [&](int c) {
    for (int k : col_cuts_[c]) {
      if (cuts_[k].sense == CutSense::kAtMost) return true;
    }
    return false;
  };
  auto allowed = [&](int c) {
    if (chosen[c] || state_[c] == ColState::kZero) return false;
    for (int k : col_cuts_[c]) {
      if (cuts_[k].sense == CutSense::kAtMost &&
          cut_count[k] >= cuts_[k].rhs) {
        return false;
      }
    }
    return true;
  };
  int uncovered = m;
  std::vector<int> gain(n, 0);
  auto add = [&](int c) {
    chosen[c] = 1;
    for (int k : col_cuts_[c]) ++cut_count[k];
    for (int r : instance_.Column(c)) {
      if (++count[r] == 1) {
        --uncovered;
        for (int other : instance_.Row(r)) --gain[other];
      }
    }
  };
  // Lagrangian greedy score, lower is better: rc / gain for rc > 0 and
  // rc * gain otherwise. It only grows as gain shrinks, so stale heap entries
  // can be refreshed lazily.
  auto score = [&](int c) {
    const double rc = cost(c);
    return rc > 0.0 ? rc / std::max(gain[c], 1) : rc * std::max(gain[c], 1);
  };
  auto fill_deficits = [&]() {
    for (size_t k = 0; k < cuts_.size(); ++k) {
      if (cuts_[k].sense != CutSense::kAtLeast) continue;
      std::vector<int> pool;
      for (int c : cuts_[k].support) {
        if (allowed(c)) pool.push_back(c);
      }
      std::sort(pool.begin(), pool.end(), [&](int a, int b) {
        const double sa = score(a), sb = score(b);
        return sa != sb ? sa < sb : a < b;
      });
      for (int c : pool) {
        if (cut_count[k] >= cuts_[k].rhs) break;
        if (allowed(c)) add(c);
      }
      if (cut_count[k] < cuts_[k].rhs) return false;
    }
    return true;
  };

  for (int c = 0; c < n; ++c) gain[c] = instance_.ColumnSize(c);
  for (int c = 0; c < n; ++c) {
    if (state_[c] == ColState::kOne) add(c);
  }
  std::vector<int> preferred;
  for (int c : free_cols_) {
    if (best_rc_[c] < 0.0 && !(defer_budgeted && in_budget(c))) {
      preferred.push_back(c);
    }
  }
  std::sort(preferred.begin(), preferred.end(), [&](int a, int b) {
    return best_rc_[a] != best_rc_[b] ? best_rc_[a] < best_rc_[b] : a < b;
  });
  for (int c : preferred) {
    if (allowed(c)) add(c);
  }
  if (!fill_deficits()) return std::nullopt;

  struct Candidate {
    double score;
    int gain;
    int col;
    bool operator<(const Candidate& o) const {
      if (score != o.score) return score > o.score;
      return col > o.col;
    }
  };
  // With deferral, budgeted columns only enter once nothing else helps.
  for (int phase = defer_budgeted ? 0 : 1; phase < 2 && uncovered > 0;
       ++phase) {
    std::priority_queue<Candidate> heap;
    for (int c = 0; c < n; ++c) {
      if (gain[c] > 0 && allowed(c) && (phase == 1 || !in_budget(c))) {
        heap.push({score(c), gain[c], c});
      }
    }
    while (uncovered > 0 && !heap.empty()) {
      const Candidate top = heap.top();
      heap.pop();
      if (!allowed(top.col)) continue;
      if (top.gain != gain[top.col]) {
        if (gain[top.col] > 0) {
          heap.push({score(top.col), gain[top.col], top.col});
        }
        continue;
      }
      add(top.col);
    }
  }
  if (uncovered > 0) return std::nullopt;

  std::vector<int> order;
  for (int c = 0; c < n; ++c) {
    if (chosen[c]) order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return cost(a) != cost(b) ? cost(a) > cost(b) : a > b;
  });
  for (int c : order) {
    if (state_[c] == ColState::kOne) continue;  // fixings are binding
    bool redundant = true;
    for (int r : instance_.Column(c)) {
      if (count[r] < 2) {
        redundant = false;
        break;
      }
    }
    for (int k : col_cuts_[c]) {
      if (cuts_[k].sense == CutSense::kAtLeast &&
          cut_count[k] <= cuts_[k].rhs) {
        redundant = false;
      }
    }
    if (!redundant) continue;
    chosen[c] = 0;
    for (int k : col_cuts_[c]) --cut_count[k];
    for (int r : instance_.Column(c)) --count[r];
  }

  if (!CutsHold(chosen)) return std::nullopt;
  std::vector<int> cols;
  for (int c = 0; c < n; ++c) {
    if (chosen[c]) cols.push_back(c);
  }
  return cols;
}

}  // namespace parkcover::internal
