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

#include "parkcover/bnb_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "lagrangian.h"
#include "parkcover/error.h"

namespace parkcover {

using internal::ColState;
using internal::CoverEngine;
using internal::Fixing;

void LinearCut::Validate(int col_count) const {
  if (support.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "cut support must be non-empty");
  }
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= col_count) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("cut column {} outside [0, {})", support[i],
                              col_count));
    }
    if (i > 0 && support[i] <= support[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "cut support must be sorted and unique");
    }
  }
  if (rhs < 0 || rhs > static_cast<int>(support.size())) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("cut rhs {} outside [0, {}]", rhs, support.size()));
  }
}

bool LinearCut::SatisfiedBy(std::span<const char> chosen) const {
  int count = 0;
  for (int c : support) count += chosen[c] ? 1 : 0;
  return sense == CutSense::kAtLeast ? count >= rhs : count <= rhs;
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasibleLimit:
      return "feasible-time-limit";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<double> IncumbentLog::TimeToReach(int target) const {
  for (const auto& e : entries) {
    if (e.objective <= target) return e.elapsed_s;
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundEps = 1e-6;

struct Node {
  std::vector<Fixing> fixings;
  double bound = 0.0;
  int depth = 0;
  std::int64_t seq = 0;
};

// Heap order: smallest bound on top, then deeper, then older.
struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const ScpInstance& instance, std::span<const LinearCut> cuts,
                 const SolveConfig& config)
      : instance_(instance),
        cuts_(cuts.begin(), cuts.end()),
        config_(config),
        start_(Clock::now()) {}

  SolveResult Run();

 private:
  enum class Outcome { kClosed, kBranched };

  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool OutOfTime() const { return Elapsed() >= config_.time_limit_s; }
  bool HasIncumbent() const { return best_.has_value(); }
  int BestObjective() const {
    return best_ ? best_->objective() : std::numeric_limits<int>::max();
  }
  // Total bounds strictly above this value cannot lead to an accepted
  // improvement.
  double PruneThreshold() const {
    if (!best_) return kInf;
    double threshold = BestObjective() - 1 + kBoundEps;
    if (config_.gap_tolerance > 0.0) {
      threshold = std::min(
          threshold, BestObjective() * (1.0 - config_.gap_tolerance) - 1e-9);
    }
    return threshold;
  }
  bool Prunable(double bound) const { return bound > PruneThreshold(); }

  void Offer(std::vector<int> cols);
  Outcome Evaluate(Node& node, Node& child_one, Node& child_zero);
  void MaybeLog(size_t open);

  const ScpInstance& instance_;
  std::vector<LinearCut> cuts_;
  const SolveConfig& config_;
  Clock::time_point start_;

  std::optional<Selection> best_;
  IncumbentLog log_;
  std::unique_ptr<CoverEngine> engine_;
  std::int64_t seq_ = 0;
  double last_progress_ = 0.0;
  std::int64_t nodes_ = 0;
  double root_bound_ = 0.0;
};

void BranchAndBound::Offer(std::vector<int> cols) {
  if (static_cast<int>(cols.size()) >= BestObjective()) return;
  Selection candidate = Selection::FromColumns(std::move(cols));
  if (candidate.objective() >= BestObjective()) return;
  if (!IsFeasible(instance_, candidate).feasible) return;
  std::vector<char> chosen(instance_.col_count(), 0);
  for (int c : candidate.chosen) chosen[c] = 1;
  for (const auto& cut : cuts_) {
    if (!cut.SatisfiedBy(chosen)) return;
  }
  const double t = Elapsed();
  log_.entries.push_back({t, candidate.objective()});
  best_ = std::move(candidate);
  if (config_.on_incumbent) config_.on_incumbent(*best_, t);
}

BranchAndBound::Outcome BranchAndBound::Evaluate(Node& node, Node& child_one,
                                                 Node& child_zero) {
  CoverEngine& engine = *engine_;
  constexpr int kMaxRounds = 3;
  for (int round = 0; round < kMaxRounds; ++round) {
    if (!engine.Prepare(node.fixings)) return Outcome::kClosed;
    if (engine.Solved()) {
      Offer(engine.OneColumns());
      return Outcome::kClosed;
    }
    const int ones = engine.ones();
    internal::SubgradientParams params;
    params.max_iterations = (node.depth == 0 && round == 0)
                                ? config_.root_iterations
                                : config_.node_iterations;
    params.stop_above = PruneThreshold() - ones;
    if (HasIncumbent()) params.target = BestObjective() - ones;
    params.out_of_time = [this] { return OutOfTime(); };
    const double free_bound = engine.Optimize(params);
    node.bound = std::max(node.bound, ones + free_bound);
    if (node.depth == 0 && round == 0) root_bound_ = node.bound;

    if (const auto& cover = engine.lagrangian_cover()) Offer(*cover);
    if (Prunable(node.bound)) return Outcome::kClosed;
    if (auto cover = engine.Heuristic()) Offer(std::move(*cover));
    if (Prunable(node.bound)) return Outcome::kClosed;

    const auto propagated = engine.propagated();
    node.fixings.insert(node.fixings.end(), propagated.begin(),
                        propagated.end());
    if (!HasIncumbent() || round + 1 == kMaxRounds) break;

    // Reduced-cost fixing against the incumbent.
    const double threshold = PruneThreshold();
    const double lagrangian = ones + free_bound;
    size_t fixed = 0;
    for (int c : engine.free_cols()) {
      const double rc = engine.reduced_cost(c);
      if (rc > 0.0 && lagrangian + rc > threshold) {
        node.fixings.push_back({c, false});
        ++fixed;
      } else if (rc < 0.0 && lagrangian - rc > threshold) {
        node.fixings.push_back({c, true});
        ++fixed;
      }
    }
    if (fixed == 0) break;
  }

  // Branch on argmax of (averaged Lagrangian value) x (active rows covered).
  int branch = -1;
  double best_score = 0.0;
  for (int c : engine.free_cols()) {
    const double score = engine.primal_average(c) * engine.active_cover(c);
    if (score > best_score + 1e-12) {
      best_score = score;
      branch = c;
    }
  }
  if (branch < 0) {
    int best_cover = 0;
    for (int c : engine.free_cols()) {
      if (engine.active_cover(c) > best_cover) {
        best_cover = engine.active_cover(c);
        branch = c;
      }
    }
  }
  if (branch < 0) {
    const auto deficit = engine.DeficitCutColumns();
    if (!deficit.empty()) branch = deficit.front();
  }
  if (branch < 0) return Outcome::kClosed;

  child_one.fixings = node.fixings;
  child_one.fixings.push_back({branch, true});
  child_one.bound = node.bound;
  child_one.depth = node.depth + 1;
  child_one.seq = seq_++;
  child_zero.fixings = std::move(node.fixings);
  child_zero.fixings.push_back({branch, false});
  child_zero.bound = node.bound;
  child_zero.depth = node.depth + 1;
  child_zero.seq = seq_++;
  return Outcome::kBranched;
}

void BranchAndBound::MaybeLog(size_t open) {
  if (config_.log_every_s <= 0.0) return;
  const double t = Elapsed();
  if (t - last_progress_ < config_.log_every_s) return;
  last_progress_ = t;
  std::cerr << fmt::format("[bnb] t={:.1f}s nodes={} open={} best={} root_bound={:.2f}\n",
                           t, nodes_, open,
                           best_ ? std::to_string(best_->objective()) : "none",
                           root_bound_);
}

SolveResult BranchAndBound::Run() {
  for (const auto& cut : cuts_) cut.Validate(instance_.col_count());

  SolveResult result;
  auto finish = [&](SolveStatus status, double lower_bound) {
    log_.final_status = status;
    result.best = best_;
    result.log = log_;
    result.lower_bound = lower_bound;
    result.nodes_explored = nodes_;
    result.elapsed_s = Elapsed();
    return result;
  };

  if (!instance_.EmptyRows().empty()) {
    return finish(SolveStatus::kInfeasible, kInf);
  }

  // Warm start.
  {
    Selection greedy = GreedyCover(instance_);
    Offer(greedy.chosen);
  }

  Reduction reduction = Reduce(instance_, cuts_);
  if (reduction.infeasible) {
    return finish(best_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible,
                  best_ ? best_->objective() : kInf);
  }
  engine_ = std::make_unique<CoverEngine>(reduction.reduced, cuts_);

  Node root;
  for (int c : reduction.forced_one) root.fixings.push_back({c, true});
  for (int c : reduction.forced_zero) root.fixings.push_back({c, false});
  root.bound = static_cast<double>(reduction.forced_one.size());
  root.seq = seq_++;

  std::vector<Node> open;
  open.push_back(std::move(root));
  bool limit_hit = false;
  auto limits_reached = [&]() {
    if (OutOfTime()) return true;
    if (config_.node_limit && nodes_ >= *config_.node_limit) return true;
    if (config_.should_stop &&
        config_.should_stop(Elapsed(), best_ ? std::optional<int>(
                                                   best_->objective())
                                             : std::nullopt)) {
      result.stopped_by_callback = true;
      return true;
    }
    return false;
  };

  while (!open.empty() && !limit_hit) {
    std::pop_heap(open.begin(), open.end(), NodeAfter{});
    Node node = std::move(open.back());
    open.pop_back();
    if (Prunable(node.bound)) continue;

    while (true) {
      if (limits_reached()) {
        limit_hit = true;
        open.push_back(std::move(node));
        std::push_heap(open.begin(), open.end(), NodeAfter{});
        break;
      }
      ++nodes_;
      MaybeLog(open.size());
      Node child_one, child_zero;
      if (Evaluate(node, child_one, child_zero) == Outcome::kClosed) break;
      open.push_back(std::move(child_zero));
      std::push_heap(open.begin(), open.end(), NodeAfter{});
      node = std::move(child_one);
    }
  }

  if (!limit_hit) {
    return finish(best_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible,
                  best_ ? best_->objective() : kInf);
  }
  double lower = best_ ? static_cast<double>(best_->objective()) : kInf;
  for (const Node& n : open) {
    if (!Prunable(n.bound)) lower = std::min(lower, n.bound);
  }
  return finish(best_ ? SolveStatus::kFeasibleLimit : SolveStatus::kUnknown,
                lower);
}

}  // namespace

SolveResult Solve(const ScpInstance& instance, std::span<const LinearCut> cuts,
                  const SolveConfig& config) {
  if (!(config.time_limit_s > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "time limit must be positive");
  }
  BranchAndBound bnb(instance, cuts, config);
  return bnb.Run();
}

double LpLowerBound(const ScpInstance& instance,
                    std::span<const LinearCut> cuts,
                    std::span<const int> fixed_zero,
                    std::span<const int> fixed_one) {
  for (const auto& cut : cuts) cut.Validate(instance.col_count());
  std::vector<Fixing> fixings;
  std::vector<char> seen(instance.col_count(), 0);
  auto add = [&](std::span<const int> cols, bool one) {
    for (int c : cols) {
      if (c < 0 || c >= instance.col_count()) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("fixed column {} out of range", c));
      }
      if (seen[c] && one) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("column {} fixed to both 0 and 1", c));
      }
      seen[c] = 1;
      fixings.push_back({c, one});
    }
  };
  add(fixed_zero, false);
  add(fixed_one, true);

  CoverEngine engine(instance, cuts);
  if (!engine.Prepare(fixings)) return kInf;
  if (engine.Solved()) return engine.ones();
  const double relevant = static_cast<double>(engine.free_cols().size());
  internal::SubgradientParams params;
  params.max_iterations = 2000;
  params.stop_above = relevant + kBoundEps;
  const double free_bound = engine.Optimize(params);
  // Any fractional point has free part <= #relevant free columns.
  if (free_bound > relevant + kBoundEps) return kInf;
  return engine.ones() + free_bound;
}

void WriteIncumbentLog(const IncumbentLog& log,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write incumbent log {}", path.string()));
  }
  out << "elapsed_s,objective\n";
  for (const auto& e : log.entries) {
    out << fmt::format("{:.6f},{}\n", e.elapsed_s, e.objective);
  }
}

IncumbentLog ReadIncumbentLog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open incumbent log {}", path.string()));
  }
  IncumbentLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    IncumbentEntry e;
    if (!(fields >> e.elapsed_s >> e.objective)) {
      if (line_no == 1) continue;  // header
      throw Error(ErrorKind::kParse,
                  fmt::format("{}:{}: expected 'elapsed_s,objective'",
                              path.string(), line_no));
    }
    log.entries.push_back(e);
  }
  return log;
}

std::string SummaryLine(const SolveResult& result) {
  return fmt::format(
      "status={} objective={} lower_bound={} nodes={} elapsed_s={:.3f}",
      SolveStatusName(result.status()),
      result.best ? std::to_string(result.best->objective()) : "none",
      std::isfinite(result.lower_bound)
          ? fmt::format("{:.4f}", result.lower_bound)
          : "inf",
      result.nodes_explored, result.elapsed_s);
}

}  // namespace parkcover
