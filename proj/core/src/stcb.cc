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
#include <chrono>

#include <fmt/format.h>

#include "parkcover/cardinality.h"
#include "parkcover/error.h"

namespace parkcover {
namespace {

double Since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SolveConfig WithOffset(const SolveConfig& base, double offset) {
  SolveConfig cfg = base;
  if (base.on_incumbent) {
    cfg.on_incumbent = [inner = base.on_incumbent, offset](
                           const Selection& s, double t) { inner(s, t + offset); };
  }
  return cfg;
}

void ShiftLog(IncumbentLog& log, double offset) {
  for (auto& e : log.entries) e.elapsed_s += offset;
}

}  // namespace

StcbResult SolveStcb(const ScpInstance& instance, const StcbConfig& config) {
  if (!(config.fallback_checkpoint > 0.0 && config.fallback_checkpoint <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "fallback checkpoint must lie in (0, 1]");
  }
  StcbResult result;
  auto t0 = std::chrono::steady_clock::now();
  result.pretrain = Pretrain(instance, config.rowgen);
  result.pretrain_s = Since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<LinearCut> cuts;
  const NormalizedGram gram = NormalizedGram::FromInstance(instance);
  if (gram.size() >= std::max(2, config.k)) {
    const SpectralPartition spectral =
        SpectralCluster(gram, config.k, config.seed, config.spectral);
    auto [partition, derived] = DeriveCuts(
        spectral.Clusters(gram), result.pretrain.x_star_sub, config.mode,
        config.slack);
    result.partition = std::move(partition);
    result.cuts = std::move(derived);
    cuts = result.cuts->AsVector();
  }
  result.cluster_s = Since(t0);
  const double offset = result.pretrain_s + result.cluster_s;

  const int greedy = GreedyCover(instance).objective();
  const double checkpoint =
      config.fallback_checkpoint * config.solve.time_limit_s;
  bool lagging = false;
  SolveConfig augmented_cfg = WithOffset(config.solve, offset);
  augmented_cfg.should_stop = [&](double elapsed, std::optional<int> inc) {
    if (config.solve.should_stop && config.solve.should_stop(elapsed, inc)) {
      return true;
    }
    if (!cuts.empty() && elapsed >= checkpoint && (!inc || *inc > greedy)) {
      lagging = true;
      return true;
    }
    return false;
  };
  SolveResult augmented = Solve(instance, cuts, augmented_cfg);
  ShiftLog(augmented.log, offset);

  const bool infeasible = augmented.status() == SolveStatus::kInfeasible;
  if (!infeasible && !lagging) {
    augmented.elapsed_s += offset;
    result.solve = std::move(augmented);
    return result;
  }

  result.fallback = true;
  result.fallback_reason =
      infeasible ? "augmented model infeasible"
                 : fmt::format("no incumbent at least as good as greedy ({}) "
                               "after {:.3g} s",
                               greedy, checkpoint);
  const double offset2 = offset + augmented.elapsed_s;
  SolveConfig plain_cfg = WithOffset(config.solve, offset2);
  plain_cfg.time_limit_s =
      std::max(1e-3, config.solve.time_limit_s - augmented.elapsed_s);
  SolveResult plain = Solve(instance, {}, plain_cfg);
  ShiftLog(plain.log, offset2);

  // Incumbents of the abandoned run stay valid covers.
  IncumbentLog merged = augmented.log;
  for (const auto& e : plain.log.entries) {
    if (merged.entries.empty() || e.objective < merged.entries.back().objective) {
      merged.entries.push_back(e);
    }
  }
  merged.final_status = plain.log.final_status;
  if (augmented.best &&
      (!plain.best || augmented.best->objective() < plain.best->objective())) {
    plain.best = augmented.best;
  }
  plain.log = std::move(merged);
  plain.nodes_explored += augmented.nodes_explored;
  plain.elapsed_s += offset2;
  result.solve = std::move(plain);
  return result;
}

}  // namespace parkcover
