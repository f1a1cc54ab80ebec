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


#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <vector>

#include "parkcover/bnb_solver.h"
#include "parkcover/cardinality.h"
#include "parkcover/city_model.h"
#include "parkcover/evaluation.h"
#include "parkcover/row_generation.h"
#include "parkcover/scp_instance.h"
#include "parkcover/trajectory.h"

namespace parkcover {
namespace {

// Side 6 is the scaled 60-street city, 15 the full evaluation city.
ScenarioParams CityOfSide(int side) {
  ScenarioParams p;
  if (side == 15) return p;
  p.grid_rows = p.grid_cols = side;
  p.route_count = 100;
  p.route_length = 35;
  p.trips_per_route = 6;
  p.seed = 3;
  return p;
}

const CityScenario& City(int side) {
  static std::map<int, CityScenario> cache;
  auto it = cache.find(side);
  if (it == cache.end()) it = cache.emplace(side, GenerateScenario(CityOfSide(side))).first;
  return it->second;
}

const ScpInstance& Instance(int side) {
  static std::map<int, ScpInstance> cache;
  auto it = cache.find(side);
  if (it == cache.end()) {
    const CityScenario& s = City(side);
    const TimeGrid grid = BuildTimeGrid(s);
    it = cache.emplace(side, AssembleInstance(BuildCoverage(s, grid), grid,
                                              s.trips())).first;
  }
  return it->second;
}

void BM_GenerateScenario(benchmark::State& state) {
  const ScenarioParams p = CityOfSide(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GenerateScenario(p));
}
BENCHMARK(BM_GenerateScenario)->Arg(6)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_BuildCoverage(benchmark::State& state) {
  const CityScenario& s = City(static_cast<int>(state.range(0)));
  const TimeGrid grid = BuildTimeGrid(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildCoverage(s, grid, static_cast<int>(state.range(1))));
  }
}
BENCHMARK(BM_BuildCoverage)
    ->Args({6, 1})->Args({15, 1})->Args({15, 4})
    ->Unit(benchmark::kMillisecond);

void BM_AssembleInstance(benchmark::State& state) {
  const CityScenario& s = City(static_cast<int>(state.range(0)));
  const TimeGrid grid = BuildTimeGrid(s);
  const CoverageSet cov = BuildCoverage(s, grid);
  for (auto _ : state) benchmark::DoNotOptimize(AssembleInstance(cov, grid, s.trips()));
}
BENCHMARK(BM_AssembleInstance)->Arg(6)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_GreedyCover(benchmark::State& state) {
  const ScpInstance& inst = Instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GreedyCover(inst));
}
BENCHMARK(BM_GreedyCover)->Arg(6)->Arg(15)->Unit(benchmark::kMillisecond);

// Root node only: the bound plus the first dive.
void BM_SolveRoot(benchmark::State& state) {
  const ScpInstance& inst = Instance(static_cast<int>(state.range(0)));
  SolveConfig config;
  config.node_limit = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Solve(inst, {}, config));
}
BENCHMARK(BM_SolveRoot)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_NormalizedGram(benchmark::State& state) {
  const ScpInstance& inst = Instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NormalizedGram::FromInstance(inst));
}
BENCHMARK(BM_NormalizedGram)->Arg(6)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_SpectralCluster(benchmark::State& state) {
  const NormalizedGram gram =
      NormalizedGram::FromInstance(Instance(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(SpectralCluster(gram, 2, 1));
}
BENCHMARK(BM_SpectralCluster)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Pretrain(benchmark::State& state) {
  const ScpInstance& inst = Instance(6);
  RowGenConfig config;
  config.sub_solve_config.time_limit_s = 5;
  for (auto _ : state) benchmark::DoNotOptimize(Pretrain(inst, config));
}
BENCHMARK(BM_Pretrain)->Unit(benchmark::kMillisecond);

void BM_UndetectedStreets(benchmark::State& state) {
  const CityScenario& s = City(6);
  const AllocationPlan plan = RandomPlan(s.trips(), 220, 1);
  for (auto _ : state) benchmark::DoNotOptimize(UndetectedStreets(s, plan, 30));
}
BENCHMARK(BM_UndetectedStreets)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace parkcover

BENCHMARK_MAIN();
