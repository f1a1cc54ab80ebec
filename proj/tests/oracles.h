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


// Reference implementations used only by tests. Each one is written the
// slow, obvious way and shares no code with the library it checks.

#ifndef PARKCOVER_TESTS_ORACLES_H_
#define PARKCOVER_TESTS_ORACLES_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "parkcover/bnb_solver.h"
#include "parkcover/city_model.h"
#include "parkcover/scp_instance.h"

namespace parkcover::testing {

using DenseMatrix = std::vector<std::vector<char>>;  // [row][col]

// Random uni-cost instance with every row non-empty. Each entry is one with
// probability `density`; empty rows get one random column.
ScpInstance RandomInstance(std::uint64_t seed, int rows, int cols,
                           double density);

// Same instance family as the acceptance criteria: n in [4, max_cols],
// m in [n, max_rows], density in [0.1, 0.4].
ScpInstance OracleSizedInstance(std::uint64_t seed, int max_cols = 15,
                                int max_rows = 40);

DenseMatrix ToDense(const ScpInstance& instance);

// Row-by-row scan of the dense matrix.
bool DenseCovers(const DenseMatrix& a, const std::vector<int>& chosen);

// Enumerates subsets by size, each size in lexicographic order, and returns
// the first cover: the minimum cardinality, lexicographically smallest one.
// Cuts are honoured when given. nullopt when no subset qualifies.
std::optional<std::vector<int>> EnumerateOptimum(
    const DenseMatrix& a, int cols, const std::vector<LinearCut>& cuts = {});

// Cosine similarity of every column pair, straight from the definition.
Eigen::MatrixXd CosineGram(const DenseMatrix& a, int cols);

// Normalized cut of the 2-partition `side` (0/1 per vertex) of weight
// matrix w: cut/vol(A) + cut/vol(B).
double NormalizedCut(const Eigen::MatrixXd& w, const std::vector<int>& side);

// The 2-partition with the smallest normalized cut over all 2^(n-1) - 1
// splits (vertex 0 always on side 0). n <= 20.
std::vector<int> BestNormalizedCut(const Eigen::MatrixXd& w);

// Streets of `scenario` a trip is on during [t, t + 1 s), sampled at one
// second resolution over the active period; returns the (street index,
// interval) cells the trip touches.
std::vector<std::pair<int, int>> SampledCells(const CityScenario& scenario,
                                              const BusTrip& trip);

}  // namespace parkcover::testing

#endif  // PARKCOVER_TESTS_ORACLES_H_
