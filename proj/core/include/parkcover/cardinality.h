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

#ifndef PARKCOVER_CARDINALITY_H_
#define PARKCOVER_CARDINALITY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "parkcover/bnb_solver.h"
#include "parkcover/row_generation.h"
#include "parkcover/scp_instance.h"

namespace parkcover {

// Cosine similarity between the columns of A, G~ = D^-1/2 A'A D^-1/2, over
// the columns with a nonzero norm. Index i of the Gram matrix refers to
// original column retained()[i].
//
// Up to kDenseGramLimit retained columns the matrix is materialised;
// above it only products G~ X are available, through the scaled sparse
// factor B = A D^-1/2.
class NormalizedGram {
 public:
  static constexpr int kDenseGramLimit = 3000;

  // Throws kDegenerate when every column has zero norm.
  static NormalizedGram FromInstance(const ScpInstance& instance,
                                     bool force_implicit = false);
  // Takes `gram` as G~ itself; `retained` defaults to 0..size-1.
  static NormalizedGram FromDense(Eigen::MatrixXd gram,
                                  std::vector<int> retained = {});

  int size() const { return static_cast<int>(retained_.size()); }
  bool is_dense() const { return dense_.has_value(); }
  const std::vector<int>& retained() const { return retained_; }
  const std::vector<int>& pruned() const { return pruned_; }

  // Dense form; materialised on demand for the implicit representation.
  Eigen::MatrixXd ToDense() const;
  // Y = G~ X.
  Eigen::MatrixXd Multiply(const Eigen::MatrixXd& x) const;
  // Row sums of G~.
  Eigen::VectorXd RowSums() const;
  Eigen::VectorXd Diagonal() const;

 private:
  std::optional<Eigen::MatrixXd> dense_;
  Eigen::SparseMatrix<double> factor_;  // m x size(), implicit form only
  std::vector<int> retained_;
  std::vector<int> pruned_;
};

struct SpectralOptions {
  int kmeans_restarts = 10;
  int kmeans_max_iterations = 300;
  // Implicit eigensolver (subspace iteration) limits.
  int eigen_max_iterations = 3000;
  double eigen_tolerance = 1e-5;
  // Forces the iterative eigensolver regardless of size.
  bool force_iterative = false;
};

struct SpectralPartition {
  std::vector<int> labels;           // cluster of each Gram index, 0..k-1
  Eigen::VectorXd eigenvalues;       // the k smallest Laplacian eigenvalues
  int eigen_iterations = 0;          // 0 for the dense path
  double kmeans_inertia = 0.0;

  // Original column indices per cluster, ascending.
  std::vector<std::vector<int>> Clusters(const NormalizedGram& gram) const;
};

// Symmetric normalised Laplacian L = I - Deg^-1/2 W Deg^-1/2 of the graph with
// weights W = G~ minus its diagonal; isolated vertices get L_ii = 1.
Eigen::MatrixXd NormalizedLaplacian(const NormalizedGram& gram);

// Spectral clustering into k groups: the k eigenvectors of L with smallest
// eigenvalue, row-normalised, then seeded k-means++ with restarts.
// Throws kInvalidArgument unless 2 <= k <= gram.size(), kNumeric if the
// iterative eigensolver fails to converge.
SpectralPartition SpectralCluster(const NormalizedGram& gram, int k,
                                  std::uint64_t seed,
                                  const SpectralOptions& options = {});

enum class CutMode { kLiteral, kWarmstart };

std::string_view CutModeName(CutMode mode);
CutMode ParseCutMode(std::string_view text);

struct VariablePartition {
  // By activation sum descending; ties by smallest member.
  std::vector<std::vector<int>> clusters;
  std::vector<int> activation;

  const std::vector<int>& s_plus() const { return clusters.front(); }
  const std::vector<int>& s_minus() const { return clusters.back(); }
};

struct CardinalityCuts {
  LinearCut upper;  // sum over S+ >= xi+
  LinearCut lower;  // sum over S- <= xi-
  CutMode mode = CutMode::kWarmstart;
  int slack = 0;

  std::vector<LinearCut> AsVector() const { return {upper, lower}; }
};

// max(1, round(0.05 |S+|)).
int DefaultSlack(int s_plus_size);

// Orders the clusters and derives the two cuts from x_star.
//   literal:   xi+ = x*(S+),                     xi- = |S-| - x*(S-)
//   warmstart: xi+ = max(0, x*(S+) - slack),     xi- = min(|S-|, x*(S-) + slack)
// Throws kInvalidArgument for fewer than two clusters, an empty cluster or
// overlapping clusters.
std::pair<VariablePartition, CardinalityCuts> DeriveCuts(
    std::vector<std::vector<int>> clusters, const Selection& x_star,
    CutMode mode, std::optional<int> slack = std::nullopt);

struct StcbConfig {
  RowGenConfig rowgen;
  int k = 2;
  CutMode mode = CutMode::kWarmstart;
  std::optional<int> slack;
  std::uint64_t seed = 0;
  // Fraction of the time limit at which a lagging augmented solve is
  // abandoned for the plain model.
  double fallback_checkpoint = 0.25;
  SpectralOptions spectral;
  SolveConfig solve;
};

struct StcbResult {
  // Incumbent log times and elapsed_s include pre-training and clustering;
  // the time limit covers the solves only. The status and
  // lower bound refer to the augmented model unless `fallback` is set.
  SolveResult solve;
  PretrainResult pretrain;
  std::optional<VariablePartition> partition;
  std::optional<CardinalityCuts> cuts;
  bool fallback = false;
  std::string fallback_reason;
  double pretrain_s = 0.0;
  double cluster_s = 0.0;
};

// Pre-train by row generation, cluster the columns, add the two cuts and
// solve. The augmented model is abandoned (and the plain one solved in the
// remaining time) if it is infeasible or if at the checkpoint it has no
// incumbent at least as good as the greedy cover.
StcbResult SolveStcb(const ScpInstance& instance, const StcbConfig& config);

// {"S_plus": [...], "xi_plus": k, "S_minus": [...], "xi_minus": k,
//  "mode": "...", "slack": k}
void WriteCuts(const CardinalityCuts& cuts, const std::filesystem::path& path);
CardinalityCuts ReadCuts(const std::filesystem::path& path);
// CSV column,cluster with cluster = position in the sorted partition.
void WritePartition(const VariablePartition& partition,
                    const std::filesystem::path& path);

}  // namespace parkcover

#endif  // PARKCOVER_CARDINALITY_H_
