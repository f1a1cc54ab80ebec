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
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "parkcover/cardinality.h"
#include "parkcover/error.h"
#include "random.h"

namespace parkcover {
namespace {

using internal::Rng;
using internal::UniformIndex;
using internal::UniformUnit;

// Deg^-1/2 for W = G~ minus its diagonal; 0 for isolated vertices.
Eigen::VectorXd InverseSqrtDegree(const NormalizedGram& gram) {
  Eigen::VectorXd deg = gram.RowSums() - gram.Diagonal();
  Eigen::VectorXd inv(deg.size());
  for (Eigen::Index i = 0; i < deg.size(); ++i) {
    inv(i) = deg(i) > 1e-12 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  }
  return inv;
}

// Top-k eigenvectors of S = I + Deg^-1/2 W Deg^-1/2 (spectrum in [0, 2]) by
// block subspace iteration with Rayleigh-Ritz; smallest of L = 2I - S.
Eigen::MatrixXd IterativeEmbedding(const NormalizedGram& gram, int k,
                                   std::uint64_t seed,
                                   const SpectralOptions& options,
                                   Eigen::VectorXd& eigenvalues,
                                   int& iterations) {
  const int n = gram.size();
  const int p = std::min(n, 2 * k + 8);
  const Eigen::VectorXd dinv = InverseSqrtDegree(gram);
  const Eigen::VectorXd diag = gram.Diagonal();
  auto apply = [&](const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd scaled = dinv.asDiagonal() * x;
    Eigen::MatrixXd w = gram.Multiply(scaled) - diag.asDiagonal() * scaled;
    return Eigen::MatrixXd(x + dinv.asDiagonal() * w);
  };

  Rng rng(seed ^ 0x5bd1e995ULL);
  Eigen::MatrixXd q(n, p);
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      q(i, j) = 2.0 * UniformUnit(rng) - 1.0;
    }
  }
  q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() *
      Eigen::MatrixXd::Identity(n, p);

  double worst = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.eigen_max_iterations; ++it) {
    const Eigen::MatrixXd z = apply(q);
    const Eigen::MatrixXd h = q.transpose() * z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(
        0.5 * (h + h.transpose()));
    // Ascending order from Eigen; take the largest p, descending.
    Eigen::MatrixXd u = small.eigenvectors().rowwise().reverse();
    Eigen::VectorXd theta = small.eigenvalues().reverse();
    const Eigen::MatrixXd v = q * u;
    const Eigen::MatrixXd sv = z * u;
    worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const double residual = (sv.col(j) - theta(j) * v.col(j)).norm();
      worst = std::max(worst, residual / std::max(1.0, std::abs(theta(j))));
    }
    if (worst <= options.eigen_tolerance) {
      iterations = it;
      eigenvalues = (2.0 - theta.head(k).array()).matrix();
      return v.leftCols(k);
    }
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(sv).householderQ() *
        Eigen::MatrixXd::Identity(n, p);
  }
  throw Error(ErrorKind::kNumeric,
              fmt::format("subspace iteration did not converge: {} iterations, "
                          "worst residual {:.3e} > tolerance {:.1e} (n={}, k={})",
                          options.eigen_max_iterations, worst,
                          options.eigen_tolerance, n, k));
}

double SquaredDistance(const Eigen::MatrixXd& points, int i,
                       const Eigen::MatrixXd& centroids, int c) {
  return (points.row(i) - centroids.row(c)).squaredNorm();
}

struct KMeansRun {
  std::vector<int> labels;
  double inertia = 0.0;
};

KMeansRun KMeans(const Eigen::MatrixXd& points, int k, Rng& rng,
                 int max_iterations) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd centroids(k, points.cols());

  // k-means++ seeding.
  centroids.row(0) = points.row(static_cast<int>(UniformIndex(rng, n)));
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) d2[i] = SquaredDistance(points, i, centroids, 0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    int pick = n - 1;
    if (total <= 0.0) {
      pick = static_cast<int>(UniformIndex(rng, n));
    } else {
      double target = UniformUnit(rng) * total;
      for (int i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = points.row(pick);
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points, i, centroids, c));
    }
  }

  KMeansRun run;
  run.labels.assign(n, -1);
  std::vector<int> sizes(k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = SquaredDistance(points, i, centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double d = SquaredDistance(points, i, centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    // Empty clusters take the farthest point of a cluster that can spare one.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int label : run.labels) ++sizes[label];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (sizes[run.labels[i]] < 2) continue;
        const double d = SquaredDistance(points, i, centroids, run.labels[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[run.labels[far]];
      run.labels[far] = c;
      sizes[c] = 1;
      centroids.row(c) = points.row(far);
      changed = true;
    }
    centroids.setZero();
    for (int i = 0; i < n; ++i) centroids.row(run.labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) /= sizes[c];
    if (!changed) break;
  }
  run.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    run.inertia += SquaredDistance(points, i, centroids, run.labels[i]);
  }
  return run;
}

}  // namespace

std::vector<std::vector<int>> SpectralPartition::Clusters(
    const NormalizedGram& gram) const {
  int k = 0;
  for (int label : labels) k = std::max(k, label + 1);
  std::vector<std::vector<int>> clusters(k);
  for (size_t i = 0; i < labels.size(); ++i) {
    clusters[labels[i]].push_back(gram.retained()[i]);
  }
  return clusters;
}

Eigen::MatrixXd NormalizedLaplacian(const NormalizedGram& gram) {
  Eigen::MatrixXd w = gram.ToDense();
  w.diagonal().setZero();
  const Eigen::VectorXd dinv = InverseSqrtDegree(gram);
  Eigen::MatrixXd l = -(dinv.asDiagonal() * w * dinv.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

SpectralPartition SpectralCluster(const NormalizedGram& gram, int k,
                                  std::uint64_t seed,
                                  const SpectralOptions& options) {
  if (k < 2 || k > gram.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("cluster count {} outside [2, {}]", k, gram.size()));
  }
  SpectralPartition out;
  Eigen::MatrixXd embedding;
  if (!options.force_iterative && gram.size() <= NormalizedGram::kDenseGramLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        NormalizedLaplacian(gram));
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::kNumeric,
                  fmt::format("dense eigensolver failed on n={}", gram.size()));
    }
    embedding = solver.eigenvectors().leftCols(k);
    out.eigenvalues = solver.eigenvalues().head(k);
  } else {
    embedding = IterativeEmbedding(gram, k, seed, options, out.eigenvalues,
                                   out.eigen_iterations);
  }
  for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }

  bool have = false;
  for (int r = 0; r < std::max(1, options.kmeans_restarts); ++r) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1));
    KMeansRun run = KMeans(embedding, k, rng, options.kmeans_max_iterations);
    if (!have || run.inertia < out.kmeans_inertia - 1e-12) {
      out.labels = std::move(run.labels);
      out.kmeans_inertia = run.inertia;
      have = true;
    }
  }
  return out;
}

}  // namespace parkcover
