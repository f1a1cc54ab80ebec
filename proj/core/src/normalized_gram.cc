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
#include <numeric>

#include <fmt/format.h>

#include "parkcover/cardinality.h"
#include "parkcover/error.h"

namespace parkcover {

NormalizedGram NormalizedGram::FromInstance(const ScpInstance& instance,
                                            bool force_implicit) {
  NormalizedGram gram;
  for (int c = 0; c < instance.col_count(); ++c) {
    (instance.ColumnSize(c) > 0 ? gram.retained_ : gram.pruned_).push_back(c);
  }
  if (gram.retained_.empty()) {
    throw Error(ErrorKind::kDegenerate,
                "every column has zero norm; nothing to cluster");
  }
  const int n = gram.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(instance.nnz()));
  for (int i = 0; i < n; ++i) {
    const int c = gram.retained_[i];
    const double scale = 1.0 / std::sqrt(static_cast<double>(instance.ColumnSize(c)));
    for (int r : instance.Column(c)) triplets.emplace_back(r, i, scale);
  }
  gram.factor_.resize(instance.row_count(), n);
  gram.factor_.setFromTriplets(triplets.begin(), triplets.end());
  gram.factor_.makeCompressed();

  if (!force_implicit && n <= kDenseGramLimit) {
    gram.dense_ = gram.ToDense();
    gram.factor_ = Eigen::SparseMatrix<double>();
  }
  return gram;
}

NormalizedGram NormalizedGram::FromDense(Eigen::MatrixXd g,
                                         std::vector<int> retained) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "Gram matrix must be square and non-empty");
  }
  if (retained.empty()) {
    retained.resize(g.rows());
    std::iota(retained.begin(), retained.end(), 0);
  }
  if (static_cast<Eigen::Index>(retained.size()) != g.rows()) {
    throw Error(ErrorKind::kInvalidArgument,
                "retained map does not match the Gram matrix size");
  }
  NormalizedGram gram;
  gram.dense_ = std::move(g);
  gram.retained_ = std::move(retained);
  return gram;
}

Eigen::MatrixXd NormalizedGram::ToDense() const {
  if (dense_) return *dense_;
  const Eigen::SparseMatrix<double> product = factor_.transpose() * factor_;
  Eigen::MatrixXd g = Eigen::MatrixXd(product);
  // Exact unit diagonal; off-diagonal cosines clamped into [0, 1].
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      g(i, j) = i == j ? 1.0 : std::clamp(g(i, j), 0.0, 1.0);
    }
  }
  return g;
}

Eigen::MatrixXd NormalizedGram::Multiply(const Eigen::MatrixXd& x) const {
  if (dense_) return (*dense_) * x;
  const Eigen::MatrixXd bx = factor_ * x;
  return factor_.transpose() * bx;
}

Eigen::VectorXd NormalizedGram::RowSums() const {
  return Multiply(Eigen::VectorXd::Ones(size()));
}

Eigen::VectorXd NormalizedGram::Diagonal() const {
  if (dense_) return dense_->diagonal();
  Eigen::VectorXd d(size());
  for (int i = 0; i < size(); ++i) d(i) = factor_.col(i).squaredNorm();
  return d;
}

}  // namespace parkcover
