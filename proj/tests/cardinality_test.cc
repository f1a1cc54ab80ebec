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


#include "parkcover/cardinality.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <unistd.h>

#include "oracles.h"
#include "parkcover/error.h"

namespace parkcover {
namespace {

ScpInstance Identity(int n) {
  std::vector<std::vector<int>> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = {i};
  return ScpInstance(n, rows);
}

// Two groups of columns that never share a row, so their Gram blocks are
// disconnected.
ScpInstance TwoBlockInstance(int a, int b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < 3 * a; ++r) {
    std::vector<int> row = {static_cast<int>(rng() % a)};
    row.push_back(static_cast<int>(rng() % a));
    rows.push_back(row);
  }
  for (int r = 0; r < 3 * b; ++r) {
    rows.push_back({a + static_cast<int>(rng() % b),
                    a + static_cast<int>(rng() % b)});
  }
  // Make each block connected: chain its columns.
  for (int c = 0; c + 1 < a; ++c) rows.push_back({c, c + 1});
  for (int c = a; c + 1 < a + b; ++c) rows.push_back({c, c + 1});
  return ScpInstance(a + b, rows);
}

TEST(GramTest, IdentityGivesIdentity) {
  const Eigen::MatrixXd g = NormalizedGram::FromInstance(Identity(4)).ToDense();
  EXPECT_TRUE(g.isApprox(Eigen::MatrixXd::Identity(4, 4)));
}

TEST(GramTest, TwoByTwoHandExample) {
  // A = [[1,1],[0,1]]: G = [[1,1],[1,2]], off-diagonal 1 / sqrt(2).
  const ScpInstance inst(2, {{0, 1}, {1}});
  const Eigen::MatrixXd g = NormalizedGram::FromInstance(inst).ToDense();
  EXPECT_NEAR(g(0, 1), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(g(1, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
}

TEST(GramTest, MatchesCosineOracleBothForms) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScpInstance inst = testing::RandomInstance(seed, 40, 15, 0.2);
    const Eigen::MatrixXd oracle =
        testing::CosineGram(testing::ToDense(inst), 15);
    const NormalizedGram dense = NormalizedGram::FromInstance(inst);
    const NormalizedGram implicit = NormalizedGram::FromInstance(inst, true);
    ASSERT_TRUE(dense.is_dense());
    ASSERT_FALSE(implicit.is_dense());
    EXPECT_LT((dense.ToDense() - oracle).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((implicit.ToDense() - oracle).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(15, 3);
    EXPECT_LT((implicit.Multiply(x) - oracle * x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((implicit.RowSums() - oracle.rowwise().sum()).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(GramTest, UnitDiagonalSymmetricInRange) {
  const ScpInstance inst = testing::RandomInstance(3, 300, 120, 0.03);
  const NormalizedGram gram = NormalizedGram::FromInstance(inst);
  const Eigen::MatrixXd g = gram.ToDense();
  EXPECT_LE((gram.Diagonal().array() - 1.0).abs().maxCoeff(), 1e-9);
  EXPECT_LE((g - g.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(g.minCoeff(), 0.0);
  EXPECT_LE(g.maxCoeff(), 1.0);
}

TEST(GramTest, ZeroColumnsArePrunedAndRecorded) {
  const ScpInstance inst(4, {{0, 2}, {2}});
  const NormalizedGram gram = NormalizedGram::FromInstance(inst);
  EXPECT_EQ(gram.retained(), (std::vector<int>{0, 2}));
  EXPECT_EQ(gram.pruned(), (std::vector<int>{1, 3}));
  EXPECT_EQ(gram.size(), 2);
}

TEST(GramTest, AllZeroIsDegenerate) {
  try {
    NormalizedGram::FromInstance(ScpInstance(3, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

TEST(LaplacianTest, EigenvaluesInZeroTwo) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScpInstance inst = testing::RandomInstance(seed, 80, 40, 0.08);
    const Eigen::MatrixXd l =
        NormalizedLaplacian(NormalizedGram::FromInstance(inst));
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-6);
    EXPECT_LE(ev.maxCoeff(), 2.0 + 1e-6);
  }
}

TEST(LaplacianTest, MatchesDefinition) {
  const ScpInstance inst = testing::RandomInstance(5, 30, 10, 0.25);
  const Eigen::MatrixXd g = testing::CosineGram(testing::ToDense(inst), 10);
  Eigen::MatrixXd w = g;
  w.diagonal().setZero();
  const Eigen::VectorXd deg = w.rowwise().sum();
  Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (deg(i) > 0 && deg(j) > 0) {
        expected(i, j) -= w(i, j) / std::sqrt(deg(i) * deg(j));
      }
    }
  }
  const Eigen::MatrixXd l =
      NormalizedLaplacian(NormalizedGram::FromInstance(inst));
  EXPECT_LT((l - expected).cwiseAbs().maxCoeff(), 1e-12);
}

std::set<std::vector<int>> AsSet(const std::vector<std::vector<int>>& v) {
  return {v.begin(), v.end()};
}

TEST(SpectralTest, DisconnectedBlocksAreRecovered) {
  const ScpInstance inst = TwoBlockInstance(7, 5, 1);
  const NormalizedGram gram = NormalizedGram::FromInstance(inst);
  const SpectralPartition p = SpectralCluster(gram, 2, 42);
  EXPECT_EQ(AsSet(p.Clusters(gram)),
            (std::set<std::vector<int>>{{0, 1, 2, 3, 4, 5, 6},
                                        {7, 8, 9, 10, 11}}));
}

TEST(SpectralTest, IterativePathRecoversBlocksToo) {
  const ScpInstance inst = TwoBlockInstance(30, 20, 2);
  const NormalizedGram gram = NormalizedGram::FromInstance(inst, true);
  SpectralOptions options;
  options.force_iterative = true;
  const SpectralPartition p = SpectralCluster(gram, 2, 42, options);
  EXPECT_GT(p.eigen_iterations, 0);
  std::vector<int> a(30), b(20);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 30);
  EXPECT_EQ(AsSet(p.Clusters(gram)), (std::set<std::vector<int>>{a, b}));
}

TEST(SpectralTest, IterativeEigenvaluesMatchDense) {
  const ScpInstance inst = testing::RandomInstance(8, 200, 60, 0.05);
  const NormalizedGram gram = NormalizedGram::FromInstance(inst);
  SpectralOptions iterative;
  iterative.force_iterative = true;
  const SpectralPartition dense = SpectralCluster(gram, 3, 1);
  const SpectralPartition iter = SpectralCluster(gram, 3, 1, iterative);
  EXPECT_LT((dense.eigenvalues - iter.eigenvalues).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(SpectralTest, WeakBridgeMatchesBestNormalizedCut) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> strong(0.6, 1.0);
    const int n = 6 + static_cast<int>(seed % 6);  // 6..11
    const int split = n / 2;
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = (i < split) == (j < split);
        g(i, j) = g(j, i) = same ? strong(rng) : 0.0;
      }
    }
    g(0, n - 1) = g(n - 1, 0) = 0.05;  // the weak bridge
    const NormalizedGram gram = NormalizedGram::FromDense(g);
    const SpectralPartition p = SpectralCluster(gram, 2, seed);
    Eigen::MatrixXd w = g;
    w.diagonal().setZero();
    const std::vector<int> best = testing::BestNormalizedCut(w);
    // Same partition up to label swap.
    std::vector<int> side(n);
    for (int i = 0; i < n; ++i) side[i] = p.labels[i] == p.labels[0] ? 0 : 1;
    EXPECT_EQ(side, best) << "seed " << seed;
  }
}

TEST(SpectralTest, IdentityGramIsDeterministic) {
  const NormalizedGram gram =
      NormalizedGram::FromDense(Eigen::MatrixXd::Identity(8, 8));
  const SpectralPartition a = SpectralCluster(gram, 2, 5);
  const SpectralPartition b = SpectralCluster(gram, 2, 5);
  EXPECT_EQ(a.labels, b.labels);
  std::set<int> used(a.labels.begin(), a.labels.end());
  EXPECT_EQ(used.size(), 2u);
}

TEST(SpectralTest, DeterministicAndExhaustive) {
  const ScpInstance inst = testing::RandomInstance(11, 300, 90, 0.04);
  const NormalizedGram gram = NormalizedGram::FromInstance(inst);
  for (int k : {2, 3, 5}) {
    const SpectralPartition a = SpectralCluster(gram, k, 9);
    const SpectralPartition b = SpectralCluster(gram, k, 9);
    EXPECT_EQ(a.labels, b.labels);
    std::vector<int> all;
    for (const auto& c : a.Clusters(gram)) {
      EXPECT_FALSE(c.empty());
      all.insert(all.end(), c.begin(), c.end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, gram.retained());
  }
}

TEST(SpectralTest, RejectsBadK) {
  const NormalizedGram gram = NormalizedGram::FromInstance(Identity(3));
  EXPECT_THROW(SpectralCluster(gram, 1, 0), Error);
  EXPECT_THROW(SpectralCluster(gram, 4, 0), Error);
}

TEST(SpectralTest, NonConvergenceIsNumericError) {
  const ScpInstance inst = testing::RandomInstance(4, 200, 80, 0.05);
  SpectralOptions options;
  options.force_iterative = true;
  options.eigen_max_iterations = 1;
  options.eigen_tolerance = 1e-14;
  try {
    SpectralCluster(NormalizedGram::FromInstance(inst), 2, 0, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
    EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos);
  }
}

const std::vector<std::vector<int>> kFourClusters = {{2, 3}, {0, 1}};

TEST(DeriveCutsTest, AllZerosLiteralIsVacuous) {
  const auto [part, cuts] =
      DeriveCuts(kFourClusters, Selection{}, CutMode::kLiteral);
  EXPECT_EQ(cuts.upper.rhs, 0);
  EXPECT_EQ(cuts.lower.rhs, static_cast<int>(part.s_minus().size()));
}

TEST(DeriveCutsTest, AllOnesLiteral) {
  const auto [part, cuts] =
      DeriveCuts(kFourClusters, Selection{{0, 1, 2, 3}}, CutMode::kLiteral);
  EXPECT_EQ(cuts.upper.rhs, static_cast<int>(part.s_plus().size()));
  EXPECT_EQ(cuts.lower.rhs, 0);
}

TEST(DeriveCutsTest, HandExampleLiteral) {
  const auto [part, cuts] =
      DeriveCuts(kFourClusters, Selection{{0, 1}}, CutMode::kLiteral);
  EXPECT_EQ(part.s_plus(), (std::vector<int>{0, 1}));
  EXPECT_EQ(cuts.upper.rhs, 2);
  EXPECT_EQ(cuts.upper.sense, CutSense::kAtLeast);
  EXPECT_EQ(part.s_minus(), (std::vector<int>{2, 3}));
  EXPECT_EQ(cuts.lower.rhs, 2);
  EXPECT_EQ(cuts.lower.sense, CutSense::kAtMost);
}

TEST(DeriveCutsTest, WarmstartKeepsTheTrainingPoint) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 40);
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<int>> clusters(k);
    for (int c = 0; c < n; ++c) clusters[c < k ? c : rng() % k].push_back(c);
    std::vector<int> chosen;
    std::vector<char> x(n, 0);
    for (int c = 0; c < n; ++c) {
      if (rng() % 3 == 0) {
        chosen.push_back(c);
        x[c] = 1;
      }
    }
    const auto [part, cuts] =
        DeriveCuts(clusters, Selection{chosen}, CutMode::kWarmstart);
    EXPECT_TRUE(cuts.upper.SatisfiedBy(x));
    EXPECT_TRUE(cuts.lower.SatisfiedBy(x));
    EXPECT_NO_THROW(cuts.upper.Validate(n));
    EXPECT_NO_THROW(cuts.lower.Validate(n));
    EXPECT_EQ(cuts.slack, DefaultSlack(static_cast<int>(part.s_plus().size())));
    for (size_t i = 1; i < part.activation.size(); ++i) {
      EXPECT_GE(part.activation[i - 1], part.activation[i]);
    }
  }
}

TEST(DeriveCutsTest, DefaultSlack) {
  EXPECT_EQ(DefaultSlack(1), 1);
  EXPECT_EQ(DefaultSlack(30), 2);
  EXPECT_EQ(DefaultSlack(2413), 121);
}

TEST(DeriveCutsTest, RejectsOverlapAndEmpty) {
  EXPECT_THROW(DeriveCuts({{0, 1}, {1, 2}}, Selection{}, CutMode::kLiteral),
               Error);
  EXPECT_THROW(DeriveCuts({{0, 1}, {}}, Selection{}, CutMode::kLiteral),
               Error);
  EXPECT_THROW(DeriveCuts({{0, 1}}, Selection{}, CutMode::kLiteral), Error);
}

TEST(CutModeTest, NamesRoundTrip) {
  EXPECT_EQ(ParseCutMode(CutModeName(CutMode::kLiteral)), CutMode::kLiteral);
  EXPECT_EQ(ParseCutMode(CutModeName(CutMode::kWarmstart)), CutMode::kWarmstart);
  EXPECT_THROW(ParseCutMode("loose"), Error);
}

TEST(CutsFileTest, RoundTrip) {
  const auto [part, cuts] =
      DeriveCuts(kFourClusters, Selection{{0, 3}}, CutMode::kWarmstart, 1);
  const auto dir = std::filesystem::temp_directory_path() /
                   ("parkcover_cuts_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  WriteCuts(cuts, dir / "cuts.json");
  WritePartition(part, dir / "partition.csv");
  const CardinalityCuts back = ReadCuts(dir / "cuts.json");
  std::ifstream csv(dir / "partition.csv");
  std::string header;
  std::getline(csv, header);
  std::filesystem::remove_all(dir);
  EXPECT_EQ(back.upper, cuts.upper);
  EXPECT_EQ(back.lower, cuts.lower);
  EXPECT_EQ(back.mode, cuts.mode);
  EXPECT_EQ(back.slack, cuts.slack);
  EXPECT_EQ(header, "column,cluster");
}

TEST(StcbTest, CutsFromTheOptimumKeepTheOptimum) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScpInstance inst = testing::OracleSizedInstance(seed);
    const Selection opt = BruteForceOptimum(inst);
    const NormalizedGram gram = NormalizedGram::FromInstance(inst);
    const auto clusters = SpectralCluster(gram, 2, seed).Clusters(gram);
    for (int slack : {0, 1, 2}) {
      const auto [part, cuts] =
          DeriveCuts(clusters, opt, CutMode::kWarmstart, slack);
      SolveConfig config;
      config.time_limit_s = 30;
      const SolveResult r = Solve(inst, cuts.AsVector(), config);
      ASSERT_TRUE(r.best) << "seed " << seed;
      EXPECT_EQ(r.best->objective(), opt.objective()) << "seed " << seed;
    }
  }
}

TEST(StcbTest, PipelineIsFeasibleAndReportsItsStages) {
  int fallbacks = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ScpInstance inst = testing::RandomInstance(seed, 150, 50, 0.06);
    StcbConfig config;
    config.rowgen.batch_size = 5;
    config.seed = seed;
    config.solve.time_limit_s = 10;
    const StcbResult r = SolveStcb(inst, config);
    ASSERT_TRUE(r.solve.best) << "seed " << seed;
    EXPECT_TRUE(IsFeasible(inst, *r.solve.best).feasible);
    ASSERT_TRUE(r.cuts && r.partition);
    if (!r.fallback && r.solve.status() == SolveStatus::kOptimal) {
      std::vector<char> x(inst.col_count(), 0);
      for (int c : r.solve.best->chosen) x[c] = 1;
      EXPECT_TRUE(r.cuts->upper.SatisfiedBy(x));
      EXPECT_TRUE(r.cuts->lower.SatisfiedBy(x));
    }
    fallbacks += r.fallback;
    // Incumbent times include the pre-training.
    ASSERT_FALSE(r.solve.log.entries.empty());
    EXPECT_GE(r.solve.log.entries.front().elapsed_s,
              r.pretrain_s + r.cluster_s - 1e-9);
  }
  RecordProperty("fallbacks", fallbacks);
}

TEST(StcbTest, EmptyTrainingPointGivesVacuousLiteralCuts) {
  const ScpInstance inst(2, {{0}, {1}});
  StcbConfig config;
  config.mode = CutMode::kLiteral;
  config.rowgen.row_cap = 0;  // x*_sub stays empty
  config.solve.time_limit_s = 5;
  const StcbResult r = SolveStcb(inst, config);
  ASSERT_TRUE(r.cuts);
  EXPECT_FALSE(r.fallback);
  ASSERT_TRUE(r.solve.best);
  EXPECT_EQ(r.solve.best->objective(), 2);
}

TEST(StcbTest, InfeasibleCutsTriggerFallback) {
  // Training on one row of the identity activates a single column, so with
  // no slack the lower cut forbids every column of S-.
  const ScpInstance inst = Identity(6);
  StcbConfig config;
  config.mode = CutMode::kWarmstart;
  config.slack = 0;
  config.rowgen.batch_size = 1;
  config.rowgen.row_cap = 1;
  config.solve.time_limit_s = 5;
  const StcbResult r = SolveStcb(inst, config);
  ASSERT_TRUE(r.solve.best);
  EXPECT_EQ(r.solve.best->objective(), 6);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.fallback_reason, "augmented model infeasible");
}

}  // namespace
}  // namespace parkcover
