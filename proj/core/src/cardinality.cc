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
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "parkcover/cardinality.h"
#include "parkcover/error.h"

namespace parkcover {

std::string_view CutModeName(CutMode mode) {
  return mode == CutMode::kLiteral ? "literal" : "warmstart";
}

CutMode ParseCutMode(std::string_view text) {
  if (text == "literal") return CutMode::kLiteral;
  if (text == "warmstart") return CutMode::kWarmstart;
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("unknown cut mode '{}' (literal|warmstart)", text));
}

int DefaultSlack(int s_plus_size) {
  return std::max(1, static_cast<int>(std::lround(0.05 * s_plus_size)));
}

std::pair<VariablePartition, CardinalityCuts> DeriveCuts(
    std::vector<std::vector<int>> clusters, const Selection& x_star,
    CutMode mode, std::optional<int> slack) {
  if (clusters.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "need at least two clusters");
  }
  if (slack && *slack < 0) {
    throw Error(ErrorKind::kInvalidArgument, "slack must be >= 0");
  }
  std::vector<int> all;
  for (auto& cluster : clusters) {
    if (cluster.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "empty cluster");
    }
    std::sort(cluster.begin(), cluster.end());
    all.insert(all.end(), cluster.begin(), cluster.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(ErrorKind::kInvalidArgument, "clusters overlap");
  }

  auto activation = [&](const std::vector<int>& cluster) {
    int sum = 0;
    for (int c : cluster) {
      sum += std::binary_search(x_star.chosen.begin(), x_star.chosen.end(), c)
                 ? 1
                 : 0;
    }
    return sum;
  };
  std::vector<int> act(clusters.size());
  std::vector<size_t> order(clusters.size());
  for (size_t i = 0; i < clusters.size(); ++i) act[i] = activation(clusters[i]);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (act[a] != act[b]) return act[a] > act[b];
    return clusters[a].front() < clusters[b].front();
  });

  VariablePartition partition;
  for (size_t i : order) {
    partition.clusters.push_back(std::move(clusters[i]));
    partition.activation.push_back(act[i]);
  }

  const auto& s_plus = partition.s_plus();
  const auto& s_minus = partition.s_minus();
  const int plus_on = partition.activation.front();
  const int minus_on = partition.activation.back();
  const int minus_size = static_cast<int>(s_minus.size());

  CardinalityCuts cuts;
  cuts.mode = mode;
  cuts.upper = {s_plus, CutSense::kAtLeast, 0};
  cuts.lower = {s_minus, CutSense::kAtMost, 0};
  if (mode == CutMode::kLiteral) {
    cuts.slack = slack.value_or(0);
    cuts.upper.rhs = plus_on;
    cuts.lower.rhs = minus_size - minus_on;
  } else {
    cuts.slack = slack.value_or(DefaultSlack(static_cast<int>(s_plus.size())));
    cuts.upper.rhs = std::max(0, plus_on - cuts.slack);
    cuts.lower.rhs = std::min(minus_size, minus_on + cuts.slack);
  }
  return {std::move(partition), std::move(cuts)};
}

void WriteCuts(const CardinalityCuts& cuts, const std::filesystem::path& path) {
  nlohmann::json j;
  j["S_plus"] = cuts.upper.support;
  j["xi_plus"] = cuts.upper.rhs;
  j["S_minus"] = cuts.lower.support;
  j["xi_minus"] = cuts.lower.rhs;
  j["mode"] = std::string(CutModeName(cuts.mode));
  j["slack"] = cuts.slack;
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write cuts {}", path.string()));
  }
  out << j.dump(1) << '\n';
}

CardinalityCuts ReadCuts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, fmt::format("cannot open cuts {}", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  CardinalityCuts cuts;
  try {
    const auto j = nlohmann::json::parse(buffer.str());
    cuts.upper = {j.at("S_plus").get<std::vector<int>>(), CutSense::kAtLeast,
                  j.at("xi_plus").get<int>()};
    cuts.lower = {j.at("S_minus").get<std::vector<int>>(), CutSense::kAtMost,
                  j.at("xi_minus").get<int>()};
    cuts.mode = ParseCutMode(j.at("mode").get<std::string>());
    cuts.slack = j.at("slack").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: {}", path.string(), e.what()));
  }
  return cuts;
}

void WritePartition(const VariablePartition& partition,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write partition {}", path.string()));
  }
  std::vector<std::pair<int, int>> rows;
  for (size_t k = 0; k < partition.clusters.size(); ++k) {
    for (int c : partition.clusters[k]) rows.emplace_back(c, static_cast<int>(k));
  }
  std::sort(rows.begin(), rows.end());
  out << "column,cluster\n";
  for (const auto& [c, k] : rows) out << c << ',' << k << '\n';
}

}  // namespace parkcover
