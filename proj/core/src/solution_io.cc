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

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "parkcover/bnb_solver.h"
#include "parkcover/error.h"

namespace parkcover {

SolveStatus ParseSolveStatus(std::string_view name) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kFeasibleLimit,
                        SolveStatus::kInfeasible, SolveStatus::kUnknown}) {
    if (SolveStatusName(s) == name) return s;
  }
  throw Error(ErrorKind::kParse,
              fmt::format("unknown solve status '{}'", name));
}

SolutionRecord MakeSolutionRecord(const ScpInstance& instance,
                                  const SolveResult& result,
                                  std::string method) {
  SolutionRecord record;
  record.method = std::move(method);
  record.status = result.status();
  record.selection = result.best;
  record.lower_bound = result.lower_bound;
  record.nodes_explored = result.nodes_explored;
  record.elapsed_s = result.elapsed_s;
  if (result.best && instance.has_col_meta()) {
    for (int c : result.best->chosen) {
      record.trip_ids.push_back(instance.col_trip_ids()[c]);
    }
  }
  return record;
}

void WriteSolution(const SolutionRecord& record,
                   const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["method"] = record.method;
  j["status"] = std::string(SolveStatusName(record.status));
  if (record.selection) {
    j["objective"] = record.selection->objective();
    j["columns"] = record.selection->chosen;
  } else {
    j["objective"] = nullptr;
    j["columns"] = nlohmann::json::array();
  }
  j["trip_ids"] = record.trip_ids;
  // JSON has no infinity; an unbounded (infeasible) bound is written as null.
  if (std::isfinite(record.lower_bound)) {
    j["lower_bound"] = record.lower_bound;
  } else {
    j["lower_bound"] = nullptr;
  }
  j["nodes"] = record.nodes_explored;
  j["elapsed_s"] = record.elapsed_s;
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write solution {}", path.string()));
  }
  out << j.dump(2) << "\n";
}

SolutionRecord ReadSolution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open solution {}", path.string()));
  }
  SolutionRecord record;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    record.method = j.value("method", std::string("benchmark"));
    record.status = ParseSolveStatus(j.at("status").get<std::string>());
    if (!j.at("objective").is_null()) {
      record.selection = Selection::FromColumns(
          j.at("columns").get<std::vector<int>>());
    }
    record.trip_ids = j.value("trip_ids", std::vector<int>{});
    const auto& lb = j.at("lower_bound");
    record.lower_bound =
        lb.is_null() ? std::numeric_limits<double>::infinity()
                     : lb.get<double>();
    record.nodes_explored = j.value("nodes", std::int64_t{0});
    record.elapsed_s = j.value("elapsed_s", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: {}", path.string(), e.what()));
  }
  if (record.selection &&
      !record.trip_ids.empty() &&
      record.trip_ids.size() != record.selection->chosen.size()) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: trip_ids and columns differ in length",
                            path.string()));
  }
  return record;
}

}  // namespace parkcover
