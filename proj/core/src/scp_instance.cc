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

#include "parkcover/scp_instance.h"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>

#include <fmt/format.h>

#include "parkcover/error.h"

namespace parkcover {

ScpInstance::ScpInstance(int col_count, std::vector<std::vector<int>> rows,
                         std::vector<RowMeta> row_meta,
                         std::vector<int> col_trip_ids)
    : col_count_(col_count),
      row_meta_(std::move(row_meta)),
      col_trip_ids_(std::move(col_trip_ids)) {
  if (col_count_ < 0) {
    throw Error(ErrorKind::kIntegrity, "negative column count");
  }
  if (!row_meta_.empty() && row_meta_.size() != rows.size()) {
    throw Error(ErrorKind::kIntegrity, "row metadata size mismatch");
  }
  if (!col_trip_ids_.empty() &&
      col_trip_ids_.size() != static_cast<size_t>(col_count_)) {
    throw Error(ErrorKind::kIntegrity, "column metadata size mismatch");
  }
  std::vector<std::int64_t> col_sizes(col_count_, 0);
  row_offsets_.reserve(rows.size() + 1);
  for (size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (!row.empty() && (row.front() < 0 || row.back() >= col_count_)) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("row {} references a column outside [0, {})", r,
                              col_count_));
    }
    row_cols_.insert(row_cols_.end(), row.begin(), row.end());
    row_offsets_.push_back(static_cast<std::int64_t>(row_cols_.size()));
    for (int c : row) ++col_sizes[c];
  }
  col_offsets_.assign(col_count_ + 1, 0);
  for (int c = 0; c < col_count_; ++c) {
    col_offsets_[c + 1] = col_offsets_[c] + col_sizes[c];
  }
  col_rows_.resize(row_cols_.size());
  std::vector<std::int64_t> fill(col_offsets_.begin(), col_offsets_.end() - 1);
  for (int r = 0; r < row_count(); ++r) {
    for (int c : Row(r)) col_rows_[fill[c]++] = r;
  }
}

std::vector<int> ScpInstance::EmptyRows() const {
  std::vector<int> empty;
  for (int r = 0; r < row_count(); ++r) {
    if (RowSize(r) == 0) empty.push_back(r);
  }
  return empty;
}

Selection Selection::FromColumns(std::vector<int> columns) {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  return Selection{std::move(columns)};
}

ScpInstance AssembleInstance(const CoverageSet& coverage, const TimeGrid& grid,
                             std::span<const BusTrip> trips) {
  if (coverage.interval_count() != grid.interval_count) {
    throw Error(ErrorKind::kIntegrity,
                "coverage and time grid disagree on the interval count");
  }
  const int q = grid.interval_count;
  const int p = coverage.street_count();

  std::vector<std::string> uncoverable;
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < q; ++t) {
      if (coverage.Trips(j, t).empty()) {
        uncoverable.push_back(fmt::format("(street {}, interval {})",
                                          coverage.street_ids()[j], t));
      }
    }
  }
  if (!uncoverable.empty()) {
    std::string msg = fmt::format(
        "{} (street, interval) pair(s) cannot be covered by any trip:",
        uncoverable.size());
    for (const auto& u : uncoverable) msg += "\n  " + u;
    throw Error(ErrorKind::kInfeasible, msg);
  }

  // Trip id -> position; columns keep the trip order, minus unused trips.
  std::unordered_map<int, size_t> position;
  position.reserve(trips.size());
  for (size_t i = 0; i < trips.size(); ++i) position.emplace(trips[i].id, i);
  std::vector<char> used(trips.size(), 0);
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < q; ++t) {
      for (int trip : coverage.Trips(j, t)) {
        auto it = position.find(trip);
        if (it == position.end()) {
          throw Error(ErrorKind::kIntegrity,
                      fmt::format("coverage references unknown trip {}", trip));
        }
        used[it->second] = 1;
      }
    }
  }
  std::vector<int> column_of(trips.size(), -1);
  std::vector<int> col_trip_ids;
  std::vector<int> pruned;
  for (size_t i = 0; i < trips.size(); ++i) {
    if (used[i]) {
      column_of[i] = static_cast<int>(col_trip_ids.size());
      col_trip_ids.push_back(trips[i].id);
    } else {
      pruned.push_back(trips[i].id);
    }
  }

  std::vector<std::vector<int>> rows;
  std::vector<RowMeta> meta;
  rows.reserve(static_cast<size_t>(p) * q);
  meta.reserve(static_cast<size_t>(p) * q);
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < q; ++t) {
      std::vector<int> row;
      row.reserve(coverage.Trips(j, t).size());
      for (int trip : coverage.Trips(j, t)) {
        row.push_back(column_of[position.at(trip)]);
      }
      rows.push_back(std::move(row));
      meta.push_back({coverage.street_ids()[j], t});
    }
  }
  const int n = static_cast<int>(col_trip_ids.size());
  ScpInstance instance(n, std::move(rows), std::move(meta),
                       std::move(col_trip_ids));
  instance.set_pruned_trip_ids(std::move(pruned));
  return instance;
}

ScpInstance RestrictRows(const ScpInstance& instance,
                         std::span<const int> rows) {
  std::vector<std::vector<int>> sub;
  std::vector<RowMeta> meta;
  sub.reserve(rows.size());
  for (int r : rows) {
    if (r < 0 || r >= instance.row_count()) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("row index {} out of range", r));
    }
    const auto row = instance.Row(r);
    sub.emplace_back(row.begin(), row.end());
    if (instance.has_row_meta()) meta.push_back(instance.row_meta()[r]);
  }
  return ScpInstance(instance.col_count(), std::move(sub), std::move(meta),
                     instance.col_trip_ids());
}

FeasibilityReport IsFeasible(const ScpInstance& instance,
                             const Selection& selection) {
  std::vector<char> chosen(instance.col_count(), 0);
  for (int c : selection.chosen) {
    if (c < 0 || c >= instance.col_count()) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("selected column {} out of range", c));
    }
    chosen[c] = 1;
  }
  FeasibilityReport report;
  for (int r = 0; r < instance.row_count(); ++r) {
    const auto row = instance.Row(r);
    if (std::none_of(row.begin(), row.end(),
                     [&](int c) { return chosen[c] != 0; })) {
      report.violated_rows.push_back(r);
    }
  }
  report.feasible = report.violated_rows.empty();
  return report;
}

Selection GreedyCover(const ScpInstance& instance) {
  if (const auto empty = instance.EmptyRows(); !empty.empty()) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("instance has {} empty row(s), first is row {}",
                            empty.size(), empty.front()));
  }
  const int n = instance.col_count();
  std::vector<char> covered(instance.row_count(), 0);
  std::vector<int> gain(n);
  // Max-heap on (gain, -index): lowest index wins ties.
  using Entry = std::pair<int, int>;
  std::priority_queue<Entry> heap;
  for (int c = 0; c < n; ++c) {
    gain[c] = instance.ColumnSize(c);
    if (gain[c] > 0) heap.push({gain[c], -c});
  }
  int uncovered = instance.row_count();
  std::vector<int> chosen;
  while (uncovered > 0) {
    const auto [stored, neg] = heap.top();
    heap.pop();
    const int c = -neg;
    if (stored != gain[c]) {
      if (gain[c] > 0) heap.push({gain[c], neg});
      continue;
    }
    chosen.push_back(c);
    for (int r : instance.Column(c)) {
      if (covered[r]) continue;
      covered[r] = 1;
      --uncovered;
      for (int other : instance.Row(r)) --gain[other];
    }
  }
  return Selection::FromColumns(std::move(chosen));
}

Selection BruteForceOptimum(const ScpInstance& instance) {
  const int n = instance.col_count();
  if (n > kBruteForceMaxColumns) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("brute force is limited to {} columns, got {}",
                            kBruteForceMaxColumns, n));
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(instance.row_count());
  for (int r = 0; r < instance.row_count(); ++r) {
    std::uint32_t mask = 0;
    for (int c : instance.Row(r)) mask |= std::uint32_t{1} << c;
    if (mask == 0) {
      throw Error(ErrorKind::kInfeasible,
                  fmt::format("row {} has no nonzero", r));
    }
    masks.push_back(mask);
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());

  auto covers = [&](std::uint32_t chosen) {
    return std::all_of(masks.begin(), masks.end(),
                       [&](std::uint32_t m) { return (m & chosen) != 0; });
  };
  // Sizes in increasing order, combinations in lexicographic order.
  for (int k = 0; k <= n; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::uint32_t chosen = 0;
      for (int c : idx) chosen |= std::uint32_t{1} << c;
      if (covers(chosen)) return Selection{idx};
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  throw Error(ErrorKind::kInfeasible, "no cover exists");
}

MatrixStats ComputeMatrixStats(const ScpInstance& instance) {
  MatrixStats stats;
  stats.rows = instance.row_count();
  stats.cols = instance.col_count();
  stats.nnz = instance.nnz();
  const double cells = static_cast<double>(stats.rows) * stats.cols;
  stats.density = cells > 0 ? static_cast<double>(stats.nnz) / cells : 0.0;
  stats.avg_nnz_per_row =
      stats.rows > 0 ? static_cast<double>(stats.nnz) / stats.rows : 0.0;
  return stats;
}

}  // namespace parkcover
