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

#ifndef PARKCOVER_SCP_INSTANCE_H_
#define PARKCOVER_SCP_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "parkcover/city_model.h"
#include "parkcover/trajectory.h"

namespace parkcover {

struct RowMeta {
  int street_id = -1;
  int interval = -1;

  friend bool operator==(const RowMeta&, const RowMeta&) = default;
};

// A uni-cost set-covering instance  min 1'x  s.t.  A x >= 1,  x binary.
//
// A is stored as a 0/1 matrix in compressed row form (sorted, duplicate-free
// column indices per row) with a matching compressed column view. Immutable.
class ScpInstance {
 public:
  ScpInstance() = default;
  // Throws kIntegrity if an index is out of range. Rows are sorted and
  // de-duplicated. Metadata vectors may be empty (no metadata) or sized
  // m and n respectively.
  ScpInstance(int col_count, std::vector<std::vector<int>> rows,
              std::vector<RowMeta> row_meta = {},
              std::vector<int> col_trip_ids = {});

  int row_count() const { return static_cast<int>(row_offsets_.size()) - 1; }
  int col_count() const { return col_count_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(row_cols_.size()); }

  std::span<const int> Row(int r) const {
    return {row_cols_.data() + row_offsets_[r],
            row_cols_.data() + row_offsets_[r + 1]};
  }
  std::span<const int> Column(int c) const {
    return {col_rows_.data() + col_offsets_[c],
            col_rows_.data() + col_offsets_[c + 1]};
  }
  int RowSize(int r) const {
    return static_cast<int>(row_offsets_[r + 1] - row_offsets_[r]);
  }
  int ColumnSize(int c) const {
    return static_cast<int>(col_offsets_[c + 1] - col_offsets_[c]);
  }

  bool has_row_meta() const { return !row_meta_.empty(); }
  bool has_col_meta() const { return !col_trip_ids_.empty(); }
  const std::vector<RowMeta>& row_meta() const { return row_meta_; }
  const std::vector<int>& col_trip_ids() const { return col_trip_ids_; }

  // Trips dropped at assembly because they cover no row.
  const std::vector<int>& pruned_trip_ids() const { return pruned_trip_ids_; }
  void set_pruned_trip_ids(std::vector<int> ids) {
    pruned_trip_ids_ = std::move(ids);
  }

  // Rows without any nonzero.
  std::vector<int> EmptyRows() const;

 private:
  int col_count_ = 0;
  std::vector<std::int64_t> row_offsets_{0};
  std::vector<int> row_cols_;
  std::vector<std::int64_t> col_offsets_{0};
  std::vector<int> col_rows_;
  std::vector<RowMeta> row_meta_;
  std::vector<int> col_trip_ids_;
  std::vector<int> pruned_trip_ids_;
};

// Chosen column indices, sorted and unique; objective = cardinality.
struct Selection {
  std::vector<int> chosen;

  int objective() const { return static_cast<int>(chosen.size()); }
  static Selection FromColumns(std::vector<int> columns);

  friend bool operator==(const Selection&, const Selection&) = default;
};

// One row per (street, interval), street-major; columns are the trips that
// cover at least one row. Throws kInfeasible listing every (street, interval)
// pair that no trip covers.
ScpInstance AssembleInstance(const CoverageSet& coverage, const TimeGrid& grid,
                             std::span<const BusTrip> trips);

// The sub-instance over `rows` (original indices, kept in the given order).
// Columns are never dropped, so a selection keeps its meaning.
ScpInstance RestrictRows(const ScpInstance& instance, std::span<const int> rows);

struct FeasibilityReport {
  bool feasible = false;
  std::vector<int> violated_rows;
};

FeasibilityReport IsFeasible(const ScpInstance& instance,
                             const Selection& selection);

// Repeatedly takes the column covering the most uncovered rows, lowest index
// on ties. Throws kInfeasible on an instance with an empty row.
Selection GreedyCover(const ScpInstance& instance);

inline constexpr int kBruteForceMaxColumns = 25;

// Minimum-cardinality cover by enumeration; lexicographically smallest among
// ties. Refuses (kInvalidArgument) above kBruteForceMaxColumns columns.
Selection BruteForceOptimum(const ScpInstance& instance);

struct MatrixStats {
  double density = 0.0;
  double avg_nnz_per_row = 0.0;
  int rows = 0;
  int cols = 0;
  std::int64_t nnz = 0;
};

MatrixStats ComputeMatrixStats(const ScpInstance& instance);

// Sparse text format: header "m n nnz", then one line per row with its sorted
// column indices separated by spaces.
void WriteInstance(const ScpInstance& instance,
                   const std::filesystem::path& path);
// Metadata sidecar CSV: kind,index,street_id,interval_index,trip_id with
// kind = row | col.
void WriteInstanceMeta(const ScpInstance& instance,
                       const std::filesystem::path& path);
// Reads the matrix and, if `meta_path` is given, the sidecar.
ScpInstance ReadInstance(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& meta_path =
                             std::nullopt);

}  // namespace parkcover

#endif  // PARKCOVER_SCP_INSTANCE_H_
