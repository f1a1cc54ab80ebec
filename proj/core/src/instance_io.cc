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
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "parkcover/error.h"
#include "parkcover/scp_instance.h"

namespace parkcover {

void WriteInstance(const ScpInstance& instance,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write instance {}", path.string()));
  }
  out << instance.row_count() << ' ' << instance.col_count() << ' '
      << instance.nnz() << '\n';
  std::string line;
  for (int r = 0; r < instance.row_count(); ++r) {
    line.clear();
    for (int c : instance.Row(r)) {
      if (!line.empty()) line += ' ';
      line += std::to_string(c);
    }
    out << line << '\n';
  }
}

void WriteInstanceMeta(const ScpInstance& instance,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write metadata {}", path.string()));
  }
  out << "kind,index,street_id,interval_index,trip_id\n";
  if (instance.has_row_meta()) {
    for (int r = 0; r < instance.row_count(); ++r) {
      const RowMeta& m = instance.row_meta()[r];
      out << "row," << r << ',' << m.street_id << ',' << m.interval << ",\n";
    }
  }
  if (instance.has_col_meta()) {
    for (int c = 0; c < instance.col_count(); ++c) {
      out << "col," << c << ",,," << instance.col_trip_ids()[c] << '\n';
    }
  }
  for (int trip : instance.pruned_trip_ids()) {
    out << "pruned,,,," << trip << '\n';
  }
}

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int ParseInt(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: expected an integer, got '{}'", where, s));
  }
}

}  // namespace

ScpInstance ReadInstance(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& meta_path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open instance {}", path.string()));
  }
  std::string line;
  long long m = -1, n = -1, nnz = -1;
  if (!std::getline(in, line) ||
      !(std::istringstream(line) >> m >> n >> nnz) || m < 0 || n < 0 ||
      nnz < 0) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}:1: expected header 'm n nnz'", path.string()));
  }
  std::vector<std::vector<int>> rows;
  rows.reserve(m);
  long long seen = 0;
  for (long long r = 0; r < m; ++r) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}: expected {} rows, found {}", path.string(),
                              m, r));
    }
    std::istringstream cols(line);
    std::vector<int> row;
    long long c;
    while (cols >> c) {
      if (c < 0 || c >= n) {
        throw Error(ErrorKind::kParse,
                    fmt::format("{}:{}: column {} outside [0, {})",
                                path.string(), r + 2, c, n));
      }
      if (!row.empty() && c <= row.back()) {
        throw Error(ErrorKind::kParse,
                    fmt::format("{}:{}: column indices must be strictly "
                                "increasing",
                                path.string(), r + 2));
      }
      row.push_back(static_cast<int>(c));
    }
    if (!cols.eof()) {
      throw Error(ErrorKind::kParse,
                  fmt::format("{}:{}: malformed row", path.string(), r + 2));
    }
    seen += static_cast<long long>(row.size());
    rows.push_back(std::move(row));
  }
  if (seen != nnz) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: header declares {} nonzeros, found {}",
                            path.string(), nnz, seen));
  }

  std::vector<RowMeta> row_meta;
  std::vector<int> col_trips;
  std::vector<int> pruned;
  if (meta_path) {
    std::ifstream meta(*meta_path);
    if (!meta) {
      throw Error(ErrorKind::kIo, fmt::format("cannot open metadata {}",
                                              meta_path->string()));
    }
    int line_no = 0;
    std::vector<char> row_seen(m, 0), col_seen(n, 0);
    row_meta.assign(m, RowMeta{});
    col_trips.assign(n, -1);
    while (std::getline(meta, line)) {
      ++line_no;
      if (line_no == 1 || line.empty()) continue;
      const auto f = SplitCsv(line);
      const std::string where =
          fmt::format("{}:{}", meta_path->string(), line_no);
      if (f.size() != 5) {
        throw Error(ErrorKind::kParse, where + ": expected 5 fields");
      }
      if (f[0] == "row") {
        const int r = ParseInt(f[1], where);
        if (r < 0 || r >= m) throw Error(ErrorKind::kParse, where + ": bad row");
        row_meta[r] = {ParseInt(f[2], where), ParseInt(f[3], where)};
        row_seen[r] = 1;
      } else if (f[0] == "col") {
        const int c = ParseInt(f[1], where);
        if (c < 0 || c >= n) throw Error(ErrorKind::kParse, where + ": bad col");
        col_trips[c] = ParseInt(f[4], where);
        col_seen[c] = 1;
      } else if (f[0] == "pruned") {
        pruned.push_back(ParseInt(f[4], where));
      } else {
        throw Error(ErrorKind::kParse, where + ": unknown kind '" + f[0] + "'");
      }
    }
    if (std::find(row_seen.begin(), row_seen.end(), 0) != row_seen.end()) {
      row_meta.clear();
    }
    if (std::find(col_seen.begin(), col_seen.end(), 0) != col_seen.end()) {
      col_trips.clear();
    }
  }
  ScpInstance instance(static_cast<int>(n), std::move(rows),
                       std::move(row_meta), std::move(col_trips));
  instance.set_pruned_trip_ids(std::move(pruned));
  return instance;
}

}  // namespace parkcover
