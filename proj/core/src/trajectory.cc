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

#include "parkcover/trajectory.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <fmt/format.h>

#include "parkcover/error.h"

namespace parkcover {

TimeGrid BuildTimeGrid(Minutes active_start, Minutes active_end,
                       Minutes period_T) {
  if (!(active_start < active_end)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("active period start {} must precede end {}",
                            active_start, active_end));
  }
  if (!(period_T > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("T must be positive, got {}", period_T));
  }
  const Minutes span = active_end - active_start;
  const double q_exact = 2.0 * span / period_T;
  const double q_round = std::round(q_exact);
  if (std::abs(q_exact - q_round) > 1e-9 || q_round < 1.0) {
    const double below = std::max(1.0, std::floor(q_exact));
    const double above = std::ceil(q_exact);
    const Minutes t_below = 2.0 * span / below;  // fewer, longer intervals
    const Minutes t_above = 2.0 * span / above;
    const Minutes nearest =
        std::abs(t_below - period_T) <= std::abs(t_above - period_T) ? t_below
                                                                     : t_above;
    throw Error(ErrorKind::kGrid,
                fmt::format("2 * ({} - {}) = {} is not divisible by T = {}; "
                            "nearest valid T is {}",
                            active_end, active_start, 2.0 * span, period_T,
                            nearest));
  }
  TimeGrid grid;
  grid.period_T = period_T;
  grid.active = {active_start, active_end};
  grid.interval_count = static_cast<int>(q_round);
  grid.interval_duration = period_T / 2.0;
  grid.intervals.reserve(grid.interval_count);
  for (int t = 0; t < grid.interval_count; ++t) {
    grid.intervals.push_back({active_start + t * grid.interval_duration,
                              active_start + (t + 1) * grid.interval_duration});
  }
  grid.intervals.back().end = active_end;
  return grid;
}

std::vector<TraversalSpan> TripTraversalSpans(const BusTrip& trip,
                                              const StreetNetwork& network,
                                              const BusRoute& route) {
  if (!(trip.speed_kmh > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("trip {} has non-positive speed", trip.id));
  }
  // km/h -> metres per minute.
  const double metres_per_minute = trip.speed_kmh * 1000.0 / 60.0;
  std::vector<TraversalSpan> spans;
  spans.reserve(route.path.size());
  double travelled_m = 0.0;
  for (int street_id : route.path) {
    const double enter = trip.departure + travelled_m / metres_per_minute;
    travelled_m += network.ById(street_id).length_m;
    const double exit = trip.departure + travelled_m / metres_per_minute;
    spans.push_back({street_id, enter, exit});
  }
  return spans;
}

std::vector<TraversalSpan> TripTraversalSpans(const BusTrip& trip,
                                              const CityScenario& scenario) {
  return TripTraversalSpans(trip, scenario.network(),
                            scenario.RouteById(trip.route_id));
}

std::pair<int, int> OverlappedIntervals(const TimeGrid& grid, Minutes enter,
                                        Minutes exit) {
  const Minutes lo = std::max(enter, grid.active.start);
  const Minutes hi = std::min(exit, grid.active.end);
  if (hi - lo <= kTimeEpsilon) return {0, 0};
  const double w = grid.interval_duration;
  int first = static_cast<int>(std::floor((lo - grid.active.start) / w));
  int last = static_cast<int>(std::ceil((hi - grid.active.start) / w));
  first = std::clamp(first, 0, grid.interval_count);
  last = std::clamp(last, 0, grid.interval_count);
  // Drop intervals that are only touched at an edge.
  while (first < last &&
         std::min(hi, grid.intervals[first].end) -
                 std::max(lo, grid.intervals[first].start) <=
             kTimeEpsilon) {
    ++first;
  }
  while (last > first &&
         std::min(hi, grid.intervals[last - 1].end) -
                 std::max(lo, grid.intervals[last - 1].start) <=
             kTimeEpsilon) {
    --last;
  }
  return {first, last};
}

CoverageSet::CoverageSet(std::vector<int> street_ids, int interval_count,
                         std::vector<std::vector<int>> cells)
    : street_ids_(std::move(street_ids)),
      interval_count_(interval_count),
      cells_(std::move(cells)) {
  if (cells_.size() != street_ids_.size() * static_cast<size_t>(interval_count_)) {
    throw Error(ErrorKind::kIntegrity, "coverage cell count mismatch");
  }
  for (auto& cell : cells_) {
    std::sort(cell.begin(), cell.end());
    cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
  }
}

size_t CoverageSet::membership_count() const {
  size_t total = 0;
  for (const auto& c : cells_) total += c.size();
  return total;
}

namespace {

void CoverTrips(const CityScenario& scenario, const TimeGrid& grid,
                size_t begin, size_t end,
                std::vector<std::vector<int>>& cells) {
  const int q = grid.interval_count;
  const StreetNetwork& network = scenario.network();
  for (size_t i = begin; i < end; ++i) {
    const BusTrip& trip = scenario.trips()[i];
    for (const TraversalSpan& span : TripTraversalSpans(trip, scenario)) {
      const auto [first, last] = OverlappedIntervals(grid, span.enter, span.exit);
      const size_t street = network.IndexOf(span.street_id);
      for (int t = first; t < last; ++t) {
        cells[street * q + t].push_back(trip.id);
      }
    }
  }
}

}  // namespace

CoverageSet BuildCoverage(const CityScenario& scenario, const TimeGrid& grid,
                          int threads) {
  const size_t cell_count =
      scenario.network().size() * static_cast<size_t>(grid.interval_count);
  const size_t trip_count = scenario.trips().size();
  threads = std::clamp<int>(threads, 1,
                            static_cast<int>(std::max<size_t>(1, trip_count)));

  std::vector<std::vector<int>> cells(cell_count);
  if (threads == 1) {
    CoverTrips(scenario, grid, 0, trip_count, cells);
  } else {
    std::vector<std::vector<std::vector<int>>> partial(
        threads, std::vector<std::vector<int>>(cell_count));
    std::vector<std::thread> workers;
    for (int w = 0; w < threads; ++w) {
      const size_t begin = trip_count * w / threads;
      const size_t end = trip_count * (w + 1) / threads;
      workers.emplace_back([&, w, begin, end] {
        CoverTrips(scenario, grid, begin, end, partial[w]);
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& part : partial) {
      for (size_t c = 0; c < cell_count; ++c) {
        cells[c].insert(cells[c].end(), part[c].begin(), part[c].end());
      }
    }
  }

  std::vector<int> ids;
  ids.reserve(scenario.network().size());
  for (const Street& s : scenario.network().streets()) ids.push_back(s.id);
  return CoverageSet(std::move(ids), grid.interval_count, std::move(cells));
}

Minutes MaxDetectionGap(std::span<const Minutes> detection_times,
                        Minutes active_start, Minutes active_end) {
  if (detection_times.empty()) return active_end - active_start;
  Minutes gap = detection_times.front() - active_start;
  for (size_t i = 1; i < detection_times.size(); ++i) {
    gap = std::max(gap, detection_times[i] - detection_times[i - 1]);
  }
  return std::max(gap, active_end - detection_times.back());
}

void WriteCoverageCsv(const CoverageSet& coverage,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write coverage file {}", path.string()));
  }
  out << "street_id,interval_index,trip_id\n";
  for (int j = 0; j < coverage.street_count(); ++j) {
    for (int t = 0; t < coverage.interval_count(); ++t) {
      for (int trip : coverage.Trips(j, t)) {
        out << coverage.street_ids()[j] << ',' << t << ',' << trip << '\n';
      }
    }
  }
}

}  // namespace parkcover
