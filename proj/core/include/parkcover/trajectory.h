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

#ifndef PARKCOVER_TRAJECTORY_H_
#define PARKCOVER_TRAJECTORY_H_

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "parkcover/city_model.h"

namespace parkcover {

// Two overlaps shorter than this (in minutes) are treated as touching only.
inline constexpr Minutes kTimeEpsilon = 1e-9;

struct TimeWindow {
  Minutes start = 0.0;
  Minutes end = 0.0;  // exclusive
};

// The active period cut into q = 2 (end - start) / T windows of T/2 minutes.
struct TimeGrid {
  Minutes period_T = 0.0;
  ActivePeriod active;
  int interval_count = 0;
  Minutes interval_duration = 0.0;
  std::vector<TimeWindow> intervals;
};

// Throws kGrid when 2 (end - start) is not a multiple of T; the message names
// the nearest T that would tile the period.
TimeGrid BuildTimeGrid(Minutes active_start, Minutes active_end,
                       Minutes period_T);
inline TimeGrid BuildTimeGrid(const CityScenario& scenario) {
  return BuildTimeGrid(scenario.active().start, scenario.active().end,
                       scenario.period_T());
}

struct TraversalSpan {
  int street_id = 0;
  Minutes enter = 0.0;
  Minutes exit = 0.0;
};

// Constant-speed traversal of the trip's route from its departure time.
std::vector<TraversalSpan> TripTraversalSpans(const BusTrip& trip,
                                              const StreetNetwork& network,
                                              const BusRoute& route);
std::vector<TraversalSpan> TripTraversalSpans(const BusTrip& trip,
                                              const CityScenario& scenario);

// Indices t of the grid intervals that [enter, exit) overlaps with positive
// measure, as a half-open range [first, last).
std::pair<int, int> OverlappedIntervals(const TimeGrid& grid, Minutes enter,
                                        Minutes exit);

// For every (street, interval) cell the sorted, duplicate-free ids of the
// trips that pass the street during the interval. Cells are laid out
// street-major in network order: cell = street_index * q + t.
class CoverageSet {
 public:
  CoverageSet() = default;
  CoverageSet(std::vector<int> street_ids, int interval_count,
              std::vector<std::vector<int>> cells);

  int street_count() const { return static_cast<int>(street_ids_.size()); }
  int interval_count() const { return interval_count_; }
  const std::vector<int>& street_ids() const { return street_ids_; }

  std::span<const int> Trips(int street_index, int interval) const {
    return cells_[static_cast<size_t>(street_index) * interval_count_ +
                  interval];
  }
  size_t membership_count() const;

  friend bool operator==(const CoverageSet&, const CoverageSet&) = default;

 private:
  std::vector<int> street_ids_;
  int interval_count_ = 0;
  std::vector<std::vector<int>> cells_;
};

// Trips are processed in `threads` contiguous chunks and merged; the result
// does not depend on the thread count or the order of trips.
CoverageSet BuildCoverage(const CityScenario& scenario, const TimeGrid& grid,
                          int threads = 1);

// Longest stretch without a detection, counting the lead-in from
// active_start and the tail to active_end.
Minutes MaxDetectionGap(std::span<const Minutes> detection_times,
                        Minutes active_start, Minutes active_end);

// CSV with header street_id,interval_index,trip_id; one row per membership.
void WriteCoverageCsv(const CoverageSet& coverage,
                      const std::filesystem::path& path);

}  // namespace parkcover

#endif  // PARKCOVER_TRAJECTORY_H_
