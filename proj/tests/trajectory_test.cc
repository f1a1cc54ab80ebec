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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parkcover/error.h"

namespace parkcover {
namespace {

TEST(TimeGridTest, FiftyTwoQuarterHours) {
  const TimeGrid g = BuildTimeGrid(360, 1140, 30);
  EXPECT_EQ(g.interval_count, 52);
  EXPECT_DOUBLE_EQ(g.interval_duration, 15.0);
}

TEST(TimeGridTest, SmallGrids) {
  const TimeGrid a = BuildTimeGrid(0, 60, 60);
  EXPECT_EQ(a.interval_count, 2);
  EXPECT_DOUBLE_EQ(a.interval_duration, 30.0);
  const TimeGrid b = BuildTimeGrid(480, 540, 20);
  EXPECT_EQ(b.interval_count, 6);
  EXPECT_DOUBLE_EQ(b.interval_duration, 10.0);
}

TEST(TimeGridTest, IntervalsTileThePeriod) {
  const TimeGrid g = BuildTimeGrid(360, 1140, 30);
  ASSERT_EQ(g.intervals.size(), 52u);
  EXPECT_DOUBLE_EQ(g.intervals.front().start, 360.0);
  EXPECT_DOUBLE_EQ(g.intervals.back().end, 1140.0);
  for (size_t t = 1; t < g.intervals.size(); ++t) {
    EXPECT_DOUBLE_EQ(g.intervals[t].start, g.intervals[t - 1].end);
    EXPECT_DOUBLE_EQ(g.intervals[t].end - g.intervals[t].start, 15.0);
  }
}

TEST(TimeGridTest, NonDividingPeriodSuggestsNearestT) {
  try {
    BuildTimeGrid(360, 1140, 37);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGrid);
    EXPECT_NE(std::string(e.what()).find("nearest valid T"),
              std::string::npos);
  }
  EXPECT_THROW(BuildTimeGrid(600, 600, 30), Error);
  EXPECT_THROW(BuildTimeGrid(360, 1140, 0), Error);
}

// Three 500 m streets in a row.
CityScenario ThreeStreetScenario(double speed, double departure) {
  StreetNetwork net(std::vector<Street>{
      {0, 500, std::array<Point, 2>{Point{0, 0}, Point{500, 0}}, 1},
      {1, 500, std::array<Point, 2>{Point{500, 0}, Point{1000, 0}}, 1},
      {2, 500, std::array<Point, 2>{Point{1000, 0}, Point{1500, 0}}, 1}});
  return CityScenario(std::move(net), {{0, {0, 1, 2}}},
                      {{0, 0, departure, speed}}, {360, 1140}, 30);
}

TEST(TraversalTest, ThreeStreetsAtThirtyKmh) {
  const CityScenario s = ThreeStreetScenario(30, 360);
  const auto spans = TripTraversalSpans(s.trips()[0], s);
  ASSERT_EQ(spans.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(spans[k].street_id, k);
    EXPECT_NEAR(spans[k].enter, 360.0 + k, 1e-9);
    EXPECT_NEAR(spans[k].exit, 361.0 + k, 1e-9);
  }
}

TEST(TraversalTest, SingleStreetSpanIsLengthOverSpeed) {
  StreetNetwork net(std::vector<Street>{{4, 750, std::nullopt, 0}});
  const CityScenario s(std::move(net), {{1, {4}}}, {{0, 1, 400, 45}},
                       {360, 1140}, 30);
  const auto spans = TripTraversalSpans(s.trips()[0], s);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_NEAR(spans[0].exit - spans[0].enter, 0.75 / 45.0 * 60.0, 1e-12);
}

TEST(TraversalTest, DoublingSpeedHalvesSpans) {
  const auto slow = TripTraversalSpans(ThreeStreetScenario(20, 400).trips()[0],
                                       ThreeStreetScenario(20, 400));
  const auto fast = TripTraversalSpans(ThreeStreetScenario(40, 400).trips()[0],
                                       ThreeStreetScenario(40, 400));
  ASSERT_EQ(slow.size(), fast.size());
  for (size_t k = 0; k < slow.size(); ++k) {
    EXPECT_NEAR(fast[k].exit - fast[k].enter,
                (slow[k].exit - slow[k].enter) / 2.0, 1e-12);
  }
}

TEST(TraversalTest, SpansAreContiguousAndIncreasing) {
  ScenarioParams p;
  p.grid_rows = p.grid_cols = 5;
  p.route_count = 10;
  p.route_length = 12;
  p.trips_per_route = 2;
  const CityScenario s = GenerateScenario(p);
  for (const BusTrip& trip : s.trips()) {
    const auto spans = TripTraversalSpans(trip, s);
    ASSERT_FALSE(spans.empty());
    EXPECT_DOUBLE_EQ(spans.front().enter, trip.departure);
    for (size_t k = 0; k < spans.size(); ++k) {
      EXPECT_LT(spans[k].enter, spans[k].exit);
      if (k > 0) EXPECT_DOUBLE_EQ(spans[k].enter, spans[k - 1].exit);
    }
  }
}

TEST(OverlapTest, BoundaryCrossingSpanCountsTwice) {
  const TimeGrid g = BuildTimeGrid(360, 1140, 30);
  const auto [first, last] = OverlappedIntervals(g, 374, 376);
  EXPECT_EQ(first, 0);
  EXPECT_EQ(last, 2);
}

TEST(OverlapTest, TouchingABoundaryDoesNotCount) {
  const TimeGrid g = BuildTimeGrid(360, 1140, 30);
  auto [first, last] = OverlappedIntervals(g, 370, 375);
  EXPECT_EQ(first, 0);
  EXPECT_EQ(last, 1);
  std::tie(first, last) = OverlappedIntervals(g, 300, 360);
  EXPECT_EQ(first, last);
  std::tie(first, last) = OverlappedIntervals(g, 1140, 1200);
  EXPECT_EQ(first, last);
}

TEST(CoverageTest, ThreeStreetTripLandsInIntervalZero) {
  const CityScenario s = ThreeStreetScenario(30, 360);
  const CoverageSet cov = BuildCoverage(s, BuildTimeGrid(s));
  for (int j = 0; j < 3; ++j) {
    for (int t = 0; t < cov.interval_count(); ++t) {
      EXPECT_EQ(cov.Trips(j, t).size(), t == 0 ? 1u : 0u)
          << "street " << j << " interval " << t;
    }
  }
}

TEST(CoverageTest, TripOutsideActivePeriodIsNowhere) {
  const CityScenario s = ThreeStreetScenario(30, 1200);
  EXPECT_EQ(BuildCoverage(s, BuildTimeGrid(s)).membership_count(), 0u);
}

TEST(CoverageTest, MatchesSecondBySecondSampling) {
  ScenarioParams p;
  p.grid_rows = p.grid_cols = 4;
  p.route_count = 12;
  p.route_length = 10;
  p.trips_per_route = 4;
  p.seed = 5;
  const CityScenario s = GenerateScenario(p);
  const TimeGrid grid = BuildTimeGrid(s);
  const CoverageSet cov = BuildCoverage(s, grid);
  std::set<std::tuple<int, int, int>> from_library;
  for (int j = 0; j < cov.street_count(); ++j) {
    for (int t = 0; t < cov.interval_count(); ++t) {
      for (int trip : cov.Trips(j, t)) from_library.insert({j, t, trip});
    }
  }
  std::set<std::tuple<int, int, int>> sampled;
  for (const BusTrip& trip : s.trips()) {
    for (auto [j, t] : testing::SampledCells(s, trip)) {
      sampled.insert({j, t, trip.id});
    }
  }
  EXPECT_EQ(from_library, sampled);
}

TEST(CoverageTest, ThreadedAndTripOrderIndependent) {
  ScenarioParams p;
  p.grid_rows = p.grid_cols = 6;
  p.route_count = 30;
  p.route_length = 20;
  p.trips_per_route = 5;
  const CityScenario s = GenerateScenario(p);
  const TimeGrid grid = BuildTimeGrid(s);
  const CoverageSet base = BuildCoverage(s, grid, 1);
  EXPECT_EQ(BuildCoverage(s, grid, 4), base);

  std::vector<BusTrip> shuffled = s.trips();
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(3));
  const CityScenario reordered(s.network(), s.routes(), shuffled, s.active(),
                               s.period_T());
  EXPECT_EQ(BuildCoverage(reordered, grid, 2), base);
}

TEST(DetectionGapTest, EveryQuarterHour) {
  std::vector<Minutes> times;
  for (int m = 360; m <= 1140; m += 15) times.push_back(m);
  EXPECT_DOUBLE_EQ(MaxDetectionGap(times, 360, 1140), 15.0);
}

TEST(DetectionGapTest, EmptyIsWholePeriod) {
  EXPECT_DOUBLE_EQ(MaxDetectionGap({}, 360, 1140), 780.0);
}

TEST(DetectionGapTest, CountsLeadInAndTail) {
  const std::vector<Minutes> times = {400, 500};
  EXPECT_DOUBLE_EQ(MaxDetectionGap(times, 360, 1140), 640.0);
}

// One detection per half-period cell, placed uniformly in the cell, never
// leaves a gap longer than T.
TEST(DetectionGapTest, HalfPeriodCellsBoundTheGap) {
  std::mt19937_64 rng(2024);
  for (double T : {10.0, 20.0, 30.0, 60.0}) {
    const TimeGrid grid = BuildTimeGrid(360, 1140, T);
    int violations = 0;
    for (int trial = 0; trial < 2500; ++trial) {
      std::vector<Minutes> times;
      for (const TimeWindow& cell : grid.intervals) {
        std::uniform_real_distribution<double> in(cell.start, cell.end);
        const int count = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < count; ++k) times.push_back(in(rng));
      }
      std::sort(times.begin(), times.end());
      violations += MaxDetectionGap(times, 360, 1140) > T;
    }
    EXPECT_EQ(violations, 0) << "T = " << T;
  }
}

}  // namespace
}  // namespace parkcover
