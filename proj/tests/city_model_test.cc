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


#include "parkcover/city_model.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <unistd.h>

#include <gtest/gtest.h>

#include "parkcover/error.h"

namespace parkcover {
namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parkcover::Error thrown";
  return ErrorKind::kIo;
}

TEST(GridCityTest, SingleEdgeGrid) {
  const StreetNetwork net = GenerateGridCity(1, 2, 500, 3);
  ASSERT_EQ(net.size(), 1u);
  EXPECT_DOUBLE_EQ(net.streets()[0].length_m, 500.0);
}

TEST(GridCityTest, SquareHasFourStreets) {
  const StreetNetwork net = GenerateGridCity(2, 2, 500, 3);
  ASSERT_EQ(net.size(), 4u);
  // Each side of the square touches exactly the two sides it meets at a
  // corner.
  for (size_t i = 0; i < net.size(); ++i) {
    EXPECT_EQ(net.Neighbors(i).size(), 2u);
  }
}

TEST(GridCityTest, EvaluationCityHas420Streets) {
  EXPECT_EQ(GenerateGridCity(15, 15, 500, 7).size(), 420u);
}

TEST(GridCityTest, StreetCountMatchesEdgeFormula) {
  for (int r = 1; r <= 20; ++r) {
    for (int c = 1; c <= 20; ++c) {
      EXPECT_EQ(GenerateGridCity(r, c, 100, 1).size(),
                static_cast<size_t>(r * (c - 1) + c * (r - 1)))
          << r << "x" << c;
    }
  }
}

TEST(GridCityTest, AdjacencyIsSymmetricAndResolves) {
  const StreetNetwork net = GenerateGridCity(5, 4, 250, 9);
  for (size_t i = 0; i < net.size(); ++i) {
    const int id = net.streets()[i].id;
    for (int other : net.Neighbors(i)) {
      ASSERT_TRUE(net.Contains(other));
      EXPECT_TRUE(net.Adjacent(other, id));
    }
  }
}

TEST(GridCityTest, RejectsBadDimensions) {
  EXPECT_EQ(KindOf([] { GenerateGridCity(0, 3, 500, 1); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([] { GenerateGridCity(3, 3, 0, 1); }),
            ErrorKind::kInvalidArgument);
}

TEST(RoutesTest, ZeroRoutesIsEmpty) {
  EXPECT_TRUE(GenerateRoutes(GenerateGridCity(3, 3, 500, 1), 0, 4, 5).empty());
}

TEST(RoutesTest, FourHundredRoutesOfTwentyStreets) {
  const StreetNetwork net = GenerateGridCity(15, 15, 500, 7);
  const auto routes = GenerateRoutes(net, 400, 20, 11);
  ASSERT_EQ(routes.size(), 400u);
  for (const BusRoute& r : routes) EXPECT_EQ(r.path.size(), 20u);
}

TEST(RoutesTest, RoutesAreAdjacentWalksWithoutRepeats) {
  const StreetNetwork net = GenerateGridCity(15, 15, 500, 7);
  for (const BusRoute& r : GenerateRoutes(net, 400, 140, 2)) {
    ASSERT_EQ(r.path.size(), 140u);
    std::set<int> seen(r.path.begin(), r.path.end());
    EXPECT_EQ(seen.size(), r.path.size()) << "route " << r.id;
    for (size_t k = 1; k < r.path.size(); ++k) {
      ASSERT_TRUE(net.Adjacent(r.path[k - 1], r.path[k])) << "route " << r.id;
    }
  }
}

TEST(RoutesTest, DeterministicPerSeed) {
  const StreetNetwork net = GenerateGridCity(6, 6, 500, 1);
  EXPECT_EQ(GenerateRoutes(net, 30, 12, 99), GenerateRoutes(net, 30, 12, 99));
  EXPECT_NE(GenerateRoutes(net, 30, 12, 99), GenerateRoutes(net, 30, 12, 98));
}

TEST(RoutesTest, TooLongRouteNamesTheRoute) {
  const StreetNetwork net = GenerateGridCity(2, 2, 500, 1);
  try {
    GenerateRoutes(net, 1, 5, 1);
    FAIL() << "expected a generation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeneration);
    EXPECT_NE(std::string(e.what()).find("route 0"), std::string::npos)
        << e.what();
  }
}

TEST(TripsTest, FourThousandEightHundredTrips) {
  const StreetNetwork net = GenerateGridCity(15, 15, 500, 7);
  const auto routes = GenerateRoutes(net, 400, 20, 11);
  const auto trips = ExpandTrips(routes, 12, 5, 420, 30);
  ASSERT_EQ(trips.size(), 4800u);
  for (const BusRoute& r : routes) {
    double lo = 1e9, hi = -1e9;
    for (const BusTrip& t : trips) {
      if (t.route_id != r.id) continue;
      lo = std::min(lo, t.departure);
      hi = std::max(hi, t.departure);
    }
    EXPECT_DOUBLE_EQ(lo, 420.0);  // 7:00
    EXPECT_DOUBLE_EQ(hi, 475.0);  // 7:55
  }
}

TEST(TripsTest, SingleTrip) {
  const std::vector<BusRoute> routes = {{0, {0}}};
  const auto trips = ExpandTrips(routes, 1, 5, 360, 30);
  ASSERT_EQ(trips.size(), 1u);
  EXPECT_DOUBLE_EQ(trips[0].departure, 360.0);
}

TEST(TripsTest, ArithmeticProgression) {
  const std::vector<BusRoute> routes = {{0, {0}}};
  const auto trips = ExpandTrips(routes, 3, 10, 360, 30);
  ASSERT_EQ(trips.size(), 3u);
  EXPECT_DOUBLE_EQ(trips[0].departure, 360.0);
  EXPECT_DOUBLE_EQ(trips[1].departure, 370.0);
  EXPECT_DOUBLE_EQ(trips[2].departure, 380.0);
}

TEST(TripsTest, SizeIsRoutesTimesTrips) {
  const StreetNetwork net = GenerateGridCity(4, 4, 500, 1);
  const auto routes = GenerateRoutes(net, 7, 5, 3);
  for (int k = 1; k <= 6; ++k) {
    EXPECT_EQ(ExpandTrips(routes, k, 4, 360, 30).size(), 7u * k);
  }
}

TEST(TripsTest, RejectsBadParameters) {
  const std::vector<BusRoute> routes = {{0, {0}}};
  EXPECT_EQ(KindOf([&] { ExpandTrips(routes, 0, 5, 360, 30); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { ExpandTrips(routes, 2, -1, 360, 30); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { ExpandTrips(routes, 2, 5, 360, 0); }),
            ErrorKind::kInvalidArgument);
}

TEST(DeparturesTest, BalancedStartsStayInsideTheDay) {
  ScenarioParams p;
  p.grid_rows = p.grid_cols = 6;
  p.route_count = 40;
  p.route_length = 30;
  p.trips_per_route = 6;
  const CityScenario s = GenerateScenario(p);
  ASSERT_EQ(s.trips().size(), 240u);
  // Blocks may start up to one route duration early so buses are already
  // on the road at the start; every trip still reaches the active period.
  for (const BusTrip& t : s.trips()) {
    const double minutes =
        RouteLengthMeters(s.network(), s.RouteById(t.route_id)) /
        (t.speed_kmh * 1000.0 / 60.0);
    EXPECT_GE(t.departure + minutes, p.active.start);
    EXPECT_LE(t.departure, p.active.end);
  }
}

TEST(DeparturesTest, ModeNamesRoundTrip) {
  for (DepartureMode m : {DepartureMode::kBalanced, DepartureMode::kStaggered,
                          DepartureMode::kUniform}) {
    EXPECT_EQ(ParseDepartureMode(DepartureModeName(m)), m);
  }
  EXPECT_EQ(KindOf([] { ParseDepartureMode("random"); }),
            ErrorKind::kInvalidArgument);
}

class ScenarioFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("parkcover_city_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(ScenarioFileTest, RoundTripIsIdentity) {
  ScenarioParams p;
  p.grid_rows = p.grid_cols = 5;
  p.route_count = 12;
  p.route_length = 15;
  p.trips_per_route = 3;
  p.seed = 4;
  const CityScenario s = GenerateScenario(p);
  SaveScenario(s, dir_ / "s.json");
  const CityScenario back = LoadScenario(dir_ / "s.json");
  EXPECT_TRUE(back == s);
  EXPECT_EQ(ScenarioToJson(back), ScenarioToJson(s));
}

TEST_F(ScenarioFileTest, EvaluationScaleCounts) {
  const CityScenario s = GenerateScenario(ScenarioParams{});
  SaveScenario(s, dir_ / "full.json");
  const CityScenario back = LoadScenario(dir_ / "full.json");
  EXPECT_EQ(back.network().size(), 420u);
  EXPECT_EQ(back.routes().size(), 400u);
  EXPECT_EQ(back.trips().size(), 4800u);
}

TEST(ScenarioJsonTest, MissingStreetIsIntegrityError) {
  const std::string text = R"({
    "streets": [{"id": 0, "length_m": 100, "spots": 3}],
    "routes": [{"id": 0, "path": [0, 5]}],
    "trips": [],
    "active_period": {"start_min": 360, "end_min": 1140},
    "T_min": 30})";
  EXPECT_EQ(KindOf([&] { ScenarioFromJson(text); }), ErrorKind::kIntegrity);
}

TEST(ScenarioJsonTest, SchemaViolationIsParseError) {
  const std::string text = R"({"streets": [{"id": 0}], "routes": [],
    "trips": [], "active_period": {"start_min": 360, "end_min": 1140},
    "T_min": 30})";
  try {
    ScenarioFromJson(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("length_m"), std::string::npos)
        << e.what();
  }
}

TEST(ScenarioJsonTest, NonPositiveSpeedIsRejected) {
  const std::string text = R"({
    "streets": [{"id": 0, "length_m": 100, "spots": 3}],
    "routes": [{"id": 0, "path": [0]}],
    "trips": [{"id": 0, "route_id": 0, "departure_min": 360, "speed_kmh": 0}],
    "active_period": {"start_min": 360, "end_min": 1140},
    "T_min": 30})";
  EXPECT_THROW(ScenarioFromJson(text), Error);
}

std::vector<ChangeSample> StepSeries(double low, double high) {
  std::vector<ChangeSample> series;
  for (int m = 0; m < 24 * 60; m += 10) {
    series.push_back({static_cast<double>(m),
                      m >= 360 && m <= 1140 ? high : low});
  }
  return series;
}

TEST(ActivePeriodTest, StepSeries) {
  const ActivePeriod p = DetectActivePeriod(StepSeries(0, 8), 0.5);
  EXPECT_DOUBLE_EQ(p.start, 360.0);
  EXPECT_DOUBLE_EQ(p.end, 1140.0);
}

TEST(ActivePeriodTest, ConstantSeriesIsFullSpan) {
  const auto series = StepSeries(3, 3);
  const ActivePeriod p = DetectActivePeriod(series, 0.5);
  EXPECT_DOUBLE_EQ(p.start, series.front().minute);
  EXPECT_DOUBLE_EQ(p.end, series.back().minute);
}

TEST(ActivePeriodTest, AllZeroHasNoActivePeriod) {
  EXPECT_EQ(KindOf([] { DetectActivePeriod(StepSeries(0, 0), 0.5); }),
            ErrorKind::kNoActivePeriod);
}

}  // namespace
}  // namespace parkcover
