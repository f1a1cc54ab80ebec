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

#ifndef PARKCOVER_CITY_MODEL_H_
#define PARKCOVER_CITY_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parkcover {

// Minutes since midnight. Fractional values are meaningful: a 500 m street at
// 30 km/h takes exactly one minute.
using Minutes = double;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Street {
  int id = 0;
  double length_m = 0.0;
  std::optional<std::array<Point, 2>> endpoints;
  int parking_spots = 0;

  friend bool operator==(const Street&, const Street&) = default;
};

// Streets plus the "shares an endpoint" relation.
//
// When every street carries endpoints, adjacency and junctions are derived
// from exact coordinate matches. Otherwise the network has no geometry and
// adjacency is unknown; route paths are then taken as declared.
class StreetNetwork {
 public:
  StreetNetwork() = default;
  explicit StreetNetwork(std::vector<Street> streets);

  const std::vector<Street>& streets() const { return streets_; }
  size_t size() const { return streets_.size(); }
  bool empty() const { return streets_.empty(); }

  bool Contains(int street_id) const { return index_.contains(street_id); }
  // Position of `street_id` in streets(). Throws kIntegrity when missing.
  size_t IndexOf(int street_id) const;
  const Street& ById(int street_id) const { return streets_[IndexOf(street_id)]; }

  bool adjacency_known() const { return adjacency_known_; }
  // Sorted ids of streets sharing an endpoint with streets()[index].
  std::span<const int> Neighbors(size_t index) const { return adjacency_[index]; }
  bool Adjacent(int street_a, int street_b) const;

  // Junction ids of both ends of streets()[index]; only with geometry.
  std::array<int, 2> JunctionsOf(size_t index) const { return junctions_[index]; }
  // Indices of the streets meeting at `junction`.
  std::span<const int> StreetsAt(int junction) const {
    return incident_[junction];
  }
  int junction_count() const { return static_cast<int>(incident_.size()); }

 private:
  std::vector<Street> streets_;
  std::unordered_map<int, size_t> index_;
  bool adjacency_known_ = false;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::array<int, 2>> junctions_;
  std::vector<std::vector<int>> incident_;
};

struct BusRoute {
  int id = 0;
  std::vector<int> path;  // street ids, in travel order

  friend bool operator==(const BusRoute&, const BusRoute&) = default;
};

struct BusTrip {
  int id = 0;
  int route_id = 0;
  Minutes departure = 0.0;
  double speed_kmh = 0.0;

  friend bool operator==(const BusTrip&, const BusTrip&) = default;
};

struct ActivePeriod {
  Minutes start = 0.0;
  Minutes end = 0.0;

  friend bool operator==(const ActivePeriod&, const ActivePeriod&) = default;
};

// The world the optimizer covers. Validated on construction and immutable.
class CityScenario {
 public:
  CityScenario(StreetNetwork network, std::vector<BusRoute> routes,
               std::vector<BusTrip> trips, ActivePeriod active,
               Minutes period_T);

  const StreetNetwork& network() const { return network_; }
  const std::vector<BusRoute>& routes() const { return routes_; }
  const std::vector<BusTrip>& trips() const { return trips_; }
  ActivePeriod active() const { return active_; }
  Minutes period_T() const { return period_T_; }

  const BusRoute& RouteById(int route_id) const;
  const BusTrip& TripById(int trip_id) const;
  bool HasTrip(int trip_id) const { return trip_index_.contains(trip_id); }

  friend bool operator==(const CityScenario& a, const CityScenario& b);

 private:
  StreetNetwork network_;
  std::vector<BusRoute> routes_;
  std::vector<BusTrip> trips_;
  ActivePeriod active_;
  Minutes period_T_;
  std::unordered_map<int, size_t> route_index_;
  std::unordered_map<int, size_t> trip_index_;
};

// Rectangular grid of junctions; every grid edge is one street.
// The seed only drives the per-street parking spot counts.
StreetNetwork GenerateGridCity(int grid_rows, int grid_cols,
                               double street_length_m, std::uint64_t seed);

// `route_count` self-avoiding walks (no street used twice) of exactly
// `route_length` streets each, restarting on dead ends.
std::vector<BusRoute> GenerateRoutes(const StreetNetwork& network,
                                     int route_count, int route_length,
                                     std::uint64_t seed);

// Trips departing at first_departure + k * headway, k = 0..trips_per_route-1.
// Trip ids are route_position * trips_per_route + k.
std::vector<BusTrip> ExpandTrips(std::span<const BusRoute> routes,
                                 int trips_per_route, Minutes headway,
                                 Minutes first_departure, double speed_kmh);

// Same, with a per-route first departure.
std::vector<BusTrip> ExpandTrips(std::span<const BusRoute> routes,
                                 int trips_per_route, Minutes headway,
                                 std::span<const Minutes> first_departures,
                                 double speed_kmh);

double RouteLengthMeters(const StreetNetwork& network, const BusRoute& route);

// Spreads the per-route departure blocks evenly over the active period so
// that the fleet is on the road from active.start to active.end. Block
// starts are evenly spaced over
//   [active.start - mean route duration, active.end - (trips_per_route-1)*headway]
// and assigned to routes in a seeded random order.
std::vector<Minutes> StaggerRouteDepartures(const StreetNetwork& network,
                                            std::span<const BusRoute> routes,
                                            ActivePeriod active,
                                            int trips_per_route,
                                            Minutes headway, double speed_kmh,
                                            std::uint64_t seed);

// StaggerRouteDepartures followed by a repair pass: two routes exchange their
// block starts whenever that strictly reduces the number of (street, cell)
// pairs no trip reaches, with cells the consecutive windows of
// `cell_minutes` over the active period. Deterministic per seed.
std::vector<Minutes> BalanceRouteDepartures(const StreetNetwork& network,
                                            std::span<const BusRoute> routes,
                                            ActivePeriod active,
                                            int trips_per_route,
                                            Minutes headway, double speed_kmh,
                                            Minutes cell_minutes,
                                            std::uint64_t seed);

enum class DepartureMode {
  kBalanced,   // BalanceRouteDepartures over T/2 cells
  kStaggered,  // StaggerRouteDepartures
  kUniform,    // every route starts at first_departure
};

std::string_view DepartureModeName(DepartureMode mode);
DepartureMode ParseDepartureMode(std::string_view text);

// Everything needed to synthesize a scenario. The defaults are the full
// evaluation city: 420 streets, 400 routes of 140 streets, 12 trips each.
struct ScenarioParams {
  int grid_rows = 15;
  int grid_cols = 15;
  double street_length_m = 500.0;
  int route_count = 400;
  int route_length = 140;
  int trips_per_route = 12;
  Minutes headway = 5.0;
  double speed_kmh = 30.0;
  ActivePeriod active{360.0, 1140.0};
  Minutes period_T = 30.0;
  DepartureMode departures = DepartureMode::kBalanced;
  Minutes first_departure = 360.0;  // kUniform only
  std::uint64_t seed = 1;
};

// Grid, routes, departures and trips, all drawn from params.seed.
CityScenario GenerateScenario(const ScenarioParams& params);

// Scenario files (JSON). See README for the schema.
std::string ScenarioToJson(const CityScenario& scenario);
CityScenario ScenarioFromJson(std::string_view text);
CityScenario LoadScenario(const std::filesystem::path& path);
void SaveScenario(const CityScenario& scenario,
                  const std::filesystem::path& path);

struct ChangeSample {
  Minutes minute = 0.0;
  double avg_changes = 0.0;
};

// Two-column CSV (minute_of_day, avg_changes); a non-numeric first line is
// treated as a header.
std::vector<ChangeSample> LoadChangeSeries(const std::filesystem::path& path);

inline constexpr double kDefaultActivityThreshold = 0.25;

// Smallest window containing every sample whose value is at least
// threshold_fraction * max(series).
ActivePeriod DetectActivePeriod(std::span<const ChangeSample> series,
                                double threshold_fraction =
                                    kDefaultActivityThreshold);

}  // namespace parkcover

#endif  // PARKCOVER_CITY_MODEL_H_
