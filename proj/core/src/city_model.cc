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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "parkcover/error.h"
#include "random.h"

namespace parkcover {

using internal::Rng;
using internal::UniformIndex;

StreetNetwork::StreetNetwork(std::vector<Street> streets)
    : streets_(std::move(streets)) {
  index_.reserve(streets_.size());
  for (size_t i = 0; i < streets_.size(); ++i) {
    const Street& s = streets_[i];
    if (!(s.length_m > 0.0)) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("street {} has non-positive length {}", s.id,
                              s.length_m));
    }
    if (s.parking_spots < 0) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("street {} has negative parking_spots", s.id));
    }
    if (!index_.emplace(s.id, i).second) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("duplicate street id {}", s.id));
    }
  }

  adjacency_.assign(streets_.size(), {});
  adjacency_known_ =
      !streets_.empty() &&
      std::all_of(streets_.begin(), streets_.end(),
                  [](const Street& s) { return s.endpoints.has_value(); });
  if (!adjacency_known_) return;

  std::map<std::pair<double, double>, int> junction_of;
  junctions_.resize(streets_.size());
  for (size_t i = 0; i < streets_.size(); ++i) {
    for (int end = 0; end < 2; ++end) {
      const Point& p = (*streets_[i].endpoints)[end];
      auto [it, inserted] = junction_of.try_emplace(
          {p.x, p.y}, static_cast<int>(incident_.size()));
      if (inserted) incident_.emplace_back();
      junctions_[i][end] = it->second;
      incident_[it->second].push_back(static_cast<int>(i));
    }
  }
  for (auto& at : incident_) {
    at.erase(std::unique(at.begin(), at.end()), at.end());
    for (int a : at) {
      for (int b : at) {
        if (a != b) adjacency_[a].push_back(streets_[b].id);
      }
    }
  }
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

size_t StreetNetwork::IndexOf(int street_id) const {
  auto it = index_.find(street_id);
  if (it == index_.end()) {
    throw Error(ErrorKind::kIntegrity,
                fmt::format("unknown street id {}", street_id));
  }
  return it->second;
}

bool StreetNetwork::Adjacent(int street_a, int street_b) const {
  const auto nb = Neighbors(IndexOf(street_a));
  return std::binary_search(nb.begin(), nb.end(), street_b);
}

CityScenario::CityScenario(StreetNetwork network, std::vector<BusRoute> routes,
                           std::vector<BusTrip> trips, ActivePeriod active,
                           Minutes period_T)
    : network_(std::move(network)),
      routes_(std::move(routes)),
      trips_(std::move(trips)),
      active_(active),
      period_T_(period_T) {
  if (!(active_.start < active_.end)) {
    throw Error(ErrorKind::kIntegrity,
                fmt::format("active period start {} must precede end {}",
                            active_.start, active_.end));
  }
  if (!(period_T_ > 0.0)) {
    throw Error(ErrorKind::kIntegrity,
                fmt::format("T must be positive, got {}", period_T_));
  }

  std::vector<std::string> offenders;
  for (size_t r = 0; r < routes_.size(); ++r) {
    const BusRoute& route = routes_[r];
    if (!route_index_.emplace(route.id, r).second) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("duplicate route id {}", route.id));
    }
    if (route.path.empty()) {
      offenders.push_back(fmt::format("route {} has an empty path", route.id));
      continue;
    }
    for (size_t k = 0; k < route.path.size(); ++k) {
      if (!network_.Contains(route.path[k])) {
        offenders.push_back(fmt::format("route {} path[{}] -> street {}",
                                        route.id, k, route.path[k]));
      } else if (k > 0 && network_.adjacency_known() &&
                 network_.Contains(route.path[k - 1]) &&
                 !network_.Adjacent(route.path[k - 1], route.path[k])) {
        offenders.push_back(fmt::format(
            "route {} path[{}..{}]: streets {} and {} are not adjacent",
            route.id, k - 1, k, route.path[k - 1], route.path[k]));
      }
    }
  }
  for (size_t t = 0; t < trips_.size(); ++t) {
    const BusTrip& trip = trips_[t];
    if (!trip_index_.emplace(trip.id, t).second) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("duplicate trip id {}", trip.id));
    }
    if (!route_index_.contains(trip.route_id)) {
      offenders.push_back(
          fmt::format("trip {} -> route {}", trip.id, trip.route_id));
    }
    if (!(trip.speed_kmh > 0.0)) {
      offenders.push_back(
          fmt::format("trip {} has non-positive speed {}", trip.id,
                      trip.speed_kmh));
    }
  }
  if (!offenders.empty()) {
    std::string msg = fmt::format("{} dangling or invalid reference(s):",
                                  offenders.size());
    for (const auto& o : offenders) msg += "\n  " + o;
    throw Error(ErrorKind::kIntegrity, msg);
  }
}

const BusRoute& CityScenario::RouteById(int route_id) const {
  auto it = route_index_.find(route_id);
  if (it == route_index_.end()) {
    throw Error(ErrorKind::kIntegrity,
                fmt::format("unknown route id {}", route_id));
  }
  return routes_[it->second];
}

const BusTrip& CityScenario::TripById(int trip_id) const {
  auto it = trip_index_.find(trip_id);
  if (it == trip_index_.end()) {
    throw Error(ErrorKind::kIntegrity,
                fmt::format("unknown trip id {}", trip_id));
  }
  return trips_[it->second];
}

bool operator==(const CityScenario& a, const CityScenario& b) {
  return a.network_.streets() == b.network_.streets() &&
         a.routes_ == b.routes_ && a.trips_ == b.trips_ &&
         a.active_ == b.active_ && a.period_T_ == b.period_T_;
}

StreetNetwork GenerateGridCity(int grid_rows, int grid_cols,
                               double street_length_m, std::uint64_t seed) {
  if (grid_rows < 1 || grid_cols < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("grid dimensions must be >= 1, got {}x{}",
                            grid_rows, grid_cols));
  }
  if (!(street_length_m > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("street length must be positive, got {}",
                            street_length_m));
  }
  Rng rng(seed);
  std::vector<Street> streets;
  streets.reserve(static_cast<size_t>(grid_rows) * (grid_cols - 1) +
                  static_cast<size_t>(grid_cols) * (grid_rows - 1));
  auto at = [&](int r, int c) {
    return Point{c * street_length_m, r * street_length_m};
  };
  auto add = [&](Point a, Point b) {
    Street s;
    s.id = static_cast<int>(streets.size());
    s.length_m = street_length_m;
    s.endpoints = std::array<Point, 2>{a, b};
    // 4..14 spots, about 9 per street on average.
    s.parking_spots = 4 + static_cast<int>(UniformIndex(rng, 11));
    streets.push_back(s);
  };
  for (int r = 0; r < grid_rows; ++r) {
    for (int c = 0; c + 1 < grid_cols; ++c) add(at(r, c), at(r, c + 1));
  }
  for (int c = 0; c < grid_cols; ++c) {
    for (int r = 0; r + 1 < grid_rows; ++r) add(at(r, c), at(r + 1, c));
  }
  return StreetNetwork(std::move(streets));
}

namespace {

constexpr int kMaxWalkAttempts = 1000;

// One attempt at a street-self-avoiding walk. Returns street indices; shorter
// than `length` on a dead end.
std::vector<int> TryWalk(const StreetNetwork& network, int length, Rng& rng,
                         std::vector<char>& used) {
  std::fill(used.begin(), used.end(), 0);
  std::vector<int> walk;
  walk.reserve(length);
  int current = static_cast<int>(UniformIndex(rng, network.size()));
  used[current] = 1;
  walk.push_back(current);
  int junction = -1;
  if (network.adjacency_known()) {
    junction = network.JunctionsOf(current)[UniformIndex(rng, 2)];
  }
  std::vector<int> candidates;
  while (static_cast<int>(walk.size()) < length) {
    candidates.clear();
    if (network.adjacency_known()) {
      for (int s : network.StreetsAt(junction)) {
        if (!used[s]) candidates.push_back(s);
      }
    } else {
      for (int id : network.Neighbors(current)) {
        const int s = static_cast<int>(network.IndexOf(id));
        if (!used[s]) candidates.push_back(s);
      }
    }
    if (candidates.empty()) break;
    const int next = candidates[UniformIndex(rng, candidates.size())];
    if (network.adjacency_known()) {
      const auto ends = network.JunctionsOf(next);
      junction = ends[0] == junction ? ends[1] : ends[0];
    }
    used[next] = 1;
    walk.push_back(next);
    current = next;
  }
  return walk;
}

}  // namespace

std::vector<BusRoute> GenerateRoutes(const StreetNetwork& network,
                                     int route_count, int route_length,
                                     std::uint64_t seed) {
  if (route_count < 0) {
    throw Error(ErrorKind::kInvalidArgument, "route_count must be >= 0");
  }
  if (route_length < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("route_length must be >= 1, got {}", route_length));
  }
  if (network.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot generate routes on an empty network");
  }
  Rng rng(seed);
  std::vector<char> used(network.size());
  std::vector<BusRoute> routes;
  routes.reserve(route_count);
  for (int r = 0; r < route_count; ++r) {
    std::vector<int> walk;
    for (int attempt = 0; attempt < kMaxWalkAttempts; ++attempt) {
      walk = TryWalk(network, route_length, rng, used);
      if (static_cast<int>(walk.size()) == route_length) break;
    }
    if (static_cast<int>(walk.size()) != route_length) {
      throw Error(ErrorKind::kGeneration,
                  fmt::format("route {}: no self-avoiding walk of {} streets "
                              "found after {} attempts (longest {})",
                              r, route_length, kMaxWalkAttempts, walk.size()));
    }
    BusRoute route;
    route.id = r;
    route.path.reserve(walk.size());
    for (int s : walk) route.path.push_back(network.streets()[s].id);
    routes.push_back(std::move(route));
  }
  return routes;
}

std::vector<BusTrip> ExpandTrips(std::span<const BusRoute> routes,
                                 int trips_per_route, Minutes headway,
                                 std::span<const Minutes> first_departures,
                                 double speed_kmh) {
  if (trips_per_route < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("trips_per_route must be >= 1, got {}",
                            trips_per_route));
  }
  if (headway < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "headway must be >= 0");
  }
  if (!(speed_kmh > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "speed must be positive");
  }
  if (first_departures.size() != routes.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "one first departure per route is required");
  }
  std::vector<BusTrip> trips;
  trips.reserve(routes.size() * trips_per_route);
  for (size_t r = 0; r < routes.size(); ++r) {
    for (int k = 0; k < trips_per_route; ++k) {
      BusTrip trip;
      trip.id = static_cast<int>(r) * trips_per_route + k;
      trip.route_id = routes[r].id;
      trip.departure = first_departures[r] + k * headway;
      trip.speed_kmh = speed_kmh;
      trips.push_back(trip);
    }
  }
  return trips;
}

std::vector<BusTrip> ExpandTrips(std::span<const BusRoute> routes,
                                 int trips_per_route, Minutes headway,
                                 Minutes first_departure, double speed_kmh) {
  const std::vector<Minutes> firsts(routes.size(), first_departure);
  return ExpandTrips(routes, trips_per_route, headway, firsts, speed_kmh);
}

double RouteLengthMeters(const StreetNetwork& network, const BusRoute& route) {
  double total = 0.0;
  for (int id : route.path) total += network.ById(id).length_m;
  return total;
}

std::vector<Minutes> StaggerRouteDepartures(const StreetNetwork& network,
                                            std::span<const BusRoute> routes,
                                            ActivePeriod active,
                                            int trips_per_route,
                                            Minutes headway, double speed_kmh,
                                            std::uint64_t seed) {
  if (routes.empty()) return {};
  if (!(speed_kmh > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "speed must be positive");
  }
  double mean_duration = 0.0;
  for (const auto& r : routes) {
    mean_duration += RouteLengthMeters(network, r) / 1000.0 / speed_kmh * 60.0;
  }
  mean_duration /= static_cast<double>(routes.size());
  const Minutes lo = active.start - mean_duration;
  const Minutes hi =
      std::max(lo, active.end - (trips_per_route - 1) * headway);

  std::vector<size_t> order(routes.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[UniformIndex(rng, i)]);
  }
  std::vector<Minutes> firsts(routes.size());
  const double step =
      routes.size() > 1 ? (hi - lo) / static_cast<double>(routes.size() - 1)
                        : 0.0;
  for (size_t slot = 0; slot < order.size(); ++slot) {
    // Whole minutes keep scenario files readable and exact.
    firsts[order[slot]] = std::round(lo + step * static_cast<double>(slot));
  }
  return firsts;
}

std::vector<Minutes> BalanceRouteDepartures(const StreetNetwork& network,
                                            std::span<const BusRoute> routes,
                                            ActivePeriod active,
                                            int trips_per_route,
                                            Minutes headway, double speed_kmh,
                                            Minutes cell_minutes,
                                            std::uint64_t seed) {
  if (!(cell_minutes > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "cell width must be positive");
  }
  if (trips_per_route < 1) {
    throw Error(ErrorKind::kInvalidArgument, "trips_per_route must be >= 1");
  }
  std::vector<Minutes> firsts = StaggerRouteDepartures(
      network, routes, active, trips_per_route, headway, speed_kmh, seed);
  if (firsts.empty()) return firsts;

  // slots[s] is the s-th block start; slot_of / route_at are inverse maps.
  std::vector<size_t> route_at(routes.size());
  std::iota(route_at.begin(), route_at.end(), 0);
  std::stable_sort(route_at.begin(), route_at.end(),
                   [&](size_t a, size_t b) { return firsts[a] < firsts[b]; });
  std::vector<Minutes> slots(routes.size());
  std::vector<size_t> slot_of(routes.size());
  for (size_t s = 0; s < route_at.size(); ++s) {
    slots[s] = firsts[route_at[s]];
    slot_of[route_at[s]] = s;
  }

  const int cells = static_cast<int>(
      std::ceil((active.end - active.start) / cell_minutes - 1e-9));
  const double meters_per_minute = speed_kmh * 1000.0 / 60.0;
  struct Pass {
    size_t street;
    Minutes enter;  // offsets from the departure
    Minutes exit;
  };
  std::vector<std::vector<Pass>> passes(routes.size());
  for (size_t r = 0; r < routes.size(); ++r) {
    Minutes t = 0.0;
    for (int id : routes[r].path) {
      const size_t s = network.IndexOf(id);
      const Minutes d = network.streets()[s].length_m / meters_per_minute;
      passes[r].push_back({s, t, t + d});
      t += d;
    }
  }
  // Cells [first, last) that [a, b) overlaps with positive length.
  auto cell_range = [&](Minutes a, Minutes b) {
    a = std::max(a, active.start);
    b = std::min(b, active.end);
    if (b - a <= 1e-9) return std::pair<int, int>{0, 0};
    const int first = static_cast<int>(
        std::floor((a - active.start) / cell_minutes + 1e-9));
    const int last = static_cast<int>(
        std::ceil((b - active.start) / cell_minutes - 1e-9));
    return std::pair<int, int>{std::max(first, 0), std::min(last, cells)};
  };
  std::vector<int> count(network.size() * cells, 0);
  long unreached = static_cast<long>(count.size());
  auto move = [&](size_t r, size_t slot, int delta) {
    for (int k = 0; k < trips_per_route; ++k) {
      const Minutes dep = slots[slot] + k * headway;
      for (const Pass& p : passes[r]) {
        const auto [lo, hi] = cell_range(dep + p.enter, dep + p.exit);
        for (int c = lo; c < hi; ++c) {
          const size_t cell = p.street * cells + c;
          if (delta < 0 && --count[cell] == 0) ++unreached;
          if (delta > 0 && count[cell]++ == 0) --unreached;
        }
      }
    }
  };
  for (size_t r = 0; r < routes.size(); ++r) move(r, slot_of[r], +1);

  // Swap the slots of two routes whenever that strictly reduces the number
  // of unreached cells; only swaps that bring a passing route onto an
  // unreached cell are tried.
  constexpr int kRepairPasses = 4;
  for (int pass = 0; pass < kRepairPasses && unreached > 0; ++pass) {
    bool improved = false;
    for (size_t cell = 0; cell < count.size() && unreached > 0; ++cell) {
      if (count[cell] > 0) continue;
      const size_t street = cell / cells;
      const int t = static_cast<int>(cell % cells);
      for (size_t a = 0; a < routes.size() && count[cell] == 0; ++a) {
        for (const Pass& p : passes[a]) {
          if (p.street != street || count[cell] > 0) continue;
          for (size_t s = 0; s < slots.size() && count[cell] == 0; ++s) {
            if (s == slot_of[a]) continue;
            bool hits = false;
            for (int k = 0; k < trips_per_route && !hits; ++k) {
              const Minutes dep = slots[s] + k * headway;
              const auto [lo, hi] = cell_range(dep + p.enter, dep + p.exit);
              hits = lo <= t && t < hi;
            }
            if (!hits) continue;
            const size_t b = route_at[s];
            const size_t sa = slot_of[a];
            const long before = unreached;
            move(a, sa, -1);
            move(b, s, -1);
            move(a, s, +1);
            move(b, sa, +1);
            if (unreached < before) {
              slot_of[a] = s;
              slot_of[b] = sa;
              route_at[s] = a;
              route_at[sa] = b;
              improved = true;
              break;
            }
            move(a, s, -1);
            move(b, sa, -1);
            move(a, sa, +1);
            move(b, s, +1);
          }
        }
      }
    }
    if (!improved) break;
  }

  for (size_t r = 0; r < routes.size(); ++r) firsts[r] = slots[slot_of[r]];
  return firsts;
}

ActivePeriod DetectActivePeriod(std::span<const ChangeSample> series,
                                double threshold_fraction) {
  if (series.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "parking-change series is empty");
  }
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("threshold fraction must lie in (0,1), got {}",
                            threshold_fraction));
  }
  for (size_t i = 1; i < series.size(); ++i) {
    if (series[i].minute < series[i - 1].minute) {
      throw Error(ErrorKind::kInvalidArgument,
                  "parking-change series must be sorted by time");
    }
  }
  double peak = series.front().avg_changes;
  for (const auto& s : series) peak = std::max(peak, s.avg_changes);
  if (!(peak > 0.0)) {
    throw Error(ErrorKind::kNoActivePeriod,
                "no sample reaches the activity threshold (series peak <= 0)");
  }
  const double cut = threshold_fraction * peak;
  std::optional<Minutes> first, last;
  for (const auto& s : series) {
    if (s.avg_changes >= cut) {
      if (!first) first = s.minute;
      last = s.minute;
    }
  }
  if (!first) {
    throw Error(ErrorKind::kNoActivePeriod,
                "no sample reaches the activity threshold");
  }
  return ActivePeriod{*first, *last};
}

std::string_view DepartureModeName(DepartureMode mode) {
  switch (mode) {
    case DepartureMode::kBalanced:
      return "balance";
    case DepartureMode::kStaggered:
      return "stagger";
    case DepartureMode::kUniform:
      return "uniform";
  }
  return "balance";
}

DepartureMode ParseDepartureMode(std::string_view text) {
  for (DepartureMode m : {DepartureMode::kBalanced, DepartureMode::kStaggered,
                          DepartureMode::kUniform}) {
    if (DepartureModeName(m) == text) return m;
  }
  throw Error(ErrorKind::kInvalidArgument,
              fmt::format("unknown departure mode '{}' (balance, stagger, "
                          "uniform)", text));
}

CityScenario GenerateScenario(const ScenarioParams& params) {
  StreetNetwork network =
      GenerateGridCity(params.grid_rows, params.grid_cols,
                       params.street_length_m, params.seed);
  std::vector<BusRoute> routes = GenerateRoutes(
      network, params.route_count, params.route_length, params.seed);
  std::vector<BusTrip> trips;
  switch (params.departures) {
    case DepartureMode::kBalanced:
      trips = ExpandTrips(
          routes, params.trips_per_route, params.headway,
          BalanceRouteDepartures(network, routes, params.active,
                                 params.trips_per_route, params.headway,
                                 params.speed_kmh, params.period_T / 2.0,
                                 params.seed),
          params.speed_kmh);
      break;
    case DepartureMode::kStaggered:
      trips = ExpandTrips(
          routes, params.trips_per_route, params.headway,
          StaggerRouteDepartures(network, routes, params.active,
                                 params.trips_per_route, params.headway,
                                 params.speed_kmh, params.seed),
          params.speed_kmh);
      break;
    case DepartureMode::kUniform:
      trips = ExpandTrips(routes, params.trips_per_route, params.headway,
                          params.first_departure, params.speed_kmh);
      break;
  }
  return CityScenario(std::move(network), std::move(routes), std::move(trips),
                      params.active, params.period_T);
}

}  // namespace parkcover
