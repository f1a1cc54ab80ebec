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

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "parkcover/city_model.h"
#include "parkcover/error.h"

namespace parkcover {

using nlohmann::json;

namespace {

[[noreturn]] void SchemaError(const std::string& where,
                              const std::string& what) {
  throw Error(ErrorKind::kParse, fmt::format("{}: {}", where, what));
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) SchemaError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) SchemaError(where, fmt::format("missing field '{}'", key));
  return *it;
}

int IntField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer()) {
    SchemaError(fmt::format("{}.{}", where, key), "expected an integer");
  }
  return v.get<int>();
}

double NumberField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number()) {
    SchemaError(fmt::format("{}.{}", where, key), "expected a number");
  }
  return v.get<double>();
}

const json& ArrayField(const json& obj, const char* key,
                       const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_array()) {
    SchemaError(fmt::format("{}.{}", where, key), "expected an array");
  }
  return v;
}

Point ParsePoint(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    SchemaError(where, "expected [x, y]");
  }
  return Point{v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string ScenarioToJson(const CityScenario& scenario) {
  json doc;
  json streets = json::array();
  for (const Street& s : scenario.network().streets()) {
    json js = {{"id", s.id}, {"length_m", s.length_m}};
    if (s.endpoints) {
      const auto& e = *s.endpoints;
      js["endpoints"] = {{e[0].x, e[0].y}, {e[1].x, e[1].y}};
    }
    js["spots"] = s.parking_spots;
    streets.push_back(std::move(js));
  }
  json routes = json::array();
  for (const BusRoute& r : scenario.routes()) {
    routes.push_back({{"id", r.id}, {"path", r.path}});
  }
  json trips = json::array();
  for (const BusTrip& t : scenario.trips()) {
    trips.push_back({{"id", t.id},
                     {"route_id", t.route_id},
                     {"departure_min", t.departure},
                     {"speed_kmh", t.speed_kmh}});
  }
  doc["streets"] = std::move(streets);
  doc["routes"] = std::move(routes);
  doc["trips"] = std::move(trips);
  doc["active_period"] = {{"start_min", scenario.active().start},
                          {"end_min", scenario.active().end}};
  doc["T_min"] = scenario.period_T();
  return doc.dump(1) + "\n";
}

CityScenario ScenarioFromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    size_t line = 1;
    const size_t upto = std::min<size_t>(e.byte, text.size());
    for (size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: malformed JSON ({})", line, e.what()));
  }
  if (!doc.is_object()) SchemaError("<root>", "expected an object");

  std::vector<Street> streets;
  const json& js = ArrayField(doc, "streets", "<root>");
  streets.reserve(js.size());
  for (size_t i = 0; i < js.size(); ++i) {
    const std::string where = fmt::format("streets[{}]", i);
    Street s;
    s.id = IntField(js[i], "id", where);
    s.length_m = NumberField(js[i], "length_m", where);
    if (!(s.length_m > 0.0)) {
      SchemaError(where + ".length_m", "must be > 0");
    }
    s.parking_spots = IntField(js[i], "spots", where);
    if (s.parking_spots < 0) SchemaError(where + ".spots", "must be >= 0");
    if (auto it = js[i].find("endpoints"); it != js[i].end() && !it->is_null()) {
      if (!it->is_array() || it->size() != 2) {
        SchemaError(where + ".endpoints", "expected two points");
      }
      s.endpoints = std::array<Point, 2>{
          ParsePoint((*it)[0], where + ".endpoints[0]"),
          ParsePoint((*it)[1], where + ".endpoints[1]")};
    }
    streets.push_back(s);
  }

  std::vector<BusRoute> routes;
  const json& jr = ArrayField(doc, "routes", "<root>");
  routes.reserve(jr.size());
  for (size_t i = 0; i < jr.size(); ++i) {
    const std::string where = fmt::format("routes[{}]", i);
    BusRoute r;
    r.id = IntField(jr[i], "id", where);
    const json& path = ArrayField(jr[i], "path", where);
    for (size_t k = 0; k < path.size(); ++k) {
      if (!path[k].is_number_integer()) {
        SchemaError(fmt::format("{}.path[{}]", where, k),
                    "expected an integer street id");
      }
      r.path.push_back(path[k].get<int>());
    }
    routes.push_back(std::move(r));
  }

  std::vector<BusTrip> trips;
  const json& jt = ArrayField(doc, "trips", "<root>");
  trips.reserve(jt.size());
  for (size_t i = 0; i < jt.size(); ++i) {
    const std::string where = fmt::format("trips[{}]", i);
    BusTrip t;
    t.id = IntField(jt[i], "id", where);
    t.route_id = IntField(jt[i], "route_id", where);
    t.departure = NumberField(jt[i], "departure_min", where);
    t.speed_kmh = NumberField(jt[i], "speed_kmh", where);
    trips.push_back(t);
  }

  const json& ap = Field(doc, "active_period", "<root>");
  ActivePeriod active{NumberField(ap, "start_min", "active_period"),
                      NumberField(ap, "end_min", "active_period")};
  const double period_T = NumberField(doc, "T_min", "<root>");

  return CityScenario(StreetNetwork(std::move(streets)), std::move(routes),
                      std::move(trips), active, period_T);
}

CityScenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open scenario file {}", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ScenarioFromJson(buf.str());
}

void SaveScenario(const CityScenario& scenario,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write scenario file {}", path.string()));
  }
  out << ScenarioToJson(scenario);
}

std::vector<ChangeSample> LoadChangeSeries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open change series {}", path.string()));
  }
  auto parse = [](std::string_view field, double& out) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() &&
           (field.back() == ' ' || field.back() == '\r' || field.back() == '\t'))
      field.remove_suffix(1);
    if (field.empty()) return false;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
  };
  std::vector<ChangeSample> series;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    ChangeSample s;
    const bool ok = comma != std::string::npos &&
                    parse(std::string_view(line).substr(0, comma), s.minute) &&
                    parse(std::string_view(line).substr(comma + 1),
                          s.avg_changes);
    if (!ok) {
      if (series.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::kParse,
                  fmt::format("{}:{}: expected 'minute_of_day,avg_changes'",
                              path.string(), line_no));
    }
    series.push_back(s);
  }
  return series;
}

}  // namespace parkcover
