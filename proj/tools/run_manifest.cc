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


#include "run_manifest.h"

#include <ctime>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "parkcover/error.h"

#ifndef PARKCOVER_VERSION
#define PARKCOVER_VERSION "unknown"
#endif

namespace parkcover::cli {
namespace {

std::string Iso8601(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      t.time_since_epoch()) %
                  1000;
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm utc{};
  gmtime_r(&secs, &utc);
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", utc, ms.count());
}

}  // namespace

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)),
      started_(std::chrono::system_clock::now()) {}

void RunManifest::SetParam(const std::string& name, nlohmann::json value) {
  params_[name] = std::move(value);
}

void RunManifest::AddInput(const std::filesystem::path& path) {
  inputs_.push_back(path.string());
}

void RunManifest::AddOutput(const std::filesystem::path& path) {
  outputs_.push_back(path.string());
}

nlohmann::ordered_json RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["tool_version"] = PARKCOVER_VERSION;
  j["seed"] = seed_;
  j["params"] = params_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["argv"] = argv_;
  j["exit_code"] = exit_code_;
  j["started_at"] = Iso8601(started_);
  j["finished_at"] = Iso8601(finished_);
  j["wall_s"] =
      std::chrono::duration<double>(finished_ - started_).count();
  return j;
}

void RunManifest::Write(const std::filesystem::path& path) {
  finished_ = std::chrono::system_clock::now();
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot write manifest {}", path.string()));
  }
  out << ToJson().dump(2) << "\n";
}

std::vector<std::string> ReplayArguments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo,
                fmt::format("cannot open manifest {}", path.string()));
  }
  try {
    return nlohmann::json::parse(in).at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse,
                fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace parkcover::cli
