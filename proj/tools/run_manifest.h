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


#ifndef PARKCOVER_TOOLS_RUN_MANIFEST_H_
#define PARKCOVER_TOOLS_RUN_MANIFEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace parkcover::cli {

// Sidecar written next to every command's outputs. `argv` holds the fully
// resolved flag list, so `parkcover replay <manifest>` reruns the command
// with no defaults left to drift.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void SetParam(const std::string& name, nlohmann::json value);
  void AddInput(const std::filesystem::path& path);
  void AddOutput(const std::filesystem::path& path);
  void SetSeed(std::uint64_t seed) { seed_ = seed; }
  void SetArgv(std::vector<std::string> argv) { argv_ = std::move(argv); }
  void SetExitCode(int code) { exit_code_ = code; }

  const std::string& command() const { return command_; }
  const std::vector<std::string>& argv() const { return argv_; }

  nlohmann::ordered_json ToJson() const;
  // Stamps the finish time and writes the manifest to `path`.
  void Write(const std::filesystem::path& path);

 private:
  std::string command_;
  nlohmann::ordered_json params_ = nlohmann::ordered_json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::string> argv_;
  std::uint64_t seed_ = 0;
  int exit_code_ = 0;
  std::chrono::system_clock::time_point started_;
  std::chrono::system_clock::time_point finished_;
};

// Reads the `argv` list of a manifest written by RunManifest::Write.
std::vector<std::string> ReplayArguments(const std::filesystem::path& path);

}  // namespace parkcover::cli

#endif  // PARKCOVER_TOOLS_RUN_MANIFEST_H_
