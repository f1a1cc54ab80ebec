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


#ifndef PARKCOVER_TOOLS_CLI_H_
#define PARKCOVER_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace parkcover::cli {

// Process exit codes; a stable contract for scripts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitResourceLimit = 3;

// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "PARKCOVER_OUTPUT_DIR";

// Runs `parkcover <args...>` in-process (args excludes the program name) and
// returns the exit code. Errors are reported on stderr.
int RunCli(const std::vector<std::string>& args);

}  // namespace parkcover::cli

#endif  // PARKCOVER_TOOLS_CLI_H_
