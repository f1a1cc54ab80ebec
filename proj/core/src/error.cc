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

#include "parkcover/error.h"

namespace parkcover {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kIntegrity:
      return "integrity";
    case ErrorKind::kGeneration:
      return "generation";
    case ErrorKind::kGrid:
      return "grid";
    case ErrorKind::kNoActivePeriod:
      return "no-active-period";
    case ErrorKind::kInfeasible:
      return "infeasible";
    case ErrorKind::kDegenerate:
      return "degenerate";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kResourceLimit:
      return "resource-limit";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace parkcover
