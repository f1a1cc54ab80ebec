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

#ifndef PARKCOVER_ERROR_H_
#define PARKCOVER_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace parkcover {

// Coarse classification used by callers (notably the CLI) to map failures
// onto exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kIntegrity,
  kGeneration,
  kGrid,
  kNoActivePeriod,
  kInfeasible,
  kDegenerate,
  kNumeric,
  kResourceLimit,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace parkcover

#endif  // PARKCOVER_ERROR_H_
