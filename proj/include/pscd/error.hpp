// Copyright 2026 The pscd Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pscd {

enum class ErrorCode {
  NumericalError,
  InvalidGamma,
  InvalidOrder,
  InvalidParameter,
  InvalidShape,
  InvalidState,
  InvalidModelKind,
  DivergedChain,
  EmptyBatch,
  InvalidSchedule,
  InvalidSpec,
  InvalidInput,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library error. `qualified_name()` yields "<module>.<ErrorCode>", which is
/// what the CLI reports in its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(std::string module, ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  std::string qualified_name() const;

 private:
  std::string module_;
  ErrorCode code_;
};

/// Raised by Langevin chains; carries the 1-based step at which the state
/// stopped being finite.
class DivergedChain : public Error {
 public:
  DivergedChain(std::size_t step, const std::string& message);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pscd
