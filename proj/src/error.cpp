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

#include "pscd/error.hpp"

namespace pscd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::InvalidGamma: return "InvalidGamma";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidModelKind: return "InvalidModelKind";
    case ErrorCode::DivergedChain: return "DivergedChain";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(std::string module, ErrorCode code, const std::string& message)
    : std::runtime_error(module + "." + std::string(to_string(code)) + ": " + message),
      module_(std::move(module)),
      code_(code) {}

std::string Error::qualified_name() const {
  return module_ + "." + std::string(to_string(code_));
}

DivergedChain::DivergedChain(std::size_t step, const std::string& message)
    : Error("sampler", ErrorCode::DivergedChain,
            message + " (step " + std::to_string(step) + ")"),
      step_(step) {}

}  // namespace pscd
