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

#include <string>

#include "pscd/energy.hpp"

namespace pscd {

/// JSON text:
///   {"format": "pscd-energy", "version": 1, "kind": "Mlp", "input_dim": 2,
///    "widths": [2, 128, 128, 1], "params": [...]}
/// Doubles are written in shortest round-trip form, so parsing restores every
/// parameter bit for bit. GaussianQuadratic checkpoints carry widths [1].
std::string checkpoint_json(const EnergyModel& model);
/// IoError on malformed text, InvalidShape on inconsistent shapes.
EnergyModel checkpoint_from_json(const std::string& text);

/// Binary layout, little-endian:
///   "PSCDCKPT" | u32 version (1) | u32 kind (0 Gaussian, 1 Mlp) |
///   u64 width count | u64 widths... | u64 param count | f64 params...
std::string checkpoint_binary(const EnergyModel& model);
EnergyModel checkpoint_from_binary(const std::string& bytes);

/// Whole-file helpers; IoError on filesystem failures.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pscd
