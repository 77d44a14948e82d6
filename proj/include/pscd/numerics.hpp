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

#include <span>
#include <vector>

namespace pscd {

/// Pairwise (cascade) summation. The association order depends only on the
/// length, so any caller that fills the same buffer gets the same bits.
double pairwise_sum(std::span<const double> values) noexcept;

/// max(v) + log(mean(exp(v - max(v)))). Throws EmptyBatch / NumericalError.
double logmeanexp(std::span<const double> values);

/// log(sum(exp(v))). -inf entries are allowed and contribute nothing; an
/// all -inf input returns -inf.
double logsumexp(std::span<const double> values);

/// exp(v - max(v)) / sum(exp(v - max(v))). Throws EmptyBatch / NumericalError.
std::vector<double> stable_softmax(std::span<const double> values);

/// 1 / sum(w^2) for normalized weights.
double effective_sample_size(std::span<const double> weights) noexcept;

double l2_norm(std::span<const double> v) noexcept;

}  // namespace pscd
