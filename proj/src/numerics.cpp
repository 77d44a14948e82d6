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

#include "pscd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pscd/error.hpp"

namespace pscd {

namespace {

constexpr std::size_t kPairwiseBlock = 8;

void require_finite_nonempty(std::span<const double> values, const char* what) {
  if (values.empty()) {
    throw Error("estimator", ErrorCode::EmptyBatch, std::string(what) + " of an empty vector");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error("estimator", ErrorCode::NumericalError,
                  std::string(what) + ": non-finite input at index " + std::to_string(i));
    }
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double logmeanexp(std::span<const double> values) {
  require_finite_nonempty(values, "logmeanexp");
  const double m = *std::max_element(values.begin(), values.end());
  std::vector<double> shifted(values.size());
  std::transform(values.begin(), values.end(), shifted.begin(),
                 [m](double v) { return std::exp(v - m); });
  return m + std::log(pairwise_sum(shifted) / static_cast<double>(values.size()));
}

double logsumexp(std::span<const double> values) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (values.empty()) return neg_inf;
  const double m = *std::max_element(values.begin(), values.end());
  if (m == neg_inf) return neg_inf;
  std::vector<double> shifted(values.size());
  std::transform(values.begin(), values.end(), shifted.begin(),
                 [m](double v) { return std::exp(v - m); });
  return m + std::log(pairwise_sum(shifted));
}

std::vector<double> stable_softmax(std::span<const double> values) {
  require_finite_nonempty(values, "softmax");
  const double m = *std::max_element(values.begin(), values.end());
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [m](double v) { return std::exp(v - m); });
  const double total = pairwise_sum(out);
  for (double& w : out) w /= total;
  return out;
}

double effective_sample_size(std::span<const double> weights) noexcept {
  std::vector<double> sq(weights.size());
  std::transform(weights.begin(), weights.end(), sq.begin(), [](double w) { return w * w; });
  return 1.0 / pairwise_sum(sq);
}

double l2_norm(std::span<const double> v) noexcept {
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [](double x) { return x * x; });
  return std::sqrt(pairwise_sum(sq));
}

}  // namespace pscd
