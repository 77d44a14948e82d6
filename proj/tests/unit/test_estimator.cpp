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

#include <cmath>
#include <vector>

#include "pscd/estimator.hpp"
#include "pscd/numerics.hpp"
#include "test_support.hpp"

namespace pscd {
namespace {

using testing::random_points;

// Direct loop over the batch: softmax weights on both sides, plus the
// energy penalty.
std::vector<double> reference_gradient(const EnergyModel& m, const PointSet& pos, const PointSet& neg, double gamma,
                                       double l2) {
  const std::size_t p = m.num_params();
  std::vector<double> out(p, 0.0);
  auto side = [&](const PointSet& xs, double sign) {
    std::vector<double> e(xs.size());
    double top = -INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      e[i] = energy_value(m, xs[i]);
      top = std::max(top, -gamma * e[i]);
    }
    double z = 0.0;
    for (double v : e) z += std::exp(-gamma * v - top);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto ev = energy_eval(m, xs[i]);
      const double w = std::exp(-gamma * e[i] - top) / z;
      for (std::size_t j = 0; j < p; ++j) {
        out[j] += sign * w * ev.grad_params[j] + 2.0 * l2 * e[i] / xs.size() * ev.grad_params[j];
      }
    }
  };
  side(pos, 1.0);
  side(neg, -1.0);
  return out;
}

TEST(Estimator, MatchesDirectLoop) {
  Rng rng(1);
  const auto model = init_mlp({2, 6, 1}, 1);
  const auto pos = random_points(2, 40, -2, 2, rng);
  const auto neg = random_points(2, 40, -3, 3, rng);
  for (double g : {-0.5, 0.5, 1.0, 3.0}) {
    const auto est = pscd_gradient(model, pos, neg, {g, 0.3});
    const auto ref = reference_gradient(model, pos, neg, g, 0.3);
    EXPECT_LT(testing::max_rel_diff(est.grad, ref, 1e-9), 1e-10) << "gamma " << g;
  }
}

TEST(Estimator, WeightsAreSoftmaxOfNegatedScaledEnergy) {
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const auto pos = PointSet::from_scalars({0.0, 1.0});
  const auto neg = PointSet::from_scalars({0.0, 2.0});
  const auto est = pscd_gradient(model, pos, neg, {1.0, 0.0});
  // Energies 0 and 2 on the negative side.
  EXPECT_NEAR(est.weights_neg[0], 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(est.weights_pos[1], std::exp(-0.5) / (1.0 + std::exp(-0.5)), 1e-15);
  EXPECT_NEAR(est.ess, 1.0 / (std::pow(est.weights_neg[0], 2) + std::pow(est.weights_neg[1], 2)), 1e-12);
}

TEST(Estimator, EqualEnergiesGiveUniformWeights) {
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const auto pts = PointSet::from_scalars({1.0, -1.0, 1.0, -1.0});
  const auto est = pscd_gradient(model, pts, pts, {2.0, 0.0});
  for (double w : est.weights_neg) EXPECT_DOUBLE_EQ(w, 0.25);
  EXPECT_DOUBLE_EQ(est.ess, 4.0);
  for (double g : est.grad) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(Estimator, SmallGammaApproachesCd) {
  Rng rng(2);
  const auto model = init_mlp({2, 8, 1}, 2);
  const auto pos = random_points(2, 64, -2, 2, rng);
  const auto neg = random_points(2, 64, -2, 2, rng);
  const auto cd = cd_gradient(model, pos, neg, 0.0);
  const auto ps = pscd_gradient(model, pos, neg, {1e-6, 0.0});
  std::vector<double> diff(cd.grad.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = ps.grad[j] - cd.grad[j];
  EXPECT_LT(l2_norm(diff) / l2_norm(cd.grad), 1e-4);
}

TEST(Estimator, FrozenWeightFiniteDifference) {
  Rng rng(3);
  const auto pos = random_points(1, 30, -2, 2, rng);
  const auto neg = random_points(1, 30, -2, 2, rng);
  const auto model = EnergyModel::gaussian_quadratic(0.3, 0.8);
  EXPECT_LT(frozen_weight_fd_check(model, pos, neg, {1.0, 0.5}, 1e-5), 1e-7);
  EXPECT_PSCD_ERROR(frozen_weight_fd_check(model, pos, neg, {1.0, 0.5}, 0.0), ErrorCode::InvalidParameter);
}

TEST(Estimator, ShiftLeavesWeightsAndGradientUnchanged) {
  // Adding a constant to the energy is a bias shift on the Mlp output.
  Rng rng(4);
  const auto model = init_mlp({2, 4, 1}, 4);
  auto params = std::vector<double>(model.params().begin(), model.params().end());
  params.back() += std::log(10.0);
  const auto shifted = EnergyModel::mlp(model.widths(), params);
  const auto pos = random_points(2, 16, -2, 2, rng);
  const auto neg = random_points(2, 16, -2, 2, rng);
  const auto a = pscd_gradient(model, pos, neg, {1.0, 0.0});
  const auto b = pscd_gradient(shifted, pos, neg, {1.0, 0.0});
  for (std::size_t i = 0; i < a.weights_neg.size(); ++i) EXPECT_NEAR(a.weights_neg[i], b.weights_neg[i], 1e-12);
    // The output-bias coordinate is 1 - 1 up to rounding, hence the floor.
  EXPECT_LT(testing::max_rel_diff(a.grad, b.grad, 1e-3), 1e-10);
}

TEST(Estimator, Errors) {
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const auto a = PointSet::from_scalars({0.0, 1.0});
  const auto b = PointSet::from_scalars({0.0});
  EXPECT_PSCD_ERROR(pscd_gradient(model, a, a, {0.0, 0.0}), ErrorCode::InvalidGamma);
  EXPECT_PSCD_ERROR(pscd_gradient(model, a, a, {-1.0, 0.0}), ErrorCode::InvalidGamma);
  EXPECT_PSCD_ERROR(pscd_gradient(model, PointSet(1), a, {1.0, 0.0}), ErrorCode::EmptyBatch);
  EXPECT_PSCD_ERROR(pscd_gradient(model, a, b, {1.0, 0.0}), ErrorCode::InvalidInput);
  EXPECT_PSCD_ERROR(pscd_gradient(model, PointSet(2, 2), PointSet(2, 2), {1.0, 0.0}), ErrorCode::InvalidInput);
}

}  // namespace
}  // namespace pscd
