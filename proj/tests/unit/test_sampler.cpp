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

#include "pscd/sampler.hpp"
#include "test_support.hpp"

namespace pscd {
namespace {

TEST(Langevin, NoiselessChainFollowsGradientDescent) {
  const auto model = EnergyModel::gaussian_quadratic(1.0, 2.0);
  LangevinConfig cfg{25, 0.4, 0.0, FixedUniformInit{}};
  Rng rng(0);
  const std::vector<double> x0{5.0};
  const auto x = langevin_chain(model, x0, cfg, rng);
  // x_k - mu = (x_0 - mu) (1 - eps / (2 sigma^2))^k
  EXPECT_NEAR(x[0], 1.0 + 4.0 * std::pow(1.0 - 0.4 / 8.0, 25), 1e-12);
}

TEST(Langevin, StationaryVarianceOfDiscretizedChain) {
  // The unadjusted chain on N(0, 1) has stationary variance 1 / (1 - eps / 4).
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const double eps = 0.5;
  LangevinConfig cfg{200, eps, std::nullopt, FixedUniformInit{}};
  PointSet states(1, 4000);
  run_chains(model, states, cfg, 17);
  double s2 = 0.0;
  for (double v : states.values()) s2 += v * v;
  EXPECT_NEAR(s2 / 4000.0, 1.0 / (1.0 - eps / 4.0), 0.07);
}

TEST(Langevin, DivergedChainReportsStep) {
  const auto model = EnergyModel::gaussian_quadratic(0.0, 0.01);
  LangevinConfig cfg{1000, 1.0, 0.0, FixedUniformInit{}};
  Rng rng(0);
  const std::vector<double> x0{1.0};
  try {
    langevin_chain(model, x0, cfg, rng);
    FAIL() << "expected DivergedChain";
  } catch (const DivergedChain& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivergedChain);
    EXPECT_GT(e.step(), 1u);
    EXPECT_LT(e.step(), 1000u);
  }
}

TEST(Langevin, ParallelMatchesSerialBitwise) {
  const auto model = init_mlp({2, 8, 1}, 5);
  Rng rng(5);
  const auto start = testing::random_points(2, 300, -3, 3, rng);
  LangevinConfig cfg{10, 0.01, 0.005, FixedUniformInit{}};
  auto a = start;
  auto b = start;
  run_chains(model, a, cfg, 99);
  serial::run_chains(model, b, cfg, 99);
  EXPECT_EQ(a, b);
}

TEST(Langevin, ConfigValidation) {
  EXPECT_PSCD_ERROR((LangevinConfig{0, 0.01}.validate()), ErrorCode::InvalidParameter);
  EXPECT_PSCD_ERROR((LangevinConfig{5, 0.0}.validate()), ErrorCode::InvalidParameter);
  EXPECT_PSCD_ERROR((LangevinConfig{5, 0.01, -1.0}.validate()), ErrorCode::InvalidParameter);
  EXPECT_PSCD_ERROR((LangevinConfig{5, 0.01, std::nullopt, FixedUniformInit{1.0, 1.0}}.validate()),
                    ErrorCode::InvalidParameter);
  EXPECT_DOUBLE_EQ((LangevinConfig{5, 0.04}.noise_scale()), 0.2);
}

TEST(ReplayBuffer, EmptyBufferDrawsFromRegion) {
  ReplayBuffer buf(2, 10, 0.0, -1.0, 1.0);
  Rng rng(1);
  const auto d = buffer_draw(buf, 50, rng);
  EXPECT_EQ(d.size(), 50u);
  for (double v : d.values()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(ReplayBuffer, CapacityAndStoredDraws) {
  ReplayBuffer buf(1, 5, 0.0, -1.0, 1.0);
  Rng rng(2);
  buffer_push(buf, PointSet::from_scalars({10, 11, 12, 13, 14, 15, 16}), rng);
  EXPECT_EQ(buf.size(), 5u);
  for (double v : buf.entries().values()) {
    EXPECT_GE(v, 10.0);
    EXPECT_LE(v, 16.0);
  }
  // reinit_prob 0 with a nonempty store: every draw is a stored entry.
  const auto drawn = buffer_draw(buf, 20, rng);
  for (double v : drawn.values()) EXPECT_GE(v, 10.0);
}

TEST(ReplayBuffer, ReinitFraction) {
  ReplayBuffer buf(1, 100, 0.25, -1.0, 1.0);
  Rng rng(3);
  buffer_push(buf, PointSet::from_scalars(std::vector<double>(100, 50.0)), rng);
  int fresh = 0;
  const auto drawn = buffer_draw(buf, 20000, rng);
  for (double v : drawn.values()) fresh += v < 2.0;
  EXPECT_NEAR(fresh / 20000.0, 0.25, 0.015);
}

TEST(ReplayBuffer, RejectsBadStates) {
  ReplayBuffer buf(2, 5, 0.1, -1.0, 1.0);
  Rng rng(4);
  EXPECT_PSCD_ERROR(buffer_push(buf, PointSet::from_scalars({1.0}), rng), ErrorCode::InvalidState);
  EXPECT_PSCD_ERROR(buffer_push(buf, PointSet(2, std::vector<double>{1.0, NAN}), rng), ErrorCode::InvalidState);
  EXPECT_PSCD_ERROR(ReplayBuffer(2, 0, 0.1, -1.0, 1.0), ErrorCode::InvalidParameter);
  EXPECT_PSCD_ERROR(ReplayBuffer(2, 5, 1.5, -1.0, 1.0), ErrorCode::InvalidParameter);
}

TEST(ExactSampler, MomentsAndKind) {
  Rng rng(6);
  const auto xs = gaussian_exact_sample(EnergyModel::gaussian_quadratic(1.0, 0.7), 100000, rng);
  double s = 0.0, s2 = 0.0;
  for (double v : xs) {
    s += v;
    s2 += v * v;
  }
  const double mean = s / xs.size();
  EXPECT_NEAR(mean, 1.0, 0.01);
  EXPECT_NEAR(s2 / xs.size() - mean * mean, 0.49, 0.01);
  EXPECT_PSCD_ERROR(gaussian_exact_sample(init_mlp({1, 2, 1}, 0), 3, rng), ErrorCode::InvalidModelKind);
}

}  // namespace
}  // namespace pscd
