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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pscd/rng.hpp"

namespace pscd {
namespace {

TEST(Rng, SameKeySameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  Rng c(42);
  Rng d(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, KnownFirstOutput) {
  // splitmix64 of key + golden ratio increment.
  Rng r(0);
  EXPECT_EQ(r(), splitmix64_mix(0x9e3779b97f4a7c15ULL));
}

TEST(Rng, ForkDoesNotAdvanceParent) {
  Rng a(7);
  Rng b(7);
  (void)a.fork(3);
  EXPECT_EQ(a(), b());
  EXPECT_NE(Rng(7).fork(0)(), Rng(7).fork(1)());
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (auto tag : {"train.data", "train.sampler", "train.buffer", "train.chains"}) seen.insert(derive_seed(1, tag));
  for (std::uint64_t i = 0; i < 100; ++i) seen.insert(derive_seed(1, i));
  EXPECT_EQ(seen.size(), 104u);
}

TEST(Rng, UniformAndBelowRanges) {
  Rng r(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[r.below(7)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);  // ~4 binomial sigma
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  const int n = 200000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Rng, WorksWithStdShuffle) {
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  auto w = v;
  Rng a(1);
  Rng b(1);
  std::shuffle(v.begin(), v.end(), a);
  std::shuffle(w.begin(), w.end(), b);
  EXPECT_EQ(v, w);
}

}  // namespace
}  // namespace pscd
