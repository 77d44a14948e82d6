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
#include <cstring>
#include <vector>

#include "pscd/datasets.hpp"
#include "test_support.hpp"

namespace pscd {
namespace {

TEST(Datasets, NamesRoundTrip) {
  for (auto d : {DatasetName::Cosine, DatasetName::SwissRoll, DatasetName::Moon, DatasetName::MoG2D,
                 DatasetName::Funnel, DatasetName::Rings, DatasetName::MoG1D, DatasetName::ContaminatedGaussian}) {
    EXPECT_EQ(dataset_from_string(to_string(d)), d);
  }
  EXPECT_EQ(dataset_from_string("swiss-roll"), DatasetName::SwissRoll);
  EXPECT_EQ(benchmark_datasets().size(), 6u);
  EXPECT_PSCD_ERROR(dataset_from_string("cifar10"), ErrorCode::InvalidSpec);
}

TEST(Datasets, TwoDimensionalSetsStayInBox) {
  for (auto d : benchmark_datasets()) {
    const auto pts = sample_dataset({d, {}, 3000, 9});
    ASSERT_EQ(pts.size(), 3000u);
    ASSERT_EQ(pts.dim(), 2u);
    for (double v : pts.values()) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_LE(std::abs(v), 4.5);
    }
    EXPECT_EQ(pts, sample_dataset({d, {}, 3000, 9}));
    EXPECT_NE(pts, sample_dataset({d, {}, 3000, 10}));
  }
}

TEST(Datasets, ShapeProperties) {
  const auto rings = sample_dataset({DatasetName::Rings, {}, 2000, 1});
  for (std::size_t i = 0; i < rings.size(); ++i) {
    const double r = std::hypot(rings[i][0], rings[i][1]);
    EXPECT_TRUE(std::abs(r - 1.0) < 0.5 || std::abs(r - 2.5) < 0.5) << r;
  }
  const auto mog = sample_dataset({DatasetName::MoG2D, {}, 2000, 1});
  const auto centres = mog2d_centres();
  for (std::size_t i = 0; i < mog.size(); ++i) {
    double best = 1e9;
    for (auto [cx, cy] : centres) best = std::min(best, std::hypot(mog[i][0] - cx, mog[i][1] - cy));
    EXPECT_LT(best, 1.2);
  }
  const auto cosine = sample_dataset({DatasetName::Cosine, {}, 2000, 1});
  double resid = 0.0;
  for (std::size_t i = 0; i < cosine.size(); ++i) {
    const double r = cosine[i][1] - 2.0 * std::cos(std::numbers::pi * cosine[i][0] / 2.0);
    resid += r * r;
  }
  EXPECT_NEAR(std::sqrt(resid / cosine.size()), 0.3, 0.03);
}

TEST(Datasets, Mog1dParams) {
  const auto d = sample_dataset({DatasetName::MoG1D, {{"w0", 1.0}, {"m0", 3.0}, {"s0", 0.1}}, 5000, 2});
  double s = 0.0;
  for (double v : d.values()) s += v;
  EXPECT_NEAR(s / 5000.0, 3.0, 0.01);
  EXPECT_PSCD_ERROR(sample_dataset({DatasetName::Moon, {{"noise", 0.1}}, 10, 0}), ErrorCode::InvalidSpec);
  EXPECT_PSCD_ERROR(sample_dataset({DatasetName::Moon, {}, 0, 0}), ErrorCode::InvalidSpec);
}

TEST(Datasets, ContaminationFractionAndModel) {
  const auto xs = contaminated_gaussian(20000, 0.2, 3);
  int near_contaminant = 0;
  for (double v : xs) near_contaminant += v > 1.2;
  // P(target > 1.2) is about 9e-4.
  EXPECT_NEAR(near_contaminant / 20000.0, 0.2, 0.012);
  const auto dens = contaminated_density(0.2);
  EXPECT_NEAR(dens.mean(), 0.8 * -1.0 + 0.2 * 2.0, 1e-15);
  EXPECT_NEAR(dens.variance(), 0.8 * (0.5 + 1.0) + 0.2 * (0.05 + 4.0) - 0.16, 1e-12);
  EXPECT_PSCD_ERROR(contaminated_gaussian(10, 0.5, 0), ErrorCode::InvalidSpec);
  EXPECT_PSCD_ERROR(sample_dataset({DatasetName::ContaminatedGaussian, {}, 10, 0}), ErrorCode::InvalidSpec);
  const auto clean = sample_dataset({DatasetName::ContaminatedGaussian, {{"ratio", 0.0}}, 10, 0});
  EXPECT_EQ(clean.dim(), 1u);
}

TEST(Datasets, Serialization) {
  const PointSet p(2, std::vector<double>{0.5, -1.0, 0.1, 2.0});
  EXPECT_EQ(dataset_csv(p), "x0,x1\n0.5,-1\n0.10000000000000001,2\n");
  const auto bin = dataset_binary(p);
  ASSERT_EQ(bin.size(), 32u);
  double first = 0.0;
  std::memcpy(&first, bin.data(), 8);
  EXPECT_EQ(first, 0.5);
}

}  // namespace
}  // namespace pscd
