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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pscd/points.hpp"
#include "pscd/scoring.hpp"

namespace pscd {

enum class DatasetName { Cosine, SwissRoll, Moon, MoG2D, Funnel, Rings, MoG1D, ContaminatedGaussian };

std::string to_string(DatasetName name);
/// InvalidSpec on unknown names. Accepts the enum spelling and the
/// lower-case / hyphenated forms ("swiss-roll", "mog2d", ...).
DatasetName dataset_from_string(const std::string& name);

/// The six 2-D benchmark sets in reporting order.
const std::vector<DatasetName>& benchmark_datasets();

/// Generator recipes (all 2-D sets lie in [-4, 4]^2 up to noise spill and are
/// rejection-sampled into [-4.5, 4.5]^2):
///   Cosine     x ~ U[-4, 4], y = 2 cos(pi x / 2) + 0.3 n
///   SwissRoll  t = 1.5 pi (1 + 2u), (t cos t, t sin t) * 3.5 / (4.5 pi) + 0.1 n
///   Moon       two half circles (cos a, sin a) and (1 - cos a, 0.5 - sin a),
///              a ~ U[0, pi], shifted by (-0.5, -0.25), scaled by 2.5, + 0.1 n
///   MoG2D      8 equal Gaussians centred on a radius-3 ring, std 0.2
///   Funnel     v ~ N(0, 1.5^2), x ~ N(0, exp(v / 2)) (std), kept inside [-4, 4]^2,
///              emitted as (v, x)
///   Rings      radius 1 or 2.5 with equal probability, angle uniform, radial
///              noise 0.08
///   MoG1D      mixture given by params w0,m0,s0,w1,m1,s1,... (default
///              0.5 N(-1.5, 0.4) + 0.5 N(1.2, 0.6))
///   ContaminatedGaussian  params ratio (required), target_mean (-1),
///              target_std (sqrt 0.5), contaminant_mean (2),
///              contaminant_std (sqrt 0.05)
/// `n` standard normals and uniforms all come from Rng(derive_seed(seed, name)).
struct DatasetSpec {
  DatasetName name = DatasetName::MoG2D;
  std::map<std::string, double> params;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

/// InvalidSpec on n == 0, unknown params or out-of-range contamination ratio.
PointSet sample_dataset(const DatasetSpec& spec);

/// Standard deviations of the contamination study. The table's N(m, v)
/// notation is read as (mean, variance).
inline constexpr double kContaminationTargetMean = -1.0;
inline constexpr double kContaminationTargetVariance = 0.5;
inline constexpr double kContaminantMean = 2.0;
inline constexpr double kContaminantVariance = 0.05;

struct ContaminationModel {
  double target_mean = kContaminationTargetMean;
  double target_std = 0.70710678118654752;
  double contaminant_mean = kContaminantMean;
  double contaminant_std = 0.22360679774997897;
};

/// Each point is drawn from the contaminant with probability `ratio`, else
/// from the clean target. InvalidSpec unless 0 <= ratio < 0.5.
std::vector<double> contaminated_gaussian(std::size_t n, double ratio, std::uint64_t seed,
                                          const ContaminationModel& model = {});

/// Mixture density of the contaminated data (used by population oracles).
DensitySpec contaminated_density(double ratio, const ContaminationModel& model = {});

/// Default mis-specified 1-D target 0.5 N(-1.5, 0.4) + 0.5 N(1.2, 0.6).
DensitySpec default_mog1d();

/// Centres of the MoG2D components (k = 0..7 at angle 2 pi k / 8).
std::vector<std::pair<double, double>> mog2d_centres();

/// CSV `x0[,x1]` with 17 significant digits.
std::string dataset_csv(const PointSet& points);
/// Raw little-endian float64 values, row-major.
std::string dataset_binary(const PointSet& points);

}  // namespace pscd
