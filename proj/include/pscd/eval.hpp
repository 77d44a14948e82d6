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
#include <optional>
#include <string>
#include <vector>

#include "pscd/points.hpp"

namespace pscd {

struct MmdConfig {
  /// Kernel bandwidth h; the median pairwise distance of x and y pooled when
  /// unset.
  std::optional<double> fixed_bandwidth;
  double report_scale = 1e4;

  /// InvalidParameter on a nonpositive fixed bandwidth or non-finite scale.
  void validate() const;
};

/// Median of the |z| (|z| - 1) / 2 pairwise Euclidean distances of x and y
/// pooled (mean of the two middle values for an even count).
double median_pairwise_distance(const PointSet& x, const PointSet& y);

/// Biased V-statistic with k(a, b) = exp(-|a - b|^2 / (2 h^2)):
///   mean k(x, x) + mean k(y, y) - 2 mean k(x, y),
/// times report_scale. The two arguments are put in a canonical order first,
/// so mmd(x, y) == mmd(y, x) bit for bit. A zero median distance falls back to
/// h = 1 with a logged warning.
///
/// InvalidInput when either set has fewer than 2 points or dimensions differ.
namespace serial {
double mmd(const PointSet& x, const PointSet& y, const MmdConfig& cfg = {});
}
double mmd(const PointSet& x, const PointSet& y, const MmdConfig& cfg = {});

struct Histogram2D {
  std::size_t bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  /// counts[i * bins + j]: i indexes the x0 bin, j the x1 bin. Values equal to
  /// hi fall into the last bin.
  std::vector<std::uint64_t> counts;
  /// Samples outside [lo, hi]^2 or non-finite.
  std::uint64_t overflow = 0;

  std::uint64_t at(std::size_t i, std::size_t j) const noexcept { return counts[i * bins + j]; }
  /// In-range counts plus overflow.
  std::uint64_t total() const noexcept;
};

/// InvalidInput on empty or non 2-D samples; InvalidParameter unless
/// bins >= 2 and lo < hi.
Histogram2D histogram2d(const PointSet& samples, std::size_t bins, double lo, double hi);

/// One line per x0 bin, `bins` comma-separated counts per line.
std::string histogram_csv(const Histogram2D& hist);

struct MetricRow {
  std::string dataset;
  std::string method;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double mmd_x1e4 = 0.0;
};

/// CSV `dataset,method,gamma,seed,mmd_x1e4`.
std::string metrics_csv(const std::vector<MetricRow>& rows);

struct MeanStd {
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single value.
  double stddev = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

}  // namespace pscd
