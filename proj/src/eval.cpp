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

#include "pscd/eval.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "parallel.hpp"
#include "pscd/csv.hpp"
#include "pscd/error.hpp"
#include "pscd/numerics.hpp"

namespace pscd {

namespace {

Error invalid_input(const std::string& what) { return Error("eval", ErrorCode::InvalidInput, what); }

double sq_dist(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double t = a[d] - b[d];
    s += t * t;
  }
  return s;
}

void check_sets(const PointSet& x, const PointSet& y) {
  if (x.size() < 2 || y.size() < 2) throw invalid_input("MMD needs at least 2 samples per set");
  if (x.dim() != y.dim()) throw invalid_input("MMD sets have different dimensions");
}

/// Lexicographic order on (size, values); decides which argument goes first.
bool canonical_first(const PointSet& x, const PointSet& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  const auto& a = x.values();
  const auto& b = y.values();
  return !std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

double bandwidth(const PointSet& x, const PointSet& y, const MmdConfig& cfg) {
  if (cfg.fixed_bandwidth) return *cfg.fixed_bandwidth;
  const double h = median_pairwise_distance(x, y);
  if (!(h > 0.0)) {
    spdlog::warn("median pairwise distance is zero; using bandwidth 1");
    return 1.0;
  }
  return h;
}

/// Mean of k(a_i, b_j); row sums in parallel or not, then a fixed-order
/// pairwise reduction.
template <bool Parallel>
double kernel_mean(const PointSet& a, const PointSet& b, double inv_two_h2) {
  std::vector<double> rows(a.size());
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ai = a[static_cast<std::size_t>(i)];
    std::vector<double> k(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) k[j] = std::exp(-sq_dist(ai, b[j]) * inv_two_h2);
    rows[static_cast<std::size_t>(i)] = pairwise_sum(k);
  }
  return pairwise_sum(rows) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

template <bool Parallel>
double mmd_impl(const PointSet& x_in, const PointSet& y_in, const MmdConfig& cfg) {
  check_sets(x_in, y_in);
  cfg.validate();
  const bool keep = canonical_first(x_in, y_in);
  const PointSet& x = keep ? x_in : y_in;
  const PointSet& y = keep ? y_in : x_in;
  const double h = bandwidth(x, y, cfg);
  const double inv = 1.0 / (2.0 * h * h);
  const double kxx = kernel_mean<Parallel>(x, x, inv);
  const double kyy = kernel_mean<Parallel>(y, y, inv);
  const double kxy = kernel_mean<Parallel>(x, y, inv);
  return (kxx + kyy - 2.0 * kxy) * cfg.report_scale;
}

}  // namespace

void MmdConfig::validate() const {
  if (fixed_bandwidth && !(*fixed_bandwidth > 0.0 && std::isfinite(*fixed_bandwidth))) {
    throw Error("eval", ErrorCode::InvalidParameter, "fixed bandwidth must be positive");
  }
  if (!std::isfinite(report_scale)) throw Error("eval", ErrorCode::InvalidParameter, "report_scale must be finite");
}

double median_pairwise_distance(const PointSet& x, const PointSet& y) {
  check_sets(x, y);
  PointSet z(x.dim());
  z.reserve(x.size() + y.size());
  for (std::size_t i = 0; i < x.size(); ++i) z.push_back(x[i]);
  for (std::size_t i = 0; i < y.size(); ++i) z.push_back(y[i]);
  std::vector<double> d;
  d.reserve(z.size() * (z.size() - 1) / 2);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) d.push_back(std::sqrt(sq_dist(z[i], z[j])));
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  const double upper = d[mid];
  if (d.size() % 2 == 1) return upper;
  const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double serial::mmd(const PointSet& x, const PointSet& y, const MmdConfig& cfg) { return mmd_impl<false>(x, y, cfg); }

double mmd(const PointSet& x, const PointSet& y, const MmdConfig& cfg) { return mmd_impl<true>(x, y, cfg); }

std::uint64_t Histogram2D::total() const noexcept {
  std::uint64_t s = overflow;
  for (auto c : counts) s += c;
  return s;
}

Histogram2D histogram2d(const PointSet& samples, std::size_t bins, double lo, double hi) {
  if (samples.size() == 0) throw invalid_input("histogram needs at least one sample");
  if (samples.dim() != 2) throw invalid_input("histogram2d needs 2-D samples");
  if (bins < 2) throw Error("eval", ErrorCode::InvalidParameter, "histogram needs at least 2 bins");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error("eval", ErrorCode::InvalidParameter, "histogram range needs lo < hi");
  }
  Histogram2D h{bins, lo, hi, std::vector<std::uint64_t>(bins * bins, 0), 0};
  const double scale = static_cast<double>(bins) / (hi - lo);
  auto bin_of = [&](double v) -> std::optional<std::size_t> {
    if (!(v >= lo && v <= hi)) return std::nullopt;
    const auto b = static_cast<std::size_t>((v - lo) * scale);
    return std::min(b, bins - 1);
  };
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto p = samples[k];
    const auto i = bin_of(p[0]);
    const auto j = bin_of(p[1]);
    if (i && j) {
      ++h.counts[*i * bins + *j];
    } else {
      ++h.overflow;
    }
  }
  return h;
}

std::string histogram_csv(const Histogram2D& hist) {
  std::string out;
  for (std::size_t i = 0; i < hist.bins; ++i) {
    for (std::size_t j = 0; j < hist.bins; ++j) {
      if (j) out += ',';
      out += std::to_string(hist.at(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
  CsvWriter w({"dataset", "method", "gamma", "seed", "mmd_x1e4"});
  for (const auto& r : rows) w.row(r.dataset, r.method, r.gamma, r.seed, r.mmd_x1e4);
  return w.str();
}

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) throw invalid_input("mean_std needs at least one value");
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  if (values.size() == 1) return {mean, 0.0};
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return {mean, std::sqrt(pairwise_sum(sq) / (n - 1.0))};
}

}  // namespace pscd
