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

#include <functional>
#include <vector>

#include "pscd/energy.hpp"
#include "pscd/rng.hpp"

namespace pscd {

/// Uniform grid on [lo, hi] for composite-trapezoid integration.
struct QuadratureDomain {
  double lo = -10.0;
  double hi = 10.0;
  std::size_t points = 4096;

  /// InvalidParameter unless lo < hi, points >= 16 and the spacing is finite.
  void validate() const;
  double spacing() const noexcept { return (hi - lo) / static_cast<double>(points - 1); }
  double node(std::size_t i) const noexcept;
  /// log of the trapezoid weight of node i (spacing included).
  double log_weight(std::size_t i) const noexcept;
};

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double stddev = 1.0;
};

/// 1-D Gaussian mixture density.
class DensitySpec {
 public:
  DensitySpec() = default;
  /// InvalidParameter unless weights are positive and sum to 1 (1e-12) and
  /// stds are strictly positive.
  explicit DensitySpec(std::vector<GaussianComponent> components);

  static DensitySpec gaussian(double mean, double stddev) {
    return DensitySpec({{1.0, mean, stddev}});
  }

  const std::vector<GaussianComponent>& components() const noexcept { return components_; }

  double pdf(double x) const noexcept;
  /// Computed in log space; -inf only when every component underflows there.
  double log_pdf(double x) const noexcept;
  std::vector<double> sample(std::size_t n, Rng& rng) const;

  /// [min mean - 10 max std, max mean + 10 max std] with 4096 points.
  QuadratureDomain default_domain(std::size_t points = 4096) const;

  double mean() const noexcept;
  double variance() const noexcept;

 private:
  std::vector<GaussianComponent> components_;
};

/// 1-D energy callback; scoring accepts any unnormalized density exp(-E).
using EnergyFn = std::function<double(double)>;

EnergyFn as_energy_fn(const EnergyModel& model);
/// E_p(x) = -log p(x); lets a density be scored as a model.
EnergyFn as_energy_fn(const DensitySpec& density);

/// Composite-trapezoid estimate of the integral of f(x) p(x) over the domain.
/// NumericalError naming the grid point when f is non-finite there.
double quadrature_expectation(const std::function<double(double)>& f, const DensitySpec& density,
                              const QuadratureDomain& domain);

/// log of the integral of exp(g(x)) over the domain, max-shifted.
double log_integral_exp(const std::function<double(double)>& log_integrand,
                        const QuadratureDomain& domain);

struct ScoreReport {
  double gamma = 0.0;
  double score = 0.0;
  double log_norm_term = 0.0;
  double data_term = 0.0;
};

/// Expected gamma-score of the unnormalized density exp(-E) under p:
///   data_term     = (1/gamma) log int p exp(-gamma E)
///   log_norm_term = (1/(gamma+1)) log int exp(-(gamma+1) E)
///   score         = data_term - log_norm_term
/// InvalidGamma when gamma == 0 (use log_score) or gamma <= -1.
ScoreReport gamma_score(const DensitySpec& p, const EnergyFn& energy, double gamma,
                        const QuadratureDomain& domain);
ScoreReport gamma_score(const DensitySpec& p, const EnergyModel& model, double gamma,
                        const QuadratureDomain& domain);

/// S_gamma(p, p) - S_gamma(p, q).
double gamma_divergence(const DensitySpec& p, const EnergyFn& energy, double gamma,
                        const QuadratureDomain& domain);
double gamma_divergence(const DensitySpec& p, const EnergyModel& model, double gamma,
                        const QuadratureDomain& domain);

/// E_p[log q] for the normalized q = exp(-E) / Z (Z by quadrature).
double log_score(const DensitySpec& p, const EnergyFn& energy, const QuadratureDomain& domain);
double log_score(const DensitySpec& p, const EnergyModel& model, const QuadratureDomain& domain);

/// Renyi entropy (alpha / (1 - alpha)) log ||q||_alpha of the normalized model
/// density. InvalidOrder for alpha <= 0 or alpha == 1.
double renyi_entropy(const EnergyFn& energy, double order, const QuadratureDomain& domain);
double renyi_entropy(const EnergyModel& model, double order, const QuadratureDomain& domain);

/// KL(N(mu1, std1) || N(mu2, std2)). InvalidParameter on nonpositive std.
double gaussian_kl(double mu1, double std1, double mu2, double std2);

}  // namespace pscd
