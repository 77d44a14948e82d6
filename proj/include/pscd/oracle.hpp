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
#include <string>
#include <vector>

#include "pscd/energy.hpp"
#include "pscd/points.hpp"
#include "pscd/rng.hpp"
#include "pscd/scoring.hpp"

namespace pscd {

/// Finite sample space with a data distribution over its points.
struct DiscreteSpace {
  PointSet points;
  std::vector<double> p_probs;

  /// InvalidParameter unless |points| == |p_probs| >= 2, probs >= 0, sum 1 (1e-12).
  void validate() const;
  /// n i.i.d. draws from p_probs (inverse CDF).
  PointSet sample(std::size_t n, Rng& rng) const;
  /// n i.i.d. draws from the model distribution exp(-E) / Z on the space.
  PointSet sample_model(const EnergyModel& model, std::size_t n, Rng& rng) const;
};

/// The fixed 8-state space used by the consistency and sample-complexity
/// studies: x_k = sqrt(0.6 k), k = 0..7, so a GaussianQuadratic(0, 1) model has
/// energies 0, 0.3, ..., 2.1. Data probabilities are proportional to
/// (8, 1, 6, 2, 5, 3, 4, 7).
DiscreteSpace reference_discrete_space();

/// Exact gradient of L_gamma(theta) = -S_gamma(p, q_theta) on a finite space:
///   sum a_i dE_i - sum r_i dE_i,
///   a_i proportional to p_i exp(-gamma E_i), r_i to exp(-(gamma + 1) E_i),
/// with max-shifted exponentials. InvalidGamma for gamma == 0 or <= -1.
std::vector<double> exact_pscd_gradient_discrete(const EnergyModel& model, const DiscreteSpace& space,
                                                 double gamma);

/// L_gamma(theta) on the finite space (the discrete negative gamma-score).
double discrete_pscd_loss(const EnergyModel& model, const DiscreteSpace& space, double gamma);

/// Exact gradient of the log-likelihood loss on the finite space:
/// E_p[dE] - E_q[dE].
std::vector<double> exact_cd_gradient_discrete(const EnergyModel& model, const DiscreteSpace& space);

/// Bounds of the sample-complexity analysis measured on the space at the
/// current parameters: K = max |E(x)|, L = max ||dE/dtheta(x)||.
struct EnergyBounds {
  double energy_bound = 0.0;
  double gradient_bound = 0.0;
};
EnergyBounds measure_bounds(const EnergyModel& model, const DiscreteSpace& space);

/// N >= 32 L^2 exp(8 gamma K) (1 + 4 log(2 / delta)) / eps^2, rounded up.
double sample_complexity_bound(const EnergyBounds& bounds, double gamma, double eps, double delta);

/// Continuous counterpart for a 1-D GaussianQuadratic model: both
/// expectations by quadrature (against p and against the normalized r_theta).
std::vector<double> exact_pscd_gradient_quadrature(const EnergyModel& model, const DensitySpec& p,
                                                   double gamma, const QuadratureDomain& domain);

/// E_p[dE] - E_q[dE] by quadrature (the log-likelihood gradient).
std::vector<double> exact_cd_gradient_quadrature(const EnergyModel& model, const DensitySpec& p,
                                                 const QuadratureDomain& domain);

/// Closed-form log-likelihood gradient of a GaussianQuadratic model when p is
/// a Gaussian mixture, w.r.t. (mu, log sigma).
std::vector<double> closed_form_cd_gradient(const EnergyModel& model, const DensitySpec& p);

/// Row-major |mu_grid| x |sigma_grid| matrix of loss values.
struct LandscapeGrid {
  std::vector<double> mu;
  std::vector<double> sigma;
  double gamma = 0.0;
  std::vector<double> loss;

  double at(std::size_t i, std::size_t j) const noexcept { return loss[i * sigma.size() + j]; }
  /// (mu index, sigma index) of the smallest entry; first one wins on ties.
  std::pair<std::size_t, std::size_t> argmin() const;
};

/// L_gamma((mu, sigma); p) = -gamma_score for gamma != 0, and the negative
/// log-likelihood E_p[E] + log(sigma sqrt(2 pi)) for gamma == 0.
/// InvalidParameter on empty grids, nonpositive sigma or gamma <= -1.
namespace serial {
LandscapeGrid landscape_grid(const DensitySpec& p, std::span<const double> mu_grid,
                             std::span<const double> sigma_grid, double gamma, const QuadratureDomain& domain);
}
LandscapeGrid landscape_grid(const DensitySpec& p, std::span<const double> mu_grid,
                             std::span<const double> sigma_grid, double gamma, const QuadratureDomain& domain);

/// Evenly spaced grid with `count` points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// CSV with header `mu,sigma,gamma,loss`, rows in row-major order, 17
/// significant digits, LF endings.
std::string landscape_csv(const LandscapeGrid& grid);

}  // namespace pscd
