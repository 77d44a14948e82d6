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

#include "pscd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "pscd/csv.hpp"
#include "pscd/numerics.hpp"

namespace pscd {

namespace {

Error invalid(const std::string& what) { return Error("oracle", ErrorCode::InvalidParameter, what); }

void check_gamma(double gamma) {
  if (gamma == 0.0 || !(gamma > -1.0) || !std::isfinite(gamma)) {
    throw Error("oracle", ErrorCode::InvalidGamma, "gamma must be nonzero, finite and > -1");
  }
}

/// sum_i w_i g_i for normalized weights given in log space.
std::vector<double> softmax_average(std::span<const double> log_weights, const BatchGradients& grads) {
  const auto w = stable_softmax(log_weights);
  std::vector<double> out(grads.num_params, 0.0);
  std::vector<double> column(w.size());
  for (std::size_t j = 0; j < grads.num_params; ++j) {
    for (std::size_t i = 0; i < w.size(); ++i) column[i] = w[i] * grads.grad(i)[j];
    out[j] = pairwise_sum(column);
  }
  return out;
}

BatchGradients grid_gradients(const EnergyModel& model, const QuadratureDomain& domain) {
  if (model.kind() != EnergyKind::GaussianQuadratic) {
    throw Error("oracle", ErrorCode::InvalidModelKind, "quadrature oracle needs a GaussianQuadratic model");
  }
  domain.validate();
  PointSet nodes(1, domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) nodes[i][0] = domain.node(i);
  return serial::batch_energy_grads(model, nodes);
}

double cell_loss(std::span<const double> log_p, const DensitySpec& p, double mu, double sigma, double gamma,
                 const QuadratureDomain& domain, std::vector<double>& a, std::vector<double>& b) {
  if (gamma == 0.0) {
    // E_p[(x - mu)^2] / (2 sigma^2) + log(sigma sqrt(2 pi)) from mixture moments.
    const double d = p.mean() - mu;
    return (p.variance() + d * d) / (2.0 * sigma * sigma) + std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  a.resize(domain.points);
  b.resize(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    const double d = domain.node(i) - mu;
    const double e = d * d * inv_two_var;
    const double lw = domain.log_weight(i);
    a[i] = log_p[i] - gamma * e + lw;
    b[i] = -(gamma + 1.0) * e + lw;
  }
  const double data_term = logsumexp(a) / gamma;
  const double log_norm_term = logsumexp(b) / (gamma + 1.0);
  return -(data_term - log_norm_term);
}

void check_landscape_inputs(std::span<const double> mu_grid, std::span<const double> sigma_grid, double gamma,
                            const QuadratureDomain& domain) {
  if (mu_grid.empty() || sigma_grid.empty()) throw invalid("landscape grids must be nonempty");
  for (double s : sigma_grid) {
    if (!(s > 0.0)) throw invalid("landscape sigma grid must be strictly positive");
  }
  if (!(gamma > -1.0) || !std::isfinite(gamma)) throw invalid("landscape gamma must lie in (-1, inf)");
  domain.validate();
}

LandscapeGrid make_grid(std::span<const double> mu_grid, std::span<const double> sigma_grid, double gamma) {
  LandscapeGrid grid;
  grid.mu.assign(mu_grid.begin(), mu_grid.end());
  grid.sigma.assign(sigma_grid.begin(), sigma_grid.end());
  grid.gamma = gamma;
  grid.loss.resize(mu_grid.size() * sigma_grid.size());
  return grid;
}

std::vector<double> log_density_on_grid(const DensitySpec& p, const QuadratureDomain& domain) {
  std::vector<double> out(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) out[i] = p.log_pdf(domain.node(i));
  return out;
}

}  // namespace

void DiscreteSpace::validate() const {
  if (points.size() < 2 || points.size() != p_probs.size()) {
    throw invalid("discrete space needs >= 2 points and one probability per point");
  }
  double total = 0.0;
  for (double p : p_probs) {
    if (!(p >= 0.0)) throw invalid("discrete probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw invalid("discrete probabilities must sum to 1");
}

namespace {

std::size_t draw_index(std::span<const double> cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

PointSet sample_categorical(const PointSet& points, std::span<const double> probs, std::size_t n, Rng& rng) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  PointSet out(points.dim());
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(points[draw_index(cdf, rng)]);
  return out;
}

}  // namespace

PointSet DiscreteSpace::sample(std::size_t n, Rng& rng) const { return sample_categorical(points, p_probs, n, rng); }

PointSet DiscreteSpace::sample_model(const EnergyModel& model, std::size_t n, Rng& rng) const {
  auto e = serial::batch_energy(model, points);
  for (double& v : e) v = -v;
  return sample_categorical(points, stable_softmax(e), n, rng);
}

DiscreteSpace reference_discrete_space() {
  DiscreteSpace space;
  space.points = PointSet(1);
  const std::vector<double> mass{8, 1, 6, 2, 5, 3, 4, 7};
  double total = 0.0;
  for (double m : mass) total += m;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    const double x = std::sqrt(0.6 * static_cast<double>(k));
    space.points.push_back(std::span<const double>(&x, 1));
    space.p_probs.push_back(mass[k] / total);
  }
  return space;
}

std::vector<double> exact_pscd_gradient_discrete(const EnergyModel& model, const DiscreteSpace& space, double gamma) {
  check_gamma(gamma);
  space.validate();
  const auto g = serial::batch_energy_grads(model, space.points);
  const std::size_t n = g.energies.size();
  std::vector<double> data_logw(n);
  std::vector<double> aux_logw(n);
  for (std::size_t i = 0; i < n; ++i) {
    data_logw[i] = space.p_probs[i] > 0.0 ? std::log(space.p_probs[i]) - gamma * g.energies[i]
                                          : -std::numeric_limits<double>::infinity();
    aux_logw[i] = -(gamma + 1.0) * g.energies[i];
  }
  // stable_softmax rejects -inf; zero-probability states are dropped instead.
  std::vector<double> kept_logw;
  BatchGradients kept;
  kept.num_params = g.num_params;
  for (std::size_t i = 0; i < n; ++i) {
    if (space.p_probs[i] > 0.0) {
      kept_logw.push_back(data_logw[i]);
      const auto row = g.grad(i);
      kept.grads.insert(kept.grads.end(), row.begin(), row.end());
      kept.energies.push_back(g.energies[i]);
    }
  }
  const auto data_term = softmax_average(kept_logw, kept);
  const auto aux_term = softmax_average(aux_logw, g);
  std::vector<double> out(g.num_params);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = data_term[j] - aux_term[j];
  return out;
}

double discrete_pscd_loss(const EnergyModel& model, const DiscreteSpace& space, double gamma) {
  check_gamma(gamma);
  space.validate();
  const auto e = serial::batch_energy(model, space.points);
  std::vector<double> a;
  std::vector<double> b(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (space.p_probs[i] > 0.0) a.push_back(std::log(space.p_probs[i]) - gamma * e[i]);
    b[i] = -(gamma + 1.0) * e[i];
  }
  return -logsumexp(a) / gamma + logsumexp(b) / (gamma + 1.0);
}

std::vector<double> exact_cd_gradient_discrete(const EnergyModel& model, const DiscreteSpace& space) {
  space.validate();
  const auto g = serial::batch_energy_grads(model, space.points);
  std::vector<double> neg_logw(g.energies.size());
  for (std::size_t i = 0; i < neg_logw.size(); ++i) neg_logw[i] = -g.energies[i];
  const auto w = stable_softmax(neg_logw);
  std::vector<double> out(g.num_params, 0.0);
  std::vector<double> column(w.size());
  for (std::size_t j = 0; j < g.num_params; ++j) {
    for (std::size_t i = 0; i < w.size(); ++i) column[i] = (space.p_probs[i] - w[i]) * g.grad(i)[j];
    out[j] = pairwise_sum(column);
  }
  return out;
}

EnergyBounds measure_bounds(const EnergyModel& model, const DiscreteSpace& space) {
  space.validate();
  const auto g = serial::batch_energy_grads(model, space.points);
  EnergyBounds b;
  for (std::size_t i = 0; i < g.energies.size(); ++i) {
    b.energy_bound = std::max(b.energy_bound, std::abs(g.energies[i]));
    b.gradient_bound = std::max(b.gradient_bound, l2_norm(g.grad(i)));
  }
  return b;
}

double sample_complexity_bound(const EnergyBounds& bounds, double gamma, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) throw invalid("need eps > 0 and delta in (0, 1)");
  const double l = bounds.gradient_bound;
  return std::ceil(32.0 * l * l * std::exp(8.0 * gamma * bounds.energy_bound) *
                   (1.0 + 4.0 * std::log(2.0 / delta)) / (eps * eps));
}

std::vector<double> exact_pscd_gradient_quadrature(const EnergyModel& model, const DensitySpec& p, double gamma,
                                                   const QuadratureDomain& domain) {
  check_gamma(gamma);
  const auto g = grid_gradients(model, domain);
  std::vector<double> data_logw(domain.points);
  std::vector<double> aux_logw(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    const double lw = domain.log_weight(i);
    data_logw[i] = p.log_pdf(domain.node(i)) - gamma * g.energies[i] + lw;
    aux_logw[i] = -(gamma + 1.0) * g.energies[i] + lw;
  }
  const auto data_term = softmax_average(data_logw, g);
  const auto aux_term = softmax_average(aux_logw, g);
  std::vector<double> out(g.num_params);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = data_term[j] - aux_term[j];
  return out;
}

std::vector<double> exact_cd_gradient_quadrature(const EnergyModel& model, const DensitySpec& p,
                                                 const QuadratureDomain& domain) {
  const auto g = grid_gradients(model, domain);
  std::vector<double> data_logw(domain.points);
  std::vector<double> model_logw(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    const double lw = domain.log_weight(i);
    data_logw[i] = p.log_pdf(domain.node(i)) + lw;
    model_logw[i] = -g.energies[i] + lw;
  }
  const auto data_term = softmax_average(data_logw, g);
  const auto model_term = softmax_average(model_logw, g);
  std::vector<double> out(g.num_params);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = data_term[j] - model_term[j];
  return out;
}

std::vector<double> closed_form_cd_gradient(const EnergyModel& model, const DensitySpec& p) {
  const double mu = model.mu();
  const double var = model.sigma() * model.sigma();
  const double d = p.mean() - mu;
  // dE = [-(x - mu) / s^2, -(x - mu)^2 / s^2]; under q the expectation is [0, -1].
  return {-d / var, -(p.variance() + d * d) / var + 1.0};
}

std::pair<std::size_t, std::size_t> LandscapeGrid::argmin() const {
  const auto it = std::min_element(loss.begin(), loss.end());
  const auto k = static_cast<std::size_t>(it - loss.begin());
  return {k / sigma.size(), k % sigma.size()};
}

namespace serial {

LandscapeGrid landscape_grid(const DensitySpec& p, std::span<const double> mu_grid,
                             std::span<const double> sigma_grid, double gamma, const QuadratureDomain& domain) {
  check_landscape_inputs(mu_grid, sigma_grid, gamma, domain);
  auto grid = make_grid(mu_grid, sigma_grid, gamma);
  const auto log_p = log_density_on_grid(p, domain);
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    for (std::size_t j = 0; j < sigma_grid.size(); ++j) {
      grid.loss[i * sigma_grid.size() + j] = cell_loss(log_p, p, mu_grid[i], sigma_grid[j], gamma, domain, a, b);
    }
  }
  return grid;
}

}  // namespace serial

LandscapeGrid landscape_grid(const DensitySpec& p, std::span<const double> mu_grid,
                             std::span<const double> sigma_grid, double gamma, const QuadratureDomain& domain) {
  check_landscape_inputs(mu_grid, sigma_grid, gamma, domain);
  auto grid = make_grid(mu_grid, sigma_grid, gamma);
  const auto log_p = log_density_on_grid(p, domain);
  const std::size_t cols = sigma_grid.size();
  const auto cells = static_cast<std::ptrdiff_t>(mu_grid.size() * cols);
#pragma omp parallel
  {
    std::vector<double> a;
    std::vector<double> b;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < cells; ++k) {
      const auto i = static_cast<std::size_t>(k) / cols;
      const auto j = static_cast<std::size_t>(k) % cols;
      grid.loss[static_cast<std::size_t>(k)] = cell_loss(log_p, p, mu_grid[i], sigma_grid[j], gamma, domain, a, b);
    }
  }
  return grid;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::string landscape_csv(const LandscapeGrid& grid) {
  CsvWriter csv({"mu", "sigma", "gamma", "loss"});
  for (std::size_t i = 0; i < grid.mu.size(); ++i) {
    for (std::size_t j = 0; j < grid.sigma.size(); ++j) {
      csv.row(grid.mu[i], grid.sigma[j], grid.gamma, grid.at(i, j));
    }
  }
  return csv.str();
}

}  // namespace pscd
