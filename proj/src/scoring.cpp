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

#include "pscd/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pscd/numerics.hpp"

namespace pscd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Error invalid(const std::string& what) { return Error("scoring", ErrorCode::InvalidParameter, what); }

void check_gamma(double gamma) {
  if (gamma == 0.0) {
    throw Error("scoring", ErrorCode::InvalidGamma,
                "gamma = 0 is the log score; use log_score or the CD path");
  }
  if (!(gamma > -1.0) || !std::isfinite(gamma)) {
    throw Error("scoring", ErrorCode::InvalidGamma, "gamma must be finite and > -1");
  }
}

double log_normal_pdf(double x, double mean, double stddev) noexcept {
  const double z = (x - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// Evaluates E on the grid, naming the first non-finite node.
std::vector<double> energies_on_grid(const EnergyFn& energy, const QuadratureDomain& domain) {
  std::vector<double> e(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    const double x = domain.node(i);
    e[i] = energy(x);
    if (std::isnan(e[i]) || e[i] == kNegInf) {
      std::ostringstream msg;
      msg << "energy is not finite at grid point x = " << x;
      throw Error("scoring", ErrorCode::NumericalError, msg.str());
    }
  }
  return e;
}

/// log int exp(-scale * E) over the grid. +inf energies contribute nothing.
double log_partition(const std::vector<double>& energies, double scale, const QuadratureDomain& domain) {
  std::vector<double> terms(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) terms[i] = -scale * energies[i] + domain.log_weight(i);
  return logsumexp(terms);
}

}  // namespace

void QuadratureDomain::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw invalid("quadrature domain needs lo < hi");
  if (points < 16) throw invalid("quadrature domain needs at least 16 points");
  const double h = spacing();
  if (!std::isfinite(h) || !(h > 0.0)) throw invalid("quadrature spacing is not finite and positive");
}

double QuadratureDomain::node(std::size_t i) const noexcept {
  if (i + 1 == points) return hi;
  return lo + static_cast<double>(i) * spacing();
}

double QuadratureDomain::log_weight(std::size_t i) const noexcept {
  const double h = spacing();
  return (i == 0 || i + 1 == points) ? std::log(0.5 * h) : std::log(h);
}

DensitySpec::DensitySpec(std::vector<GaussianComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw invalid("density needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) throw invalid("mixture weights must be positive");
    if (!(c.stddev > 0.0) || !std::isfinite(c.stddev)) throw invalid("component std must be positive");
    if (!std::isfinite(c.mean)) throw invalid("component mean must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw invalid("mixture weights must sum to 1");
}

double DensitySpec::pdf(double x) const noexcept { return std::exp(log_pdf(x)); }

double DensitySpec::log_pdf(double x) const noexcept {
  if (components_.size() == 1) return log_normal_pdf(x, components_[0].mean, components_[0].stddev);
  double m = kNegInf;
  for (const auto& c : components_) m = std::max(m, std::log(c.weight) + log_normal_pdf(x, c.mean, c.stddev));
  if (m == kNegInf) return m;
  double s = 0.0;
  for (const auto& c : components_) s += std::exp(std::log(c.weight) + log_normal_pdf(x, c.mean, c.stddev) - m);
  return m + std::log(s);
}

std::vector<double> DensitySpec::sample(std::size_t n, Rng& rng) const {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = 0;
    if (components_.size() > 1) {
      double u = rng.uniform();
      while (idx + 1 < components_.size() && u >= components_[idx].weight) {
        u -= components_[idx].weight;
        ++idx;
      }
    }
    out.push_back(rng.normal(components_[idx].mean, components_[idx].stddev));
  }
  return out;
}

QuadratureDomain DensitySpec::default_domain(std::size_t points) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double max_std = 0.0;
  for (const auto& c : components_) {
    lo = std::min(lo, c.mean);
    hi = std::max(hi, c.mean);
    max_std = std::max(max_std, c.stddev);
  }
  return QuadratureDomain{lo - 10.0 * max_std, hi + 10.0 * max_std, points};
}

double DensitySpec::mean() const noexcept {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

double DensitySpec::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * (c.stddev * c.stddev + (c.mean - m) * (c.mean - m));
  return v;
}

EnergyFn as_energy_fn(const EnergyModel& model) {
  if (model.input_dim() != 1) {
    throw Error("scoring", ErrorCode::InvalidModelKind, "quadrature scoring needs a 1-D energy");
  }
  return [model](double x) { return energy_value(model, std::span<const double>(&x, 1)); };
}

EnergyFn as_energy_fn(const DensitySpec& density) {
  return [density](double x) { return -density.log_pdf(x); };
}

double quadrature_expectation(const std::function<double(double)>& f, const DensitySpec& density,
                              const QuadratureDomain& domain) {
  domain.validate();
  std::vector<double> terms(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    const double x = domain.node(i);
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg << "integrand is not finite at grid point x = " << x;
      throw Error("scoring", ErrorCode::NumericalError, msg.str());
    }
    terms[i] = fx * density.pdf(x) * std::exp(domain.log_weight(i));
  }
  return pairwise_sum(terms);
}

double log_integral_exp(const std::function<double(double)>& log_integrand, const QuadratureDomain& domain) {
  domain.validate();
  std::vector<double> terms(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) terms[i] = log_integrand(domain.node(i)) + domain.log_weight(i);
  return logsumexp(terms);
}

ScoreReport gamma_score(const DensitySpec& p, const EnergyFn& energy, double gamma,
                        const QuadratureDomain& domain) {
  check_gamma(gamma);
  domain.validate();
  const auto e = energies_on_grid(energy, domain);
  std::vector<double> data_terms(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    data_terms[i] = p.log_pdf(domain.node(i)) - gamma * e[i] + domain.log_weight(i);
  }
  ScoreReport report;
  report.gamma = gamma;
  report.data_term = logsumexp(data_terms) / gamma;
  report.log_norm_term = log_partition(e, gamma + 1.0, domain) / (gamma + 1.0);
  report.score = report.data_term - report.log_norm_term;
  if (!std::isfinite(report.score)) {
    throw Error("scoring", ErrorCode::NumericalError, "gamma-score is not finite on this domain");
  }
  return report;
}

ScoreReport gamma_score(const DensitySpec& p, const EnergyModel& model, double gamma,
                        const QuadratureDomain& domain) {
  return gamma_score(p, as_energy_fn(model), gamma, domain);
}

double gamma_divergence(const DensitySpec& p, const EnergyFn& energy, double gamma,
                        const QuadratureDomain& domain) {
  const double self = gamma_score(p, as_energy_fn(p), gamma, domain).score;
  return self - gamma_score(p, energy, gamma, domain).score;
}

double gamma_divergence(const DensitySpec& p, const EnergyModel& model, double gamma,
                        const QuadratureDomain& domain) {
  return gamma_divergence(p, as_energy_fn(model), gamma, domain);
}

double log_score(const DensitySpec& p, const EnergyFn& energy, const QuadratureDomain& domain) {
  domain.validate();
  const auto e = energies_on_grid(energy, domain);
  const double log_z = log_partition(e, 1.0, domain);
  std::vector<double> terms(domain.points);
  for (std::size_t i = 0; i < domain.points; ++i) {
    terms[i] = e[i] * p.pdf(domain.node(i)) * std::exp(domain.log_weight(i));
  }
  return -pairwise_sum(terms) - log_z;
}

double log_score(const DensitySpec& p, const EnergyModel& model, const QuadratureDomain& domain) {
  return log_score(p, as_energy_fn(model), domain);
}

double renyi_entropy(const EnergyFn& energy, double order, const QuadratureDomain& domain) {
  if (!(order > 0.0) || order == 1.0 || !std::isfinite(order)) {
    throw Error("scoring", ErrorCode::InvalidOrder, "Renyi order must be positive and != 1");
  }
  domain.validate();
  const auto e = energies_on_grid(energy, domain);
  // log int q^alpha = log int exp(-alpha E) - alpha log Z
  const double log_z = log_partition(e, 1.0, domain);
  const double log_power_integral = log_partition(e, order, domain) - order * log_z;
  return log_power_integral / (1.0 - order);
}

double renyi_entropy(const EnergyModel& model, double order, const QuadratureDomain& domain) {
  return renyi_entropy(as_energy_fn(model), order, domain);
}

double gaussian_kl(double mu1, double std1, double mu2, double std2) {
  if (!(std1 > 0.0) || !(std2 > 0.0)) throw invalid("gaussian_kl needs positive standard deviations");
  const double d = mu1 - mu2;
  return std::log(std2 / std1) + (std1 * std1 + d * d) / (2.0 * std2 * std2) - 0.5;
}

}  // namespace pscd
