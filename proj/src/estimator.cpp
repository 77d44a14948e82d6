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

#include "pscd/estimator.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "pscd/numerics.hpp"

namespace pscd {

namespace {

constexpr std::size_t kRowBlock = 8;

/// out += sum_{i in [first, last)} w_i * row_i, summed pairwise over rows.
void weighted_rows_sum(const BatchGradients& g, std::span<const double> w, std::size_t first,
                       std::size_t last, std::span<double> out) {
  const std::size_t np = g.num_params;
  if (last - first <= kRowBlock) {
    for (std::size_t i = first; i < last; ++i) {
      const auto row = g.grad(i);
      for (std::size_t j = 0; j < np; ++j) out[j] += w[i] * row[j];
    }
    return;
  }
  const std::size_t mid = first + (last - first) / 2;
  std::vector<double> right(np, 0.0);
  weighted_rows_sum(g, w, first, mid, out);
  weighted_rows_sum(g, w, mid, last, right);
  for (std::size_t j = 0; j < np; ++j) out[j] += right[j];
}

std::vector<double> weighted_mean_gradient(const BatchGradients& g, std::span<const double> w) {
  std::vector<double> out(g.num_params, 0.0);
  if (!w.empty()) weighted_rows_sum(g, w, 0, w.size(), out);
  return out;
}

void require_batches(const PointSet& pos, const PointSet& neg, const EnergyModel& model) {
  if (pos.empty() || neg.empty()) throw Error("estimator", ErrorCode::EmptyBatch, "minibatch is empty");
  if (pos.dim() != model.input_dim() || neg.dim() != model.input_dim()) {
    throw Error("estimator", ErrorCode::InvalidInput, "batch dimension does not match the model");
  }
}

std::vector<double> scaled(std::span<const double> v, double s) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [s](double x) { return s * x; });
  return out;
}

std::vector<double> squares(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return x * x; });
  return out;
}

/// l2 * (mean(E+^2) + mean(E-^2)) and its gradient, accumulated into grad.
double add_l2_term(const BatchGradients& pos, const BatchGradients& neg, double l2, std::vector<double>& grad) {
  if (l2 == 0.0) return 0.0;
  const double np = static_cast<double>(pos.energies.size());
  const double nn = static_cast<double>(neg.energies.size());
  // d/dtheta of l2 * mean(E^2) = sum_i (2 l2 E_i / n) dE_i
  std::vector<double> wp(pos.energies.size());
  std::vector<double> wn(neg.energies.size());
  for (std::size_t i = 0; i < wp.size(); ++i) wp[i] = 2.0 * l2 * pos.energies[i] / np;
  for (std::size_t i = 0; i < wn.size(); ++i) wn[i] = 2.0 * l2 * neg.energies[i] / nn;
  const auto gp = weighted_mean_gradient(pos, wp);
  const auto gn = weighted_mean_gradient(neg, wn);
  for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += gp[j] + gn[j];
  return l2 * (pairwise_sum(squares(pos.energies)) / np + pairwise_sum(squares(neg.energies)) / nn);
}

void check_gamma(double gamma) {
  if (gamma == 0.0) throw Error("estimator", ErrorCode::InvalidGamma, "PS-CD needs gamma != 0; use cd_gradient");
  if (!(gamma > -1.0) || !std::isfinite(gamma)) {
    throw Error("estimator", ErrorCode::InvalidGamma, "gamma must be finite and > -1");
  }
}

}  // namespace

GradientEstimate pscd_gradient(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                               const EstimatorConfig& cfg) {
  check_gamma(cfg.gamma);
  require_batches(pos, neg, model);
  if (pos.size() != neg.size()) {
    throw Error("estimator", ErrorCode::InvalidInput, "PS-CD needs equally sized positive and negative batches");
  }
  const auto gp = batch_energy_grads(model, pos);
  const auto gn = batch_energy_grads(model, neg);

  GradientEstimate out;
  out.weights_pos = stable_softmax(scaled(gp.energies, -cfg.gamma));
  out.weights_neg = stable_softmax(scaled(gn.energies, -cfg.gamma));

  const auto pos_term = weighted_mean_gradient(gp, out.weights_pos);
  const auto neg_term = weighted_mean_gradient(gn, out.weights_neg);
  out.grad.resize(model.num_params());
  for (std::size_t j = 0; j < out.grad.size(); ++j) out.grad[j] = pos_term[j] - neg_term[j];

  std::vector<double> weighted_neg(gn.energies.size());
  for (std::size_t i = 0; i < weighted_neg.size(); ++i) weighted_neg[i] = out.weights_neg[i] * gn.energies[i];
  out.loss_value = -logmeanexp(scaled(gp.energies, -cfg.gamma)) / cfg.gamma - pairwise_sum(weighted_neg);
  out.loss_value += add_l2_term(gp, gn, cfg.l2_coeff, out.grad);

  out.ess = effective_sample_size(out.weights_neg);
  const double n = static_cast<double>(neg.size());
  if (out.ess < 0.1 * n) {
    spdlog::warn("PS-CD importance weights degenerate: ess {:.2f} of {} (gamma {})", out.ess, neg.size(), cfg.gamma);
  }
  for (double v : out.grad) {
    if (!std::isfinite(v)) throw Error("estimator", ErrorCode::NumericalError, "PS-CD gradient is not finite");
  }
  return out;
}

GradientEstimate cd_gradient(const EnergyModel& model, const PointSet& pos, const PointSet& neg, double l2_coeff) {
  require_batches(pos, neg, model);
  const auto gp = batch_energy_grads(model, pos);
  const auto gn = batch_energy_grads(model, neg);

  GradientEstimate out;
  out.weights_pos.assign(pos.size(), 1.0 / static_cast<double>(pos.size()));
  out.weights_neg.assign(neg.size(), 1.0 / static_cast<double>(neg.size()));
  const auto pos_term = weighted_mean_gradient(gp, out.weights_pos);
  const auto neg_term = weighted_mean_gradient(gn, out.weights_neg);
  out.grad.resize(model.num_params());
  for (std::size_t j = 0; j < out.grad.size(); ++j) out.grad[j] = pos_term[j] - neg_term[j];

  out.loss_value = pairwise_sum(gp.energies) / static_cast<double>(pos.size()) -
                   pairwise_sum(gn.energies) / static_cast<double>(neg.size());
  out.loss_value += add_l2_term(gp, gn, l2_coeff, out.grad);
  out.ess = static_cast<double>(neg.size());
  for (double v : out.grad) {
    if (!std::isfinite(v)) throw Error("estimator", ErrorCode::NumericalError, "CD gradient is not finite");
  }
  return out;
}

double pscd_frozen_loss(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                        const EstimatorConfig& cfg, std::span<const double> frozen_weights_neg) {
  check_gamma(cfg.gamma);
  require_batches(pos, neg, model);
  const auto ep = batch_energy(model, pos);
  const auto en = batch_energy(model, neg);
  std::vector<double> weighted(en.size());
  for (std::size_t i = 0; i < en.size(); ++i) weighted[i] = frozen_weights_neg[i] * en[i];
  double loss = -logmeanexp(scaled(ep, -cfg.gamma)) / cfg.gamma - pairwise_sum(weighted);
  if (cfg.l2_coeff != 0.0) {
    loss += cfg.l2_coeff * (pairwise_sum(squares(ep)) / static_cast<double>(ep.size()) +
                            pairwise_sum(squares(en)) / static_cast<double>(en.size()));
  }
  return loss;
}

double frozen_weight_fd_check(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                              const EstimatorConfig& cfg, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error("estimator", ErrorCode::InvalidParameter, "finite-difference step must be positive");
  }
  const auto base = pscd_gradient(model, pos, neg, cfg);
  double scale = 0.0;
  for (double g : base.grad) scale = std::max(scale, std::abs(g));
  const double floor = std::max(1e-3 * scale, 1e-300);

  EnergyModel probe = model;
  const std::vector<double> theta(model.params().begin(), model.params().end());
  double worst = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    auto shifted = theta;
    shifted[j] = theta[j] + step;
    probe.set_params(shifted);
    const double up = pscd_frozen_loss(probe, pos, neg, cfg, base.weights_neg);
    shifted[j] = theta[j] - step;
    probe.set_params(shifted);
    const double down = pscd_frozen_loss(probe, pos, neg, cfg, base.weights_neg);
    const double fd = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(base.grad[j]), std::abs(fd), floor});
    worst = std::max(worst, std::abs(fd - base.grad[j]) / denom);
  }
  return worst;
}

}  // namespace pscd
