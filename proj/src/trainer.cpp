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

#include "pscd/trainer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pscd/csv.hpp"
#include "pscd/estimator.hpp"
#include "pscd/numerics.hpp"
#include "pscd/oracle.hpp"
#include "pscd/rng.hpp"

namespace pscd {

namespace {

Error bad_schedule(const std::string& what) { return Error("trainer", ErrorCode::InvalidSchedule, what); }
Error bad_param(const std::string& what) { return Error("trainer", ErrorCode::InvalidParameter, what); }

std::string lower(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

QuadratureDomain covering_domain(const EnergyModel& model, const DensitySpec& p) {
  auto domain = p.default_domain(4096);
  domain.lo = std::min(domain.lo, model.mu() - 12.0 * model.sigma());
  domain.hi = std::max(domain.hi, model.mu() + 12.0 * model.sigma());
  return domain;
}

/// Draws `n` rows of `data` uniformly with replacement.
PointSet draw_positives(const PointSet& data, std::size_t n, Rng& rng) {
  PointSet out(data.dim());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(data[rng.below(data.size())]);
  return out;
}

PointSet uniform_box(std::size_t dim, std::size_t n, double lo, double hi, Rng& rng) {
  PointSet out(dim, n);
  for (std::size_t i = 0; i < n * dim; ++i) out.values()[i] = rng.uniform(lo, hi);
  return out;
}

GradientEstimate estimate(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                          const TrainConfig& cfg) {
  if (cfg.gamma == 0.0) return cd_gradient(model, pos, neg, cfg.l2_coeff);
  return pscd_gradient(model, pos, neg, EstimatorConfig{cfg.gamma, cfg.l2_coeff});
}

/// Negative sampling state that persists across iterations.
class NegativeSource {
 public:
  NegativeSource(const TrainConfig& cfg, std::size_t dim) : cfg_(cfg) {
    if (const auto* lc = std::get_if<LangevinConfig>(&cfg.sampler)) {
      if (const auto* rb = std::get_if<ReplayBufferInit>(&lc->init)) {
        buffer_.emplace(dim, rb->capacity, rb->reinit_prob, rb->lo, rb->hi);
      }
    }
  }

  PointSet draw(const EnergyModel& model, const PointSet& pos, std::size_t n, Rng& exact_rng, Rng& buffer_rng,
                std::uint64_t chain_seed, bool persist) {
    if (std::holds_alternative<ExactGaussianSampler>(cfg_.sampler)) {
      return PointSet::from_scalars(gaussian_exact_sample(model, n, exact_rng));
    }
    const auto& lc = std::get<LangevinConfig>(cfg_.sampler);
    PointSet states(model.input_dim());
    if (buffer_) {
      states = buffer_->draw(n, buffer_rng);
    } else if (const auto* fu = std::get_if<FixedUniformInit>(&lc.init)) {
      states = uniform_box(model.input_dim(), n, fu->lo, fu->hi, buffer_rng);
    } else {
      states = pos;
    }
    run_chains(model, states, lc, chain_seed);
    if (buffer_ && persist) buffer_->push(states, buffer_rng);
    return states;
  }

  std::optional<PointSet> buffer_states() const {
    if (!buffer_) return std::nullopt;
    return buffer_->entries();
  }

 private:
  const TrainConfig& cfg_;
  std::optional<ReplayBuffer> buffer_;
};

void apply_update(std::vector<double>& theta, const std::vector<double>& grad, double eta, const TrainConfig& cfg,
                  std::vector<double>& m, std::vector<double>& v, std::size_t t) {
  if (cfg.optimizer == OptimizerKind::Sgd) {
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= eta * grad[j];
    return;
  }
  const auto& a = cfg.adam;
  const double c1 = 1.0 - std::pow(a.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(a.beta2, static_cast<double>(t));
  for (std::size_t j = 0; j < theta.size(); ++j) {
    m[j] = a.beta1 * m[j] + (1.0 - a.beta1) * grad[j];
    v[j] = a.beta2 * v[j] + (1.0 - a.beta2) * grad[j] * grad[j];
    theta[j] -= eta * (m[j] / c1) / (std::sqrt(v[j] / c2) + a.eps);
  }
}

TrainResult run_updates(const EnergyModel& model, const PointSet& data, const TrainConfig& cfg,
                        const TrainHooks& hooks, std::size_t updates) {
  cfg.validate();
  if (data.size() == 0) throw Error("trainer", ErrorCode::EmptyBatch, "training data is empty");
  if (data.dim() != model.input_dim()) {
    throw Error("trainer", ErrorCode::InvalidShape, "data dimension does not match the model input dimension");
  }
  if (std::holds_alternative<ExactGaussianSampler>(cfg.sampler) && model.kind() != EnergyKind::GaussianQuadratic) {
    throw Error("trainer", ErrorCode::InvalidModelKind, "the exact sampler needs a GaussianQuadratic model");
  }

  TrainResult result{model, {}, std::nullopt, std::nullopt};
  EnergyModel& current = result.model;
  Rng data_rng(derive_seed(cfg.seed, "train.data"));
  Rng exact_rng(derive_seed(cfg.seed, "train.sampler"));
  Rng buffer_rng(derive_seed(cfg.seed, "train.buffer"));
  const std::uint64_t chain_root = derive_seed(cfg.seed, "train.chains");
  const std::uint64_t probe_root = derive_seed(cfg.seed, "train.probe");
  NegativeSource negatives(cfg, model.input_dim());

  const bool use_reference = hooks.reference.has_value() && model.kind() == EnergyKind::GaussianQuadratic;

  auto record = [&](std::size_t iter) {
    TraceRecord rec;
    rec.iter = iter;
    rec.params.assign(current.params().begin(), current.params().end());
    if (use_reference) {
      rec.grad_norm = l2_norm(exact_objective_gradient(current, *hooks.reference, cfg.gamma));
      rec.loss = exact_objective_value(current, *hooks.reference, cfg.gamma);
    } else {
      Rng probe_rng(derive_seed(probe_root, static_cast<std::uint64_t>(iter)));
      const auto pos = draw_positives(data, cfg.probe_batch, probe_rng);
      Rng probe_exact = probe_rng.fork(1);
      Rng probe_buffer = probe_rng.fork(2);
      const auto neg = negatives.draw(current, pos, cfg.probe_batch, probe_exact, probe_buffer,
                                      derive_seed(probe_root, probe_rng()), false);
      const auto est = estimate(current, pos, neg, cfg);
      rec.grad_norm = l2_norm(est.grad);
      rec.loss = est.loss_value;
    }
    if (hooks.metric) rec.metric = hooks.metric(current);
    result.trace.records.push_back(std::move(rec));
  };

  std::vector<double> theta(model.params().begin(), model.params().end());
  std::vector<double> m(theta.size(), 0.0);
  std::vector<double> v(theta.size(), 0.0);
  try {
    record(0);
    for (std::size_t t = 1; t <= updates; ++t) {
      const auto pos = draw_positives(data, cfg.batch_size, data_rng);
      const auto neg = negatives.draw(current, pos, cfg.batch_size, exact_rng, buffer_rng,
                                      derive_seed(chain_root, static_cast<std::uint64_t>(t)), true);
      const auto est = estimate(current, pos, neg, cfg);
      apply_update(theta, est.grad, cfg.schedule.step(t, cfg.iterations), cfg, m, v, t);
      current.set_params(theta);
      if (t % cfg.eval_every == 0 || t == updates) record(t);
    }
  } catch (const Error& e) {
    result.failure = e;
  }
  result.buffer_states = negatives.buffer_states();
  return result;
}

}  // namespace

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Constant: return "Constant";
    case ScheduleKind::CorollaryConstant: return "CorollaryConstant";
    case ScheduleKind::OneOverT: return "OneOverT";
    case ScheduleKind::IncreasingSqrt: return "IncreasingSqrt";
    case ScheduleKind::DecreasingQuarter: return "DecreasingQuarter";
  }
  return "Unknown";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  const auto key = lower(name);
  for (auto k : {ScheduleKind::Constant, ScheduleKind::CorollaryConstant, ScheduleKind::OneOverT,
                 ScheduleKind::IncreasingSqrt, ScheduleKind::DecreasingQuarter}) {
    if (lower(to_string(k)) == key) return k;
  }
  throw bad_schedule("unknown schedule kind '" + name + "'");
}

void ScheduleSpec::validate() const {
  if (!std::isfinite(base) || base < 0.0 || (base == 0.0 && kind != ScheduleKind::Constant)) {
    throw bad_schedule("schedule base must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw bad_schedule("schedule alpha must lie in (0, 1)");
  if (!(M > 0.0) || !std::isfinite(M)) throw bad_schedule("schedule M must be positive");
}

double ScheduleSpec::step(std::size_t t, std::size_t T) const {
  const double tt = static_cast<double>(t);
  const double TT = static_cast<double>(T);
  const double cap = (1.0 - alpha) / M;
  switch (kind) {
    case ScheduleKind::Constant: return base;
    case ScheduleKind::CorollaryConstant: return std::min(cap, base / std::sqrt(TT));
    case ScheduleKind::OneOverT: return base / tt;
    case ScheduleKind::IncreasingSqrt: return std::min(cap, base * std::sqrt(tt) / TT);
    case ScheduleKind::DecreasingQuarter: return std::min(cap, base / std::pow(tt * TT, 0.25));
  }
  return base;
}

std::vector<double> step_sizes(const ScheduleSpec& schedule, std::size_t T) {
  schedule.validate();
  std::vector<double> out(T);
  for (std::size_t t = 1; t <= T; ++t) out[t - 1] = schedule.step(t, T);
  return out;
}

std::vector<double> index_distribution(const ScheduleSpec& schedule, std::size_t T, double alpha, double M) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw bad_param("alpha must lie in (0, 1)");
  if (!(M > 0.0) || !std::isfinite(M)) throw bad_param("M must be positive");
  if (T == 0) throw bad_param("T must be >= 1");
  const auto etas = step_sizes(schedule, T);
  const double bound = 2.0 * (1.0 - alpha) / M;
  std::vector<double> w(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double eta = etas[t];
    if (!(eta > 0.0) || !(eta < bound)) {
      std::ostringstream msg;
      msg << "step size at t = " << t + 1 << " is " << format_double(eta) << ", outside (0, 2(1 - alpha)/M = "
          << format_double(bound) << ")";
      throw bad_schedule(msg.str());
    }
    w[t] = 2.0 * (1.0 - alpha) * eta - M * eta * eta;
  }
  const double total = pairwise_sum(w);
  for (double& x : w) x /= total;
  return w;
}

void TrainConfig::validate() const {
  if (!std::isfinite(gamma) || !(gamma > -1.0)) {
    throw Error("trainer", ErrorCode::InvalidGamma, "gamma must be finite and > -1");
  }
  if (batch_size == 0) throw bad_param("batch_size must be >= 1");
  if (iterations == 0) throw bad_param("iterations must be >= 1");
  if (eval_every == 0) throw bad_param("eval_every must be >= 1");
  if (probe_batch == 0) throw bad_param("probe_batch must be >= 1");
  if (!(l2_coeff >= 0.0) || !std::isfinite(l2_coeff)) throw bad_param("l2_coeff must be finite and >= 0");
  schedule.validate();
  if (const auto* lc = std::get_if<LangevinConfig>(&sampler)) lc->validate();
  if (optimizer == OptimizerKind::Adam) {
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0)) {
      throw bad_param("Adam needs beta1, beta2 in [0, 1) and eps > 0");
    }
  }
}

void TrainResult::rethrow_if_failed() const {
  if (failure) throw *failure;
}

TrainResult train(const EnergyModel& model, const PointSet& data, const TrainConfig& cfg, const TrainHooks& hooks) {
  return run_updates(model, data, cfg, hooks, cfg.iterations);
}

RandomizedSgdResult randomized_sgd(const EnergyModel& model, const PointSet& data, const TrainConfig& cfg,
                                   double alpha, double M, const TrainHooks& hooks) {
  cfg.validate();
  auto p_z = index_distribution(cfg.schedule, cfg.iterations, alpha, M);
  Rng rng(derive_seed(cfg.seed, "train.index"));
  double u = rng.uniform();
  std::size_t z = cfg.iterations;
  for (std::size_t t = 0; t < p_z.size(); ++t) {
    if (u < p_z[t]) {
      z = t + 1;
      break;
    }
    u -= p_z[t];
  }
  auto run = run_updates(model, data, cfg, hooks, z - 1);
  return RandomizedSgdResult{std::move(run), z, std::move(p_z)};
}

std::vector<double> exact_objective_gradient(const EnergyModel& model, const DensitySpec& p, double gamma) {
  if (gamma == 0.0) return closed_form_cd_gradient(model, p);
  return exact_pscd_gradient_quadrature(model, p, gamma, covering_domain(model, p));
}

double exact_objective_value(const EnergyModel& model, const DensitySpec& p, double gamma) {
  const auto domain = covering_domain(model, p);
  if (gamma == 0.0) return -log_score(p, model, domain);
  return -gamma_score(p, model, gamma, domain).score;
}

std::string trace_csv(const TrainTrace& trace) {
  std::string out = "iter,grad_norm,loss,metric\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.iter);
    out += ',';
    out += format_double(r.grad_norm);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    if (r.metric) out += format_double(*r.metric);
    out += '\n';
  }
  return out;
}

}  // namespace pscd
