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

#include "pscd/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "pscd/csv.hpp"
#include "pscd/estimator.hpp"
#include "pscd/numerics.hpp"
#include "pscd/rng.hpp"

namespace pscd {

namespace {

double rel_error(const std::vector<double>& est, const std::vector<double>& exact) {
  std::vector<double> diff(est.size());
  for (std::size_t j = 0; j < est.size(); ++j) diff[j] = est[j] - exact[j];
  return l2_norm(diff) / l2_norm(exact);
}

double abs_error(const std::vector<double>& est, const std::vector<double>& exact) {
  std::vector<double> diff(est.size());
  for (std::size_t j = 0; j < est.size(); ++j) diff[j] = est[j] - exact[j];
  return l2_norm(diff);
}

std::vector<double> discrete_estimate(const EnergyModel& model, const DiscreteSpace& space, std::size_t n,
                                      double gamma, Rng& rng) {
  const auto pos = space.sample(n, rng);
  const auto neg = space.sample_model(model, n, rng);
  return pscd_gradient(model, pos, neg, EstimatorConfig{gamma, 0.0}).grad;
}

}  // namespace

std::vector<EstimatorCheckRow> estimator_check(const EstimatorCheckConfig& cfg) {
  if (cfg.trials == 0 || cfg.sample_sizes.empty()) {
    throw Error("estimator", ErrorCode::InvalidParameter, "estimator check needs trials and sample sizes");
  }
  const auto space = reference_discrete_space();
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const auto exact = exact_pscd_gradient_discrete(model, space, cfg.gamma);
  std::vector<EstimatorCheckRow> rows;
  for (const std::size_t n : cfg.sample_sizes) {
    std::vector<double> errs(cfg.trials);
    for (std::size_t k = 0; k < cfg.trials; ++k) {
      Rng rng(derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(k)));
      errs[k] = rel_error(discrete_estimate(model, space, n, cfg.gamma, rng), exact);
    }
    rows.push_back({n, pairwise_sum(errs) / static_cast<double>(errs.size()),
                    *std::max_element(errs.begin(), errs.end())});
  }
  return rows;
}

std::string estimator_check_csv(const std::vector<EstimatorCheckRow>& rows) {
  CsvWriter w({"n", "mean_rel_error", "max_rel_error"});
  for (const auto& r : rows) w.row(r.n, r.mean_rel_error, r.max_rel_error);
  return w.str();
}

SampleComplexityResult sample_complexity_check(const SampleComplexityConfig& cfg) {
  const auto space = reference_discrete_space();
  const auto model = EnergyModel::gaussian_quadratic(0.0, 1.0);
  const auto exact = exact_pscd_gradient_discrete(model, space, cfg.gamma);
  SampleComplexityResult out;
  out.bounds = measure_bounds(model, space);
  out.n = static_cast<std::size_t>(sample_complexity_bound(out.bounds, cfg.gamma, cfg.eps, cfg.delta));
  out.trials = cfg.trials;
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    Rng rng(derive_seed(derive_seed(cfg.seed, "sample-complexity"), static_cast<std::uint64_t>(k)));
    const double err = abs_error(discrete_estimate(model, space, out.n, cfg.gamma, rng), exact);
    out.max_error = std::max(out.max_error, err);
    if (err > cfg.eps) ++out.failures;
  }
  return out;
}

LandscapeResult landscape(const LandscapeConfig& cfg) {
  if (cfg.gammas.empty()) throw Error("oracle", ErrorCode::InvalidParameter, "landscape needs at least one gamma");
  const auto p = DensitySpec::gaussian(cfg.p_mean, cfg.p_std);
  const auto mu = linspace(cfg.mu_lo, cfg.mu_hi, cfg.mu_points);
  const auto sigma = linspace(cfg.sigma_lo, cfg.sigma_hi, cfg.sigma_points);
  // The tempered normalizer exp(-(gamma + 1) E) is widest for the smallest
  // gamma: its std is sigma / sqrt(gamma + 1).
  const double min_gamma = *std::min_element(cfg.gammas.begin(), cfg.gammas.end());
  const double widen = min_gamma < 0.0 && min_gamma > -1.0 ? 1.0 / std::sqrt(1.0 + min_gamma) : 1.0;
  const double reach = 12.0 * std::max(cfg.p_std, cfg.sigma_hi * widen);
  const QuadratureDomain domain{std::min(cfg.mu_lo, cfg.p_mean) - reach, std::max(cfg.mu_hi, cfg.p_mean) + reach,
                                cfg.quadrature_points};
  LandscapeResult out;
  for (const double g : cfg.gammas) {
    auto grid = landscape_grid(p, mu, sigma, g, domain);
    const auto [i, j] = grid.argmin();
    out.argmins.emplace_back(mu[i], sigma[j]);
    out.grids.push_back(std::move(grid));
  }
  return out;
}

std::string landscape_summary_csv(const LandscapeConfig& cfg, const LandscapeResult& result) {
  CsvWriter w({"gamma", "argmin_mu", "argmin_sigma"});
  for (std::size_t k = 0; k < cfg.gammas.size(); ++k) {
    w.row(cfg.gammas[k], result.argmins[k].first, result.argmins[k].second);
  }
  return w.str();
}

std::vector<ContaminationRow> contamination(const ContaminationConfig& cfg) {
  std::vector<ContaminationRow> rows;
  const auto& m = cfg.model;
  for (const double ratio : cfg.ratios) {
    const auto data = PointSet::from_scalars(
        contaminated_gaussian(cfg.n, ratio, derive_seed(cfg.seed, "contamination.data"), m));
    TrainHooks hooks;
    hooks.reference = contaminated_density(ratio, m);
    for (const double gamma : cfg.gammas) {
      TrainConfig tc;
      tc.gamma = gamma;
      tc.batch_size = cfg.batch_size;
      tc.iterations = cfg.iterations;
      tc.schedule = ScheduleSpec{ScheduleKind::Constant, cfg.step_size};
      tc.l2_coeff = 0.0;
      tc.sampler = ExactGaussianSampler{};
      tc.seed = derive_seed(cfg.seed, "contamination.train");
      tc.eval_every = cfg.iterations;
      const auto result =
          train(EnergyModel::gaussian_quadratic(m.target_mean, m.target_std), data, tc, hooks);
      result.rethrow_if_failed();
      const double mu = result.model.mu();
      const double sigma = result.model.sigma();
      rows.push_back({ratio, gamma, mu, sigma, gaussian_kl(m.target_mean, m.target_std, mu, sigma)});
    }
  }
  return rows;
}

std::string contamination_csv(const std::vector<ContaminationRow>& rows) {
  CsvWriter w({"ratio", "gamma", "mu", "sigma", "kl"});
  for (const auto& r : rows) w.row(r.ratio, r.gamma, r.mu, r.sigma, r.kl);
  return w.str();
}

std::string method_name(double gamma) { return gamma == 0.0 ? "CD" : "PS-CD"; }

MmdBenchRun mmd_bench_run(const MmdBenchConfig& cfg, DatasetName dataset, double gamma, std::uint64_t seed) {
  const std::uint64_t root = derive_seed(seed, to_string(dataset));
  const auto data = sample_dataset({dataset, {}, cfg.train_size, derive_seed(seed, "bench.data")});
  const auto heldout = sample_dataset({dataset, {}, cfg.eval_size, derive_seed(seed, "bench.heldout")});
  const auto model = init_mlp(cfg.widths, derive_seed(root, "bench.init"));

  TrainConfig tc;
  tc.gamma = gamma;
  tc.batch_size = cfg.batch_size;
  tc.iterations = cfg.iterations;
  tc.schedule = ScheduleSpec{ScheduleKind::Constant, cfg.learning_rate};
  tc.l2_coeff = cfg.l2_coeff;
  tc.sampler = cfg.langevin;
  tc.seed = derive_seed(root, "bench.train");
  tc.eval_every = cfg.iterations;
  tc.optimizer = OptimizerKind::Adam;
  tc.probe_batch = cfg.batch_size;

  MmdBenchRun run{dataset, gamma, seed, 0.0, train(model, data, tc), PointSet(2)};
  run.result.rethrow_if_failed();

  // Eval samples: persistent chain states, refined further under the final
  // model without reinitialization.
  Rng rng(derive_seed(root, "bench.eval"));
  const auto& buffer = *run.result.buffer_states;
  PointSet samples(2);
  samples.reserve(cfg.eval_size);
  for (std::size_t i = 0; i < cfg.eval_size; ++i) samples.push_back(buffer[rng.below(buffer.size())]);
  if (cfg.eval_chain_steps > 0) {
    auto chain_cfg = cfg.langevin;
    chain_cfg.steps = cfg.eval_chain_steps;
    run_chains(run.result.model, samples, chain_cfg, derive_seed(root, "bench.eval.chains"));
  }
  run.mmd_x1e4 = mmd(samples, heldout);
  run.samples = std::move(samples);
  return run;
}

std::vector<MetricRow> mmd_bench(const MmdBenchConfig& cfg) {
  std::vector<MetricRow> rows;
  for (const auto dataset : cfg.datasets) {
    for (const double gamma : cfg.gammas) {
      for (const auto seed : cfg.seeds) {
        const auto run = mmd_bench_run(cfg, dataset, gamma, seed);
        rows.push_back({to_string(dataset), method_name(gamma), gamma, seed, run.mmd_x1e4});
      }
    }
  }
  return rows;
}

std::vector<SgdConvergenceRow> sgd_convergence(const SgdConvergenceConfig& cfg) {
  if (cfg.seeds == 0) throw Error("trainer", ErrorCode::InvalidParameter, "sgd-convergence needs seeds >= 1");
  const auto target = default_mog1d();
  Rng data_rng(derive_seed(cfg.seed, "sgd.data"));
  const auto data = PointSet::from_scalars(target.sample(cfg.n, data_rng));
  const auto init = EnergyModel::gaussian_quadratic(cfg.init_mu, cfg.init_sigma);
  std::vector<SgdConvergenceRow> rows;
  for (const std::size_t T : cfg.horizons) {
    std::vector<double> sq(cfg.seeds);
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      TrainConfig tc;
      tc.gamma = cfg.gamma;
      tc.batch_size = cfg.batch_size;
      tc.iterations = T;
      tc.schedule = ScheduleSpec{ScheduleKind::CorollaryConstant, cfg.base, cfg.alpha, cfg.M};
      tc.sampler = ExactGaussianSampler{};
      tc.seed = derive_seed(derive_seed(cfg.seed, "sgd.run"), static_cast<std::uint64_t>(s));
      tc.eval_every = T;
      tc.probe_batch = cfg.batch_size;
      const auto out = randomized_sgd(init, data, tc, cfg.alpha, cfg.M);
      out.run.rethrow_if_failed();
      const double g = l2_norm(exact_objective_gradient(out.run.model, target, cfg.gamma));
      sq[s] = g * g;
    }
    const auto ms = mean_std(sq);
    rows.push_back({T, ms.mean, ms.stddev / std::sqrt(static_cast<double>(sq.size()))});
  }
  return rows;
}

std::string sgd_convergence_csv(const std::vector<SgdConvergenceRow>& rows) {
  CsvWriter w({"horizon", "mean_sq_grad_norm", "stderr_sq_grad_norm"});
  for (const auto& r : rows) w.row(r.horizon, r.mean_sq_grad_norm, r.stderr_sq_grad_norm);
  return w.str();
}

}  // namespace pscd
