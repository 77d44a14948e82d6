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
#include <string>
#include <vector>

#include "pscd/datasets.hpp"
#include "pscd/energy.hpp"
#include "pscd/eval.hpp"
#include "pscd/oracle.hpp"
#include "pscd/trainer.hpp"

namespace pscd {

// ---------------------------------------------------------------------------
// estimator-check: PS-CD estimate vs the exact gradient on the 8-state space.

struct EstimatorCheckConfig {
  double gamma = 1.0;
  std::vector<std::size_t> sample_sizes{1000, 10000, 100000, 1000000};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
};

struct EstimatorCheckRow {
  std::size_t n = 0;
  /// Mean over trials of |estimate - exact| / |exact|.
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
};

/// Model GaussianQuadratic(0, 1); positives ~ p, negatives ~ q_theta on the
/// space, l2 penalty off. Trial k of size n uses
/// Rng(derive_seed(derive_seed(seed, n), k)).
std::vector<EstimatorCheckRow> estimator_check(const EstimatorCheckConfig& cfg);
std::string estimator_check_csv(const std::vector<EstimatorCheckRow>& rows);

struct SampleComplexityConfig {
  double gamma = 0.1;
  double eps = 0.5;
  double delta = 0.1;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
};

struct SampleComplexityResult {
  EnergyBounds bounds;
  std::size_t n = 0;
  std::size_t failures = 0;
  std::size_t trials = 0;
  double max_error = 0.0;
};

/// Draws `trials` estimates at N equal to the sample-complexity bound and
/// counts those with |estimate - exact| > eps.
SampleComplexityResult sample_complexity_check(const SampleComplexityConfig& cfg);

// ---------------------------------------------------------------------------
// landscape: well-specified loss surfaces over (mu, sigma).

struct LandscapeConfig {
  std::vector<double> gammas{-0.5, 0.0, 0.1, 0.5, 1.0, 2.0};
  double p_mean = 0.5;
  double p_std = 1.0;
  double mu_lo = -4.0;
  double mu_hi = 4.0;
  std::size_t mu_points = 81;
  double sigma_lo = 0.1;
  double sigma_hi = 3.0;
  std::size_t sigma_points = 59;
  std::size_t quadrature_points = 4096;
};

struct LandscapeResult {
  std::vector<LandscapeGrid> grids;
  /// (mu, sigma) at each grid's argmin.
  std::vector<std::pair<double, double>> argmins;
};

/// Quadrature domain: p's mean +- 11 and the sigma grid's top value of
/// room, wide enough for every grid model.
LandscapeResult landscape(const LandscapeConfig& cfg);
std::string landscape_summary_csv(const LandscapeConfig& cfg, const LandscapeResult& result);

// ---------------------------------------------------------------------------
// contamination: KL(target || model) after training on contaminated data.

struct ContaminationConfig {
  std::vector<double> ratios{0.01, 0.05, 0.1, 0.2, 0.3};
  /// 0 is CD.
  std::vector<double> gammas{0.0, 0.5, 1.0, 2.0};
  std::size_t n = 10000;
  std::size_t batch_size = 500;
  std::size_t iterations = 1500;
  double step_size = 0.01;
  std::uint64_t seed = 0;
  ContaminationModel model;
};

struct ContaminationRow {
  double ratio = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double kl = 0.0;
};

/// Warm start at the clean target, exact negatives, constant step size.
/// Dataset seed derive_seed(seed, "contamination.data") is shared by all
/// methods at a ratio; the training seed is derive_seed(seed, "contamination.train").
std::vector<ContaminationRow> contamination(const ContaminationConfig& cfg);
/// CSV `ratio,gamma,mu,sigma,kl`.
std::string contamination_csv(const std::vector<ContaminationRow>& rows);

// ---------------------------------------------------------------------------
// mmd-bench: 2-D datasets, Mlp energies, Langevin with a replay buffer.

struct MmdBenchConfig {
  std::vector<DatasetName> datasets = benchmark_datasets();
  /// 0 is CD.
  std::vector<double> gammas{0.0, 1.0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::vector<std::size_t> widths{2, 32, 32, 1};
  std::size_t train_size = 10000;
  std::size_t eval_size = 1000;
  std::size_t batch_size = 128;
  std::size_t iterations = 3000;
  double learning_rate = 1e-3;
  double l2_coeff = 0.1;
  LangevinConfig langevin{20, 0.1, 0.005, ReplayBufferInit{10000, 0.05, -4.5, 4.5}};
  /// Extra Langevin steps applied to buffer states to produce eval samples.
  std::size_t eval_chain_steps = 100;
};

struct MmdBenchRun {
  DatasetName dataset = DatasetName::MoG2D;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double mmd_x1e4 = 0.0;
  TrainResult result;
  PointSet samples{2};
};

/// One training run plus its evaluation. Data seed derive_seed(seed, "bench.data");
/// held-out seed derive_seed(seed, "bench.heldout"); training and init seeds
/// derive from (seed, dataset) so CD and PS-CD share them.
MmdBenchRun mmd_bench_run(const MmdBenchConfig& cfg, DatasetName dataset, double gamma, std::uint64_t seed);

std::vector<MetricRow> mmd_bench(const MmdBenchConfig& cfg);

std::string method_name(double gamma);

// ---------------------------------------------------------------------------
// sgd-convergence: Algorithm 2 on a smooth non-convex 1-D objective.

struct SgdConvergenceConfig {
  std::vector<std::size_t> horizons{64, 256, 1024};
  std::size_t seeds = 50;
  double alpha = 0.5;
  double M = 10.0;
  double base = 1.0;
  double gamma = 1.0;
  std::size_t batch_size = 64;
  std::size_t n = 10000;
  double init_mu = 3.0;
  double init_sigma = 0.5;
  std::uint64_t seed = 0;
};

struct SgdConvergenceRow {
  std::size_t horizon = 0;
  /// Mean over seeds of |grad L(theta_Z)|^2 (exact gradient by quadrature).
  double mean_sq_grad_norm = 0.0;
  double stderr_sq_grad_norm = 0.0;
};

/// Target: the default MoG1D density; model GaussianQuadratic; objective the
/// population PS-CD loss at `gamma`; schedule CorollaryConstant(alpha, M, base).
std::vector<SgdConvergenceRow> sgd_convergence(const SgdConvergenceConfig& cfg);
/// CSV `horizon,mean_sq_grad_norm,stderr_sq_grad_norm`.
std::string sgd_convergence_csv(const std::vector<SgdConvergenceRow>& rows);

}  // namespace pscd
