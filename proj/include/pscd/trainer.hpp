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
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pscd/energy.hpp"
#include "pscd/error.hpp"
#include "pscd/points.hpp"
#include "pscd/sampler.hpp"
#include "pscd/scoring.hpp"

namespace pscd {

enum class ScheduleKind { Constant, CorollaryConstant, OneOverT, IncreasingSqrt, DecreasingQuarter };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

/// Step size eta_t for t = 1..T:
///   Constant           base
///   CorollaryConstant  min{(1 - alpha) / M, base / sqrt(T)}
///   OneOverT           base / t
///   IncreasingSqrt     min{(1 - alpha) / M, base * sqrt(t) / T}
///   DecreasingQuarter  min{(1 - alpha) / M, base / (t T)^(1/4)}
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::Constant;
  double base = 0.01;
  double alpha = 0.5;
  double M = 10.0;

  /// InvalidSchedule unless base > 0 (Constant also accepts 0, the no-op
  /// schedule), alpha in (0, 1) and M > 0.
  void validate() const;
  double step(std::size_t t, std::size_t T) const;
};

/// eta_1..eta_T.
std::vector<double> step_sizes(const ScheduleSpec& schedule, std::size_t T);

/// p_Z(t) proportional to 2 (1 - alpha) eta_t - M eta_t^2 over t = 1..T.
/// InvalidSchedule naming the first t with eta_t >= 2 (1 - alpha) / M or
/// eta_t <= 0; InvalidParameter unless alpha in (0, 1) and M > 0.
std::vector<double> index_distribution(const ScheduleSpec& schedule, std::size_t T, double alpha, double M);

/// Negatives drawn exactly from N(mu, sigma) of a GaussianQuadratic model.
struct ExactGaussianSampler {};

using SamplerConfig = std::variant<LangevinConfig, ExactGaussianSampler>;

enum class OptimizerKind { Sgd, Adam };

/// Adaptive moments; only used by the 2-D benchmark. Outside the SGD theory.
struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  /// 0 selects contrastive divergence.
  double gamma = 1.0;
  std::size_t batch_size = 128;
  std::size_t iterations = 1000;
  ScheduleSpec schedule;
  double l2_coeff = 0.0;
  SamplerConfig sampler = ExactGaussianSampler{};
  std::uint64_t seed = 0;
  std::size_t eval_every = 100;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  AdamConfig adam;
  /// Positives and negatives used for the trace's gradient norm and loss when
  /// no reference density applies.
  std::size_t probe_batch = 4096;

  /// InvalidParameter / InvalidSchedule on bad fields.
  void validate() const;
};

/// Optional evaluation hooks (not part of the serializable config).
struct TrainHooks {
  /// For GaussianQuadratic models: trace grad_norm and loss come from the
  /// quadrature oracle against this density.
  std::optional<DensitySpec> reference;
  /// Extra scalar recorded in the trace's `metric` column.
  std::function<double(const EnergyModel&)> metric;
};

struct TraceRecord {
  /// Number of parameter updates applied so far.
  std::size_t iter = 0;
  std::vector<double> params;
  double grad_norm = 0.0;
  double loss = 0.0;
  std::optional<double> metric;
};

struct TrainTrace {
  std::vector<TraceRecord> records;
};

struct TrainResult {
  EnergyModel model;
  TrainTrace trace;
  /// Set when a DivergedChain / NumericalError stopped the run; `model` then
  /// holds the last finite parameters.
  std::optional<Error> failure;
  /// Replay buffer contents at the end of the run (replay-buffer samplers only).
  std::optional<PointSet> buffer_states;

  bool ok() const noexcept { return !failure.has_value(); }
  void rethrow_if_failed() const;
};

/// Algorithm 1. Per iteration t = 1..T: draw batch_size positives uniformly
/// (with replacement) from `data`, draw batch_size negatives from the sampler,
/// take the PS-CD (or CD) gradient and update theta <- theta - eta_t * grad.
///
/// Random streams, all derived from cfg.seed:
///   positives       Rng(derive_seed(seed, "train.data"))
///   exact sampler   Rng(derive_seed(seed, "train.sampler"))
///   buffer / starts Rng(derive_seed(seed, "train.buffer"))
///   chain noise     run_chains(..., derive_seed(derive_seed(seed, "train.chains"), t))
///   trace probes    Rng(derive_seed(derive_seed(seed, "train.probe"), iter))
/// Probes never touch the training streams, so eval_every does not change
/// the trajectory.
///
/// Trace records are taken at iter 0, every eval_every updates and at T.
TrainResult train(const EnergyModel& model, const PointSet& data, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

struct RandomizedSgdResult {
  TrainResult run;
  /// Returned iterate index in 1..T; theta_Z is the model after Z - 1 updates.
  std::size_t z = 1;
  std::vector<double> p_z;
};

/// Algorithm 2. Z ~ p_Z is drawn from Rng(derive_seed(seed, "train.index")),
/// then the Algorithm 1 trajectory of `cfg` is followed for Z - 1 updates.
RandomizedSgdResult randomized_sgd(const EnergyModel& model, const PointSet& data, const TrainConfig& cfg,
                                   double alpha, double M, const TrainHooks& hooks = {});

/// Exact gradient of the training objective for a GaussianQuadratic model
/// against `p` (PS-CD loss for gamma != 0, negative log-likelihood for
/// gamma == 0), by quadrature on a domain covering both p and the model.
std::vector<double> exact_objective_gradient(const EnergyModel& model, const DensitySpec& p, double gamma);
double exact_objective_value(const EnergyModel& model, const DensitySpec& p, double gamma);

/// CSV `iter,grad_norm,loss,metric`; empty metric cells when absent.
std::string trace_csv(const TrainTrace& trace);

}  // namespace pscd
