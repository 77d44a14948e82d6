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

#include <vector>

#include "pscd/energy.hpp"
#include "pscd/points.hpp"

namespace pscd {

struct EstimatorConfig {
  double gamma = 1.0;
  /// Coefficient of the penalty mean(E+^2) + mean(E-^2) on energy outputs.
  double l2_coeff = 1.0;
};

struct GradientEstimate {
  std::vector<double> grad;
  double loss_value = 0.0;
  /// Self-normalized importance weights of the negatives.
  std::vector<double> weights_neg;
  /// Weights of the positives (softmax of -gamma E+; uniform for CD).
  std::vector<double> weights_pos;
  double ess = 0.0;
};

/// PS-CD gradient on one minibatch:
///   grad = sum_i w+_i dE(x+_i) - sum_i w-_i dE(x-_i)
///          + l2 * d[mean(E+^2) + mean(E-^2)]
/// with w+ = softmax(-gamma E+) and w- = softmax(-gamma E-). The positive
/// weights are the exact derivative of -(1/gamma) logmeanexp(-gamma E+); the
/// negative weights are treated as constants.
///
/// InvalidGamma for gamma == 0 or gamma <= -1, EmptyBatch, InvalidInput when
/// |pos| != |neg|, NumericalError on non-finite energies. Logs a warning when
/// ess < 0.1 N.
GradientEstimate pscd_gradient(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                               const EstimatorConfig& cfg);

/// mean dE(x+) - mean dE(x-) + L2 term; loss = mean E+ - mean E- + penalty.
GradientEstimate cd_gradient(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                             double l2_coeff);

/// The PS-CD loss with the negative weights held at `frozen_weights_neg`.
double pscd_frozen_loss(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                        const EstimatorConfig& cfg, std::span<const double> frozen_weights_neg);

/// Central differences of the frozen-weight loss against pscd_gradient.
/// Returns the largest |fd - g| / max(|g|, |fd|, floor) over coordinates,
/// where floor = 1e-3 * max_j |g_j| guards near-zero coordinates.
/// InvalidParameter on step <= 0.
double frozen_weight_fd_check(const EnergyModel& model, const PointSet& pos, const PointSet& neg,
                              const EstimatorConfig& cfg, double step);

}  // namespace pscd
