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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pscd/points.hpp"

namespace pscd {

enum class EnergyKind { GaussianQuadratic, Mlp };

std::string to_string(EnergyKind kind);
EnergyKind energy_kind_from_string(const std::string& name);

inline constexpr double kLeakySlope = 0.2;

/// Parametrized energy E_theta(x).
///
/// GaussianQuadratic: params = [mu, log sigma], E(x) = (x - mu)^2 / (2 sigma^2),
/// so exp(-E) normalizes to N(mu, sigma) with Z = sigma * sqrt(2 pi).
///
/// Mlp: widths [d, h1, ..., 1]; for each layer, a row-major (out x in) weight
/// block followed by `out` biases. Hidden layers use leaky-ReLU (slope 0.2),
/// the output layer is linear.
class EnergyModel {
 public:
  static EnergyModel gaussian_quadratic(double mu, double sigma);
  static EnergyModel mlp(std::vector<std::size_t> widths, std::vector<double> params);

  EnergyKind kind() const noexcept { return kind_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t num_params() const noexcept { return params_.size(); }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }

  std::span<const double> params() const noexcept { return params_; }
  /// Throws NumericalError if any entry is non-finite.
  void set_params(std::vector<double> params);

  /// GaussianQuadratic accessors; InvalidModelKind otherwise.
  double mu() const;
  double sigma() const;

  friend bool operator==(const EnergyModel&, const EnergyModel&) = default;

 private:
  EnergyModel() = default;

  EnergyKind kind_ = EnergyKind::GaussianQuadratic;
  std::size_t input_dim_ = 1;
  std::vector<std::size_t> widths_;
  std::vector<double> params_;
};

struct EnergyEval {
  double value = 0.0;
  std::vector<double> grad_x;
  std::vector<double> grad_params;
};

/// Number of parameters of an Mlp with the given widths.
std::size_t mlp_param_count(std::span<const std::size_t> widths);

/// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero. Deterministic in
/// `seed`. InvalidShape unless widths has >= 2 entries, all positive, ending in 1.
EnergyModel init_mlp(std::vector<std::size_t> widths, std::uint64_t seed);

/// Value, input gradient and parameter gradient from one forward and one
/// reverse pass. NumericalError (naming the layer) on non-finite intermediates.
EnergyEval energy_eval(const EnergyModel& model, std::span<const double> x);

double energy_value(const EnergyModel& model, std::span<const double> x);

/// Writes grad_x E into `grad_x` and returns E. Skips the parameter gradient.
double energy_grad_x(const EnergyModel& model, std::span<const double> x, std::span<double> grad_x);

/// Writes grad_theta E into `grad_params` and returns E.
double energy_grad_params(const EnergyModel& model, std::span<const double> x,
                          std::span<double> grad_params);

/// Smallest |pre-activation| over hidden units at x (+inf for GaussianQuadratic).
/// Finite-difference checks skip points closer than ~1e-3 to a kink.
double min_abs_preactivation(const EnergyModel& model, std::span<const double> x);

/// Energies of every row of `points`. Serial reference and OpenMP kernel; the
/// two produce identical bits.
namespace serial {
std::vector<double> batch_energy(const EnergyModel& model, const PointSet& points);
}
std::vector<double> batch_energy(const EnergyModel& model, const PointSet& points);

/// Energies and parameter gradients of every row; gradients are returned as
/// a row-major (n x num_params) matrix.
struct BatchGradients {
  std::vector<double> energies;
  std::vector<double> grads;
  std::size_t num_params = 0;

  std::span<const double> grad(std::size_t i) const noexcept {
    return {grads.data() + i * num_params, num_params};
  }
};

namespace serial {
BatchGradients batch_energy_grads(const EnergyModel& model, const PointSet& points);
}
BatchGradients batch_energy_grads(const EnergyModel& model, const PointSet& points);

}  // namespace pscd
