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

#include "pscd/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "pscd/rng.hpp"

namespace pscd {

namespace {

Error numerical(std::size_t layer, const std::string& what) {
  return Error("energy", ErrorCode::NumericalError,
               "non-finite " + what + " at layer " + std::to_string(layer));
}

double leaky(double z) noexcept { return z > 0.0 ? z : kLeakySlope * z; }
double leaky_slope(double z) noexcept { return z > 0.0 ? 1.0 : kLeakySlope; }

/// Forward activations of one Mlp evaluation. h[0] is the input; z[l] the
/// pre-activation of layer l; h[l + 1] = leaky(z[l]) for hidden layers.
struct MlpCache {
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> h;
  std::vector<double> delta;
  std::vector<double> delta_prev;
  std::vector<std::size_t> offsets;
};

MlpCache& scratch() {
  thread_local MlpCache cache;
  return cache;
}

double mlp_forward(const EnergyModel& model, std::span<const double> x, MlpCache& cache) {
  const auto& widths = model.widths();
  const auto params = model.params();
  const std::size_t layers = widths.size() - 1;
  cache.z.resize(layers);
  cache.h.resize(layers + 1);
  cache.h[0].assign(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = widths[l];
    const std::size_t out = widths[l + 1];
    const double* w = params.data() + offset;
    const double* b = w + in * out;
    offset += in * out + out;
    auto& z = cache.z[l];
    z.resize(out);
    const auto& h = cache.h[l];
    bool finite = true;
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w + o * in;
      double acc = b[o];
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * h[i];
      z[o] = acc;
      finite = finite && std::isfinite(acc);
    }
    if (!finite) throw numerical(l, "pre-activation");
    if (l + 1 < layers) {
      auto& next = cache.h[l + 1];
      next.resize(out);
      for (std::size_t o = 0; o < out; ++o) next[o] = leaky(z[o]);
    }
  }
  return cache.z[layers - 1][0];
}

/// Reverse pass from dE/dE = 1. Either output span may be empty to skip it.
void mlp_backward(const EnergyModel& model, MlpCache& cache, std::span<double> grad_x,
                  std::span<double> grad_params) {
  const auto& widths = model.widths();
  const auto params = model.params();
  const std::size_t layers = widths.size() - 1;

  auto& offsets = cache.offsets;
  offsets.resize(layers);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = offset;
    offset += widths[l] * widths[l + 1] + widths[l + 1];
  }

  cache.delta.assign(1, 1.0);
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = widths[l];
    const std::size_t out = widths[l + 1];
    const double* w = params.data() + offsets[l];
    const auto& h = cache.h[l];
    const auto& delta = cache.delta;

    if (!grad_params.empty()) {
      double* gw = grad_params.data() + offsets[l];
      double* gb = gw + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        double* grow = gw + o * in;
        for (std::size_t i = 0; i < in; ++i) grow[i] = delta[o] * h[i];
        gb[o] = delta[o];
      }
    }

    if (l == 0 && grad_x.empty()) break;
    auto& prev = cache.delta_prev;
    prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w + o * in;
      const double d = delta[o];
      for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * d;
    }
    if (l == 0) {
      bool finite = true;
      for (std::size_t i = 0; i < in; ++i) {
        grad_x[i] = prev[i];
        finite = finite && std::isfinite(prev[i]);
      }
      if (!finite) throw numerical(0, "input gradient");
      break;
    }
    const auto& zprev = cache.z[l - 1];
    bool finite = true;
    for (std::size_t i = 0; i < in; ++i) {
      prev[i] *= leaky_slope(zprev[i]);
      finite = finite && std::isfinite(prev[i]);
    }
    if (!finite) throw numerical(l - 1, "back-propagated gradient");
    std::swap(cache.delta, cache.delta_prev);
  }
}

void require_input(const EnergyModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw Error("energy", ErrorCode::InvalidShape,
                "input has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(model.input_dim()));
  }
}

}  // namespace

std::string to_string(EnergyKind kind) {
  return kind == EnergyKind::GaussianQuadratic ? "GaussianQuadratic" : "Mlp";
}

EnergyKind energy_kind_from_string(const std::string& name) {
  if (name == "GaussianQuadratic") return EnergyKind::GaussianQuadratic;
  if (name == "Mlp") return EnergyKind::Mlp;
  throw Error("energy", ErrorCode::InvalidModelKind, "unknown energy kind '" + name + "'");
}

EnergyModel EnergyModel::gaussian_quadratic(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw Error("energy", ErrorCode::InvalidParameter, "GaussianQuadratic needs finite mu and sigma > 0");
  }
  EnergyModel m;
  m.kind_ = EnergyKind::GaussianQuadratic;
  m.input_dim_ = 1;
  m.params_ = {mu, std::log(sigma)};
  return m;
}

EnergyModel EnergyModel::mlp(std::vector<std::size_t> widths, std::vector<double> params) {
  if (widths.size() < 2 || widths.back() != 1 ||
      std::any_of(widths.begin(), widths.end(), [](std::size_t w) { return w == 0; })) {
    throw Error("energy", ErrorCode::InvalidShape, "Mlp widths must be positive and end in 1");
  }
  if (params.size() != mlp_param_count(widths)) {
    throw Error("energy", ErrorCode::InvalidShape,
                "Mlp expects " + std::to_string(mlp_param_count(widths)) + " params, got " +
                    std::to_string(params.size()));
  }
  EnergyModel m;
  m.kind_ = EnergyKind::Mlp;
  m.input_dim_ = widths.front();
  m.widths_ = std::move(widths);
  m.set_params(std::move(params));
  return m;
}

void EnergyModel::set_params(std::vector<double> params) {
  if (params.size() != params_.size() && !params_.empty()) {
    throw Error("energy", ErrorCode::InvalidShape, "parameter count changed");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i])) {
      throw Error("energy", ErrorCode::NumericalError, "non-finite parameter " + std::to_string(i));
    }
  }
  params_ = std::move(params);
}

double EnergyModel::mu() const {
  if (kind_ != EnergyKind::GaussianQuadratic) {
    throw Error("energy", ErrorCode::InvalidModelKind, "mu() needs a GaussianQuadratic model");
  }
  return params_[0];
}

double EnergyModel::sigma() const {
  if (kind_ != EnergyKind::GaussianQuadratic) {
    throw Error("energy", ErrorCode::InvalidModelKind, "sigma() needs a GaussianQuadratic model");
  }
  return std::exp(params_[1]);
}

std::size_t mlp_param_count(std::span<const std::size_t> widths) {
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) count += widths[l] * widths[l + 1] + widths[l + 1];
  return count;
}

EnergyModel init_mlp(std::vector<std::size_t> widths, std::uint64_t seed) {
  if (widths.size() < 2 || widths.back() != 1 ||
      std::any_of(widths.begin(), widths.end(), [](std::size_t w) { return w == 0; })) {
    throw Error("energy", ErrorCode::InvalidShape, "init_mlp: widths must be positive and end in 1");
  }
  Rng rng(derive_seed(seed, "init_mlp"));
  std::vector<double> params;
  params.reserve(mlp_param_count(widths));
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
    for (std::size_t k = 0; k < widths[l] * widths[l + 1]; ++k) params.push_back(rng.uniform(-bound, bound));
    params.insert(params.end(), widths[l + 1], 0.0);
  }
  return EnergyModel::mlp(std::move(widths), std::move(params));
}

double energy_value(const EnergyModel& model, std::span<const double> x) {
  require_input(model, x);
  if (model.kind() == EnergyKind::GaussianQuadratic) {
    const auto p = model.params();
    const double inv_var = std::exp(-2.0 * p[1]);
    const double d = x[0] - p[0];
    const double e = 0.5 * d * d * inv_var;
    if (!std::isfinite(e)) throw numerical(0, "energy");
    return e;
  }
  return mlp_forward(model, x, scratch());
}

double energy_grad_x(const EnergyModel& model, std::span<const double> x, std::span<double> grad_x) {
  require_input(model, x);
  if (model.kind() == EnergyKind::GaussianQuadratic) {
    const auto p = model.params();
    const double inv_var = std::exp(-2.0 * p[1]);
    const double d = x[0] - p[0];
    grad_x[0] = d * inv_var;
    const double e = 0.5 * d * d * inv_var;
    if (!std::isfinite(e) || !std::isfinite(grad_x[0])) throw numerical(0, "energy");
    return e;
  }
  auto& cache = scratch();
  const double e = mlp_forward(model, x, cache);
  mlp_backward(model, cache, grad_x, {});
  return e;
}

double energy_grad_params(const EnergyModel& model, std::span<const double> x,
                          std::span<double> grad_params) {
  require_input(model, x);
  if (model.kind() == EnergyKind::GaussianQuadratic) {
    const auto p = model.params();
    const double inv_var = std::exp(-2.0 * p[1]);
    const double d = x[0] - p[0];
    grad_params[0] = -d * inv_var;
    grad_params[1] = -d * d * inv_var;
    const double e = 0.5 * d * d * inv_var;
    if (!std::isfinite(e) || !std::isfinite(grad_params[1])) throw numerical(0, "energy");
    return e;
  }
  auto& cache = scratch();
  const double e = mlp_forward(model, x, cache);
  mlp_backward(model, cache, {}, grad_params);
  return e;
}

EnergyEval energy_eval(const EnergyModel& model, std::span<const double> x) {
  require_input(model, x);
  EnergyEval out;
  out.grad_x.assign(model.input_dim(), 0.0);
  out.grad_params.assign(model.num_params(), 0.0);
  if (model.kind() == EnergyKind::GaussianQuadratic) {
    energy_grad_x(model, x, out.grad_x);
    out.value = energy_grad_params(model, x, out.grad_params);
    return out;
  }
  auto& cache = scratch();
  out.value = mlp_forward(model, x, cache);
  mlp_backward(model, cache, out.grad_x, out.grad_params);
  return out;
}

double min_abs_preactivation(const EnergyModel& model, std::span<const double> x) {
  if (model.kind() == EnergyKind::GaussianQuadratic) return std::numeric_limits<double>::infinity();
  require_input(model, x);
  auto& cache = scratch();
  mlp_forward(model, x, cache);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < cache.z.size(); ++l) {
    for (double z : cache.z[l]) smallest = std::min(smallest, std::abs(z));
  }
  return smallest;
}

namespace serial {

std::vector<double> batch_energy(const EnergyModel& model, const PointSet& points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = energy_value(model, points[i]);
  return out;
}

BatchGradients batch_energy_grads(const EnergyModel& model, const PointSet& points) {
  BatchGradients out;
  out.num_params = model.num_params();
  out.energies.resize(points.size());
  out.grads.resize(points.size() * out.num_params);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.energies[i] = energy_grad_params(
        model, points[i], std::span<double>(out.grads.data() + i * out.num_params, out.num_params));
  }
  return out;
}

}  // namespace serial

std::vector<double> batch_energy(const EnergyModel& model, const PointSet& points) {
  std::vector<double> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    slot.run([&] { out[i] = energy_value(model, points[i]); }, i);
  }
  slot.rethrow();
  return out;
}

BatchGradients batch_energy_grads(const EnergyModel& model, const PointSet& points) {
  BatchGradients out;
  out.num_params = model.num_params();
  out.energies.resize(points.size());
  out.grads.resize(points.size() * out.num_params);
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  const std::size_t np = out.num_params;
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    slot.run([&] {
      out.energies[i] =
          energy_grad_params(model, points[i], std::span<double>(out.grads.data() + i * np, np));
    }, i);
  }
  slot.rethrow();
  return out;
}

}  // namespace pscd
