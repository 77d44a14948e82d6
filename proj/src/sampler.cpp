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

#include "pscd/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace pscd {

namespace {

Error invalid(const std::string& what) { return Error("sampler", ErrorCode::InvalidParameter, what); }

void langevin_in_place(const EnergyModel& model, std::span<double> x, const LangevinConfig& cfg, Rng& rng,
                       std::vector<double>& grad) {
  const double drift = 0.5 * cfg.step_size;
  const double noise = cfg.noise_scale();
  grad.resize(x.size());
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    try {
      energy_grad_x(model, x, grad);
    } catch (const Error& e) {
      throw DivergedChain(step, std::string("energy gradient failed: ") + e.what());
    }
    bool finite = true;
    for (std::size_t d = 0; d < x.size(); ++d) {
      x[d] -= drift * grad[d];
      if (noise != 0.0) x[d] += noise * rng.normal();
      finite = finite && std::isfinite(x[d]);
    }
    if (!finite) throw DivergedChain(step, "Langevin state is not finite");
  }
}

}  // namespace

void LangevinConfig::validate() const {
  if (steps == 0) throw invalid("Langevin needs at least one step");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw invalid("Langevin step size must be positive");
  if (noise_scale_override && !(*noise_scale_override >= 0.0)) throw invalid("noise scale must be >= 0");
  if (const auto* b = std::get_if<ReplayBufferInit>(&init)) {
    if (!(b->lo < b->hi)) throw invalid("replay buffer region must satisfy lo < hi");
    if (b->capacity == 0) throw invalid("replay buffer capacity must be positive");
    if (!(b->reinit_prob >= 0.0 && b->reinit_prob <= 1.0)) throw invalid("reinit_prob must lie in [0, 1]");
  }
  if (const auto* u = std::get_if<FixedUniformInit>(&init)) {
    if (!(u->lo < u->hi)) throw invalid("uniform init must satisfy lo < hi");
  }
}

double LangevinConfig::noise_scale() const {
  return noise_scale_override ? *noise_scale_override : std::sqrt(step_size);
}

std::vector<double> langevin_chain(const EnergyModel& model, std::span<const double> x0,
                                   const LangevinConfig& cfg, Rng& rng) {
  cfg.validate();
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error("sampler", ErrorCode::InvalidState, "chain start is not finite");
  }
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> grad;
  langevin_in_place(model, x, cfg, rng, grad);
  return x;
}

namespace serial {

void run_chains(const EnergyModel& model, PointSet& states, const LangevinConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Rng root(seed);
  std::vector<double> grad;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Rng rng = root.fork(i);
    langevin_in_place(model, states[i], cfg, rng, grad);
  }
}

}  // namespace serial

void run_chains(const EnergyModel& model, PointSet& states, const LangevinConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Rng root(seed);
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  detail::ExceptionSlot slot;
#pragma omp parallel
  {
    std::vector<double> grad;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      slot.run(
          [&] {
            Rng rng = root.fork(static_cast<std::uint64_t>(i));
            langevin_in_place(model, states[i], cfg, rng, grad);
          },
          i);
    }
  }
  slot.rethrow();
}

ReplayBuffer::ReplayBuffer(std::size_t dim, std::size_t capacity, double reinit_prob, double lo, double hi)
    : ReplayBuffer(capacity, reinit_prob, std::vector<double>(dim, lo), std::vector<double>(dim, hi)) {}

ReplayBuffer::ReplayBuffer(std::size_t capacity, double reinit_prob, std::vector<double> lo,
                           std::vector<double> hi)
    : capacity_(capacity), reinit_prob_(reinit_prob), lo_(std::move(lo)), hi_(std::move(hi)), entries_(lo_.size()) {
  if (capacity_ == 0) throw invalid("replay buffer capacity must be positive");
  if (!(reinit_prob_ >= 0.0 && reinit_prob_ <= 1.0)) throw invalid("reinit_prob must lie in [0, 1]");
  if (lo_.empty() || lo_.size() != hi_.size()) throw invalid("reinit region dimension mismatch");
  for (std::size_t d = 0; d < lo_.size(); ++d) {
    if (!(lo_[d] < hi_[d])) throw invalid("reinit region must satisfy lo < hi");
  }
}

PointSet ReplayBuffer::draw(std::size_t n, Rng& rng) const {
  const std::size_t dim = lo_.size();
  PointSet out(dim);
  out.reserve(n);
  std::vector<double> x(dim);
  for (std::size_t k = 0; k < n; ++k) {
    // The reinit coin is always flipped so the stream layout does not depend
    // on the buffer contents.
    const bool reinit = rng.bernoulli(reinit_prob_) || entries_.empty();
    if (reinit) {
      for (std::size_t d = 0; d < dim; ++d) x[d] = rng.uniform(lo_[d], hi_[d]);
      out.push_back(x);
    } else {
      out.push_back(entries_[rng.below(entries_.size())]);
    }
  }
  return out;
}

void ReplayBuffer::push(const PointSet& states, Rng& rng) {
  if (states.empty()) return;
  if (states.dim() != lo_.size()) {
    throw Error("sampler", ErrorCode::InvalidState, "pushed states have the wrong dimension");
  }
  for (double v : states.values()) {
    if (!std::isfinite(v)) throw Error("sampler", ErrorCode::InvalidState, "pushed state is not finite");
  }
  auto& values = entries_.values();
  values.insert(values.end(), states.values().begin(), states.values().end());
  const std::size_t dim = lo_.size();
  while (entries_.size() > capacity_) {
    // Swap a random victim with the last row, then drop the last row.
    const std::size_t victim = rng.below(entries_.size());
    const std::size_t last = entries_.size() - 1;
    if (victim != last) {
      std::swap_ranges(values.begin() + static_cast<std::ptrdiff_t>(victim * dim),
                       values.begin() + static_cast<std::ptrdiff_t>((victim + 1) * dim),
                       values.begin() + static_cast<std::ptrdiff_t>(last * dim));
    }
    values.resize(last * dim);
  }
}

PointSet buffer_draw(const ReplayBuffer& buffer, std::size_t n, Rng& rng) { return buffer.draw(n, rng); }

void buffer_push(ReplayBuffer& buffer, const PointSet& states, Rng& rng) { buffer.push(states, rng); }

std::vector<double> gaussian_exact_sample(const EnergyModel& model, std::size_t n, Rng& rng) {
  if (model.kind() != EnergyKind::GaussianQuadratic) {
    throw Error("sampler", ErrorCode::InvalidModelKind, "exact sampling needs a GaussianQuadratic model");
  }
  const double mu = model.mu();
  const double sigma = model.sigma();
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal(mu, sigma);
  return out;
}

}  // namespace pscd
