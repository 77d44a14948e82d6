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
#include <optional>
#include <variant>
#include <vector>

#include "pscd/energy.hpp"
#include "pscd/points.hpp"
#include "pscd/rng.hpp"

namespace pscd {

struct ReplayBufferInit {
  std::size_t capacity = 10000;
  double reinit_prob = 0.05;
  double lo = -4.0;
  double hi = 4.0;
};

struct FixedUniformInit {
  double lo = -4.0;
  double hi = 4.0;
};

/// Chains start at the positive minibatch (classic CD-K).
struct DataDistributionInit {};

using ChainInit = std::variant<ReplayBufferInit, FixedUniformInit, DataDistributionInit>;

struct LangevinConfig {
  std::size_t steps = 60;
  double step_size = 0.01;
  /// Replaces sqrt(step_size) as the noise scale when set (0 disables noise).
  std::optional<double> noise_scale_override;
  ChainInit init = ReplayBufferInit{};

  /// InvalidParameter on steps == 0, step_size <= 0, negative noise or
  /// unordered bounds.
  void validate() const;
  double noise_scale() const;
};

/// Runs exactly cfg.steps updates
///   x <- x - (step_size / 2) grad_x E(x) + s * xi,  xi ~ N(0, I)
/// with s = noise_scale_override or sqrt(step_size). Throws DivergedChain with
/// the 1-based step index when the state leaves the finite reals.
std::vector<double> langevin_chain(const EnergyModel& model, std::span<const double> x0,
                                   const LangevinConfig& cfg, Rng& rng);

/// Advances every row of `states` in place; chain i draws its noise from
/// Rng(seed).fork(i), so the result is independent of scheduling.
namespace serial {
void run_chains(const EnergyModel& model, PointSet& states, const LangevinConfig& cfg, std::uint64_t seed);
}
void run_chains(const EnergyModel& model, PointSet& states, const LangevinConfig& cfg, std::uint64_t seed);

/// Persistent chain store. Single-writer: callers serialize draw/push.
class ReplayBuffer {
 public:
  /// Box [lo, hi] in every one of `dim` coordinates.
  ReplayBuffer(std::size_t dim, std::size_t capacity, double reinit_prob, double lo, double hi);
  ReplayBuffer(std::size_t capacity, double reinit_prob, std::vector<double> lo, std::vector<double> hi);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dim() const noexcept { return entries_.dim(); }
  double reinit_prob() const noexcept { return reinit_prob_; }
  const PointSet& entries() const noexcept { return entries_; }

  /// Each start is, with probability reinit_prob (always when empty), uniform
  /// in the reinit region; otherwise a uniformly chosen stored entry.
  PointSet draw(std::size_t n, Rng& rng) const;

  /// Appends, then evicts uniformly random entries down to capacity.
  /// InvalidState on dimension mismatch or non-finite states.
  void push(const PointSet& states, Rng& rng);

 private:
  std::size_t capacity_;
  double reinit_prob_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  PointSet entries_;
};

PointSet buffer_draw(const ReplayBuffer& buffer, std::size_t n, Rng& rng);
void buffer_push(ReplayBuffer& buffer, const PointSet& states, Rng& rng);

/// n i.i.d. draws from N(mu, sigma) of a GaussianQuadratic model;
/// InvalidModelKind otherwise.
std::vector<double> gaussian_exact_sample(const EnergyModel& model, std::size_t n, Rng& rng);

}  // namespace pscd
