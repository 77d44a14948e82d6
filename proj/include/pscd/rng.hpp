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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace pscd {

/// SplitMix64 mixing function (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based 64-bit generator: output k of stream `key` is
/// splitmix64_mix(key + (k + 1) * 0x9e3779b97f4a7c15). Every draw, including
/// the normal and uniform variates below, is defined here so sequences do not
/// depend on the standard library's distribution implementations.
///
/// Satisfies UniformRandomBitGenerator so it can drive std::shuffle etc.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGolden);
  }

  /// Child stream; the parent stream is not advanced.
  Rng fork(std::uint64_t index) const noexcept { return Rng(derive_key(key_, index)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) noexcept {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      const std::uint64_t r = (*this)();
      __extension__ using u128 = unsigned __int128;
      const u128 m = static_cast<u128>(r) * n;
      if (static_cast<std::uint64_t>(m) >= threshold) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  /// Standard normal via the Box-Muller transform; the second variate of
  /// each pair is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t key() const noexcept { return key_; }

  static constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t index) noexcept {
    return splitmix64_mix(splitmix64_mix(key ^ 0x6a09e667f3bcc909ULL) + index * kGolden);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// FNV-1a of a tag; used to derive named component streams from a root seed
/// (`derive_seed(root, "sampler")`).
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) noexcept {
  return Rng::derive_key(root, fnv1a(tag));
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  return Rng::derive_key(root, index);
}

}  // namespace pscd
