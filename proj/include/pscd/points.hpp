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
#include <span>
#include <vector>

#include "pscd/error.hpp"

namespace pscd {

/// A batch of points of equal dimension stored row-major.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
    if (dim_ == 0 || values_.size() % dim_ != 0) {
      throw Error("points", ErrorCode::InvalidShape, "value count is not a multiple of dim");
    }
  }
  PointSet(std::size_t dim, std::size_t count) : dim_(dim), values_(dim * count, 0.0) {}

  /// 1-D convenience.
  static PointSet from_scalars(std::vector<double> xs) { return PointSet(1, std::move(xs)); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) noexcept { return {values_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> x) {
    if (x.size() != dim_) {
      throw Error("points", ErrorCode::InvalidShape, "point dimension mismatch");
    }
    values_.insert(values_.end(), x.begin(), x.end());
  }

  void reserve(std::size_t n) { values_.reserve(n * dim_); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

}  // namespace pscd
