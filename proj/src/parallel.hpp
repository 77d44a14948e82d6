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

#include <exception>
#include <mutex>

namespace pscd::detail {

/// Exceptions must not escape an OpenMP region. Loop bodies run through
/// `run`; the lowest-index failure is kept and rethrown after the region so
/// the reported error does not depend on thread scheduling.
class ExceptionSlot {
 public:
  template <typename F>
  void run(F&& body, long index = 0) {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_ || index < index_) {
        error_ = std::current_exception();
        index_ = index;
      }
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
  long index_ = 0;
};

}  // namespace pscd::detail
