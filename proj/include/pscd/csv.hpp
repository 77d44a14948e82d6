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

#include <concepts>
#include <cstdio>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

namespace pscd {

/// Doubles with 17 significant digits (round-trip exact).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal CSV builder: header line, comma separators, LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((write_field(fields, first)), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  template <typename T>
  void write_field(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::floating_point<T>) {
      out_ << format_double(v);
    } else {
      out_ << v;
    }
  }

  std::ostringstream out_;
};

}  // namespace pscd
