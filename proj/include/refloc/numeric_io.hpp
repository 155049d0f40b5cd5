// Copyright 2026 The refloc Authors
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

#ifndef REFLOC_NUMERIC_IO_HPP_
#define REFLOC_NUMERIC_IO_HPP_

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace refloc {

/// Shortest decimal form that parses back to the identical double.
/// Every file format in the toolkit writes numbers through this helper so
/// that re-serialization is byte-stable.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed number '" + std::string(s) + "' for " + what);
  }
  return v;
}

inline long long parse_int(std::string_view s, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed integer '" + std::string(s) + "' for " + what);
  }
  return v;
}

}  // namespace refloc

#endif  // REFLOC_NUMERIC_IO_HPP_
