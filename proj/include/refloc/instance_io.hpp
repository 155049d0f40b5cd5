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

#ifndef REFLOC_INSTANCE_IO_HPP_
#define REFLOC_INSTANCE_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "refloc/instance.hpp"

namespace refloc {

/// Parse failure with the 1-based position of the offending token.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line_, int column_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
  int line;
  int column;
};

/// Reads the OR-Library style layout:
///
///   line 1:            N_F N_C
///   next N_F lines:    capacity fixed_cost        (one facility per line)
///   then:              N_C demands                (any line wrapping)
///   then:              N_C rows of N_F assignment costs (any line wrapping)
///
/// Whitespace-tolerant: tokens may wrap across lines anywhere. Exactly this
/// layout is supported; files with a different block order (some archives
/// interleave each customer's demand with its cost row) are rejected loudly
/// rather than guessed at.
Instance parse_orlib(std::string_view text);

/// Canonical self-describing instance document. Sections:
///   [meta]       format_version = 1, n_facilities, n_customers
///   [capacity]   N_F values
///   [fixed_cost] N_F values
///   [demand]     N_C values
///   [assign_cost] N_C lines of N_F values, row-major (one customer per line)
///
/// Values are written in shortest round-trip decimal form (typically at most
/// 9 significant digits for benchmark data), so read_canonical(write_canonical(P))
/// reproduces P bit-exactly.
std::string write_canonical(const Instance& inst);
Instance read_canonical(std::string_view text);

/// Loads a file, picking the format by extension: ".cflp" -> canonical,
/// anything else -> OR-Library layout. A leading "[meta]" overrides the
/// extension.
Instance load_instance(const std::filesystem::path& path);

}  // namespace refloc

#endif  // REFLOC_INSTANCE_IO_HPP_
