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

#ifndef REFLOC_SIMPLEX_HPP_
#define REFLOC_SIMPLEX_HPP_

#include <utility>
#include <vector>

namespace refloc {

enum class RowSense { le, ge, eq };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (column, value)
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// min cost.x subject to rows, lower <= x <= upper.
struct LpProblem {
  int n = 0;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;  // +inf allowed
  std::vector<LpRow> rows;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase primal simplex with bounded variables. Deterministic
/// pivoting (largest reduced cost, lowest index ties, Bland fallback after
/// a degeneracy streak). Sized for the compact LPs this toolkit builds,
/// not for general large-scale use.
LpSolution solve_lp(const LpProblem& prob, int max_iterations = 50000);

}  // namespace refloc

#endif  // REFLOC_SIMPLEX_HPP_
