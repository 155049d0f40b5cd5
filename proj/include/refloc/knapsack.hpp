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

#ifndef REFLOC_KNAPSACK_HPP_
#define REFLOC_KNAPSACK_HPP_

#include <span>
#include <vector>

namespace refloc {

struct KnapsackBound {
  double value = 0.0;        // max profit, exact or a valid upper bound
  std::vector<double> take;  // per-item inclusion in [0,1]; 0/1 when exact
  bool exact = false;
};

/// Upper bound on the 0/1 knapsack max(sum p_i x_i : sum w_i x_i <= cap).
///
/// Solves exactly by dynamic programming when all weights are integral and
/// the table stays small; otherwise falls back to the Dantzig fractional
/// bound. Items with nonpositive profit are never taken; zero-weight
/// profitable items are always taken.
KnapsackBound knapsack_upper_bound(std::span<const double> profit,
                                   std::span<const double> weight, double cap);

}  // namespace refloc

#endif  // REFLOC_KNAPSACK_HPP_
