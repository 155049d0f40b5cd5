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

#include "refloc/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace refloc {

namespace {

constexpr double kIntTol = 1e-9;
constexpr long long kMaxDpCells = 4'000'000;  // items x capacity guard

bool is_integral(double v) { return std::abs(v - std::round(v)) <= kIntTol; }

}  // namespace

KnapsackBound knapsack_upper_bound(std::span<const double> profit,
                                   std::span<const double> weight, double cap) {
  const int n = static_cast<int>(profit.size());
  KnapsackBound out;
  out.take.assign(n, 0.0);
  if (cap < 0.0) {
    out.exact = true;
    return out;
  }

  // Profitable items only; zero-weight ones are free.
  std::vector<int> items;
  items.reserve(n);
  double weight_sum = 0.0;
  bool integral = true;
  for (int i = 0; i < n; ++i) {
    if (profit[i] <= 0.0) continue;
    if (weight[i] <= kIntTol) {
      out.value += profit[i];
      out.take[i] = 1.0;
      continue;
    }
    if (weight[i] > cap + kIntTol) continue;
    items.push_back(i);
    weight_sum += weight[i];
    integral = integral && is_integral(weight[i]);
  }
  if (items.empty()) {
    out.exact = true;
    return out;
  }

  const long long w_cap =
      static_cast<long long>(std::floor(std::min(cap, weight_sum) + kIntTol));
  if (integral && static_cast<long long>(items.size()) * w_cap <= kMaxDpCells) {
    // Exact DP over integral weights. dp[w] = best profit with weight <= w.
    const int m = static_cast<int>(items.size());
    const int W = static_cast<int>(w_cap);
    std::vector<double> dp(static_cast<std::size_t>(m + 1) * (W + 1), 0.0);
    auto at = [&dp, W](int i, int w) -> double& {
      return dp[static_cast<std::size_t>(i) * (W + 1) + w];
    };
    for (int k = 1; k <= m; ++k) {
      const int idx = items[k - 1];
      const int wk = static_cast<int>(std::llround(weight[idx]));
      const double pk = profit[idx];
      for (int w = 0; w <= W; ++w) {
        double best = at(k - 1, w);
        if (wk <= w) best = std::max(best, at(k - 1, w - wk) + pk);
        at(k, w) = best;
      }
    }
    out.value += at(m, W);
    // Backtrack the chosen set.
    int w = W;
    for (int k = m; k >= 1; --k) {
      const int idx = items[k - 1];
      const int wk = static_cast<int>(std::llround(weight[idx]));
      if (wk <= w && at(k, w) == at(k - 1, w - wk) + profit[idx] &&
          at(k, w) != at(k - 1, w)) {
        out.take[idx] = 1.0;
        w -= wk;
      }
    }
    out.exact = true;
    return out;
  }

  // Dantzig fractional bound: fill by profit density, split the last item.
  std::sort(items.begin(), items.end(), [&](int a, int b) {
    const double ra = profit[a] / weight[a];
    const double rb = profit[b] / weight[b];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  double room = cap;
  bool split = false;
  for (int idx : items) {
    if (weight[idx] <= room) {
      out.take[idx] = 1.0;
      out.value += profit[idx];
      room -= weight[idx];
    } else {
      if (room > 0.0) {
        const double frac = room / weight[idx];
        out.take[idx] = frac;
        out.value += frac * profit[idx];
        split = true;
      }
      room = 0.0;
      break;
    }
  }
  out.exact = !split;
  return out;
}

}  // namespace refloc
