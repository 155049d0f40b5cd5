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

// Seeded generators shared by the test suites.

#ifndef REFLOC_TESTS_SUPPORT_GEN_HPP_
#define REFLOC_TESTS_SUPPORT_GEN_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "refloc/instance.hpp"
#include "refloc/rng.hpp"
#include "refloc/solver.hpp"

namespace refloc::testsupport {

// Random CFLP with integer demands and a capacity/demand ratio drawn from
// [ratio_lo, ratio_hi]; ratios below 1 yield capacity-infeasible instances.
inline Instance random_instance(Rng& rng, int nf, int nc, double ratio_lo = 1.2,
                                double ratio_hi = 2.5) {
  Instance inst;
  inst.n_facilities = nf;
  inst.n_customers = nc;
  inst.demand.resize(nc);
  double total_demand = 0.0;
  for (int i = 0; i < nc; ++i) {
    inst.demand[i] = static_cast<double>(rng.uniform_int(1, 20));
    total_demand += inst.demand[i];
  }
  const double ratio = rng.uniform_real(ratio_lo, ratio_hi);
  std::vector<double> share(nf);
  double share_sum = 0.0;
  for (int j = 0; j < nf; ++j) {
    share[j] = rng.uniform_real(0.5, 1.5);
    share_sum += share[j];
  }
  inst.capacity.resize(nf);
  for (int j = 0; j < nf; ++j) {
    inst.capacity[j] = std::max(1.0, std::round(ratio * total_demand * share[j] / share_sum));
  }
  inst.fixed_cost.resize(nf);
  for (int j = 0; j < nf; ++j) inst.fixed_cost[j] = rng.uniform_real(5.0, 120.0);
  inst.assign_cost.assign(nc, std::vector<double>(nf));
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nf; ++j) inst.assign_cost[i][j] = rng.uniform_real(1.0, 60.0);
  }
  inst.validate();
  return inst;
}

// Random side constraints: zero or more keep_at_least / fix_open mixes.
inline std::vector<SideConstraint> random_constraints(Rng& rng, int nf) {
  std::vector<SideConstraint> out;
  const int n = static_cast<int>(rng.uniform_int(0, 2));
  for (int t = 0; t < n; ++t) {
    std::vector<int> members;
    for (int j = 0; j < nf; ++j) {
      if (rng.uniform01() < 0.5) members.push_back(j);
    }
    if (members.empty()) members.push_back(static_cast<int>(rng.uniform_int(0, nf - 1)));
    if (rng.uniform01() < 0.3) {
      out.push_back(SideConstraint::fix_open(members));
    } else {
      out.push_back(SideConstraint::keep_at_least(members, rng.uniform01()));
    }
  }
  return out;
}

// Literal transcription of the model constraints, kept independent of
// check_feasible: builds the full x matrix and checks each row of
// "load <= capacity" and "exactly one facility per customer".
inline bool independent_feasible(const Instance& inst, const Solution& sol) {
  if (sol.assign.size() != static_cast<std::size_t>(inst.n_customers)) return false;
  if (sol.open.size() != static_cast<std::size_t>(inst.n_facilities)) return false;
  std::vector<std::vector<int>> x(inst.n_customers, std::vector<int>(inst.n_facilities, 0));
  for (int i = 0; i < inst.n_customers; ++i) {
    const int j = sol.assign[i];
    if (j < 0 || j >= inst.n_facilities) return false;
    x[i][j] = 1;
  }
  for (int i = 0; i < inst.n_customers; ++i) {
    int row = 0;
    for (int j = 0; j < inst.n_facilities; ++j) row += x[i][j];
    if (row != 1) return false;
  }
  for (int j = 0; j < inst.n_facilities; ++j) {
    double load = 0.0;
    for (int i = 0; i < inst.n_customers; ++i) load += inst.demand[i] * x[i][j];
    if (load > inst.capacity[j] * (sol.open[j] ? 1.0 : 0.0) + 1e-9) return false;
  }
  return true;
}

}  // namespace refloc::testsupport

#endif  // REFLOC_TESTS_SUPPORT_GEN_HPP_
