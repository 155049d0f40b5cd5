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

#include "refloc/perturb.hpp"

#include <cmath>
#include <stdexcept>

namespace refloc {

void PerturbConfig::validate() const {
  if (!(0.0 <= frac_min && frac_min <= frac_max && frac_max <= 1.0)) {
    throw std::invalid_argument("perturb fractions must satisfy 0 <= min <= max <= 1");
  }
  if (!(sigma_rel > 0.0)) {
    throw std::invalid_argument("sigma_rel must be positive");
  }
  if (!(capacity_floor >= 0.0)) {
    throw std::invalid_argument("capacity_floor must be nonnegative");
  }
}

Disruption sample_disruption(const Instance& reference, const PerturbConfig& config,
                             Rng& rng) {
  reference.validate();
  config.validate();
  const int nf = reference.n_facilities;
  bool any_above_floor = false;
  for (int j = 0; j < nf; ++j) {
    any_above_floor = any_above_floor || reference.capacity[j] >= config.capacity_floor;
  }
  if (!any_above_floor) {
    throw std::invalid_argument(
        "degenerate reference: every capacity lies below the capacity floor");
  }

  Disruption d;
  d.seed = rng.seed();
  d.delta_capacity.assign(nf, 0.0);

  const int m_lo = static_cast<int>(std::ceil(config.frac_min * nf - 1e-9));
  const int m_hi = static_cast<int>(std::floor(config.frac_max * nf + 1e-9));
  const int m = static_cast<int>(rng.uniform_int(m_lo, m_hi));
  if (m == 0) return d;

  // Uniform m-subset: partial Fisher-Yates over facility indices.
  std::vector<int> idx(nf);
  for (int j = 0; j < nf; ++j) idx[j] = j;
  for (int t = 0; t < m; ++t) {
    const int k = static_cast<int>(rng.uniform_int(t, nf - 1));
    std::swap(idx[t], idx[k]);
  }

  constexpr int kMaxRedraws = 10000;
  for (int t = 0; t < m; ++t) {
    const int j = idx[t];
    const double s = reference.capacity[j];
    const double sigma = config.sigma_rel * s;
    double delta = rng.normal(0.0, sigma);
    int tries = 0;
    while (s + delta < config.capacity_floor) {
      if (++tries > kMaxRedraws) {
        throw std::runtime_error("capacity floor unreachable for facility " +
                                 std::to_string(j));
      }
      delta = rng.normal(0.0, sigma);
    }
    d.delta_capacity[j] = delta;
  }
  return d;
}

Instance apply(const Instance& reference, const Disruption& d) {
  if (d.delta_capacity.size() != static_cast<std::size_t>(reference.n_facilities)) {
    throw std::invalid_argument("disruption length does not match the instance");
  }
  Instance out = reference;
  for (int j = 0; j < out.n_facilities; ++j) {
    out.capacity[j] = reference.capacity[j] + d.delta_capacity[j];
    if (out.capacity[j] < 0.0) {
      throw std::invalid_argument("disruption drives capacity of facility " +
                                  std::to_string(j) + " below zero");
    }
  }
  out.validate();
  return out;
}

}  // namespace refloc
