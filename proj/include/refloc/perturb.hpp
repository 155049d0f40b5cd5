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

#ifndef REFLOC_PERTURB_HPP_
#define REFLOC_PERTURB_HPP_

#include <cstdint>
#include <vector>

#include "refloc/instance.hpp"
#include "refloc/rng.hpp"

namespace refloc {

/// Per-facility capacity deltas; zero for unperturbed facilities.
struct Disruption {
  std::vector<double> delta_capacity;
  std::uint64_t seed = 0;  // rng stream that produced the draw

  bool operator==(const Disruption&) const = default;
};

struct PerturbConfig {
  double frac_min = 0.05;      // fraction of facilities perturbed, lower end
  double frac_max = 0.50;      // upper end
  double sigma_rel = 0.2;      // noise sigma as a fraction of the capacity
  double capacity_floor = 1.0; // draws pushing a capacity below this are redone

  void validate() const;
};

/// Draws a disruption: the perturbed-facility count m is uniform over
/// {ceil(frac_min*N_F), ..., floor(frac_max*N_F)}, the m-subset is uniform,
/// and each chosen capacity receives Normal(0, (sigma_rel*s_j)^2) noise,
/// redrawn while s_j + delta would fall below capacity_floor. Costs,
/// demands and fixed costs are never touched.
Disruption sample_disruption(const Instance& reference, const PerturbConfig& config,
                             Rng& rng);

/// reference + disruption: a new validated Instance with shifted
/// capacities; every other field is copied bit-identically.
Instance apply(const Instance& reference, const Disruption& d);

}  // namespace refloc

#endif  // REFLOC_PERTURB_HPP_
