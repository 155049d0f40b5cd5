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

#ifndef REFLOC_INSTANCE_HPP_
#define REFLOC_INSTANCE_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace refloc {

/// Absolute tolerance for objective comparisons, in cost units.
inline constexpr double kCostTol = 1e-6;

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Single-source capacitated facility location instance.
///
/// Immutable by convention once validated: nothing in the toolkit mutates
/// an Instance in place, so instances are safe to share across threads.
struct Instance {
  int n_facilities = 0;
  int n_customers = 0;
  std::vector<std::vector<double>> assign_cost;  // [customer][facility]
  std::vector<double> fixed_cost;                // [facility]
  std::vector<double> demand;                    // [customer]
  std::vector<double> capacity;                  // [facility]

  double total_demand() const;
  double total_capacity() const;

  /// Necessary feasibility condition: total capacity covers total demand.
  /// Sufficiency is the solver's job.
  bool potentially_feasible() const { return total_capacity() >= total_demand(); }

  /// Throws ValidationError on dimension mismatches or coefficients that
  /// are negative or non-finite.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

/// Customer-to-facility assignment plus the open-facility vector.
///
/// Storing the assignment as one facility index per customer makes
/// "exactly one facility per customer" structural.
struct Solution {
  static constexpr int kUnassigned = -1;

  std::vector<bool> open;   // [facility]
  std::vector<int> assign;  // [customer] -> facility index, or kUnassigned
  double objective = 0.0;

  bool operator==(const Solution&) const = default;
};

/// Total cost of (assign, open): assignment costs plus fixed costs of every
/// open facility, whether or not it serves anyone. Ignores capacities.
/// Throws std::out_of_range on an unassigned customer or a bad index.
double evaluate(const Instance& inst, const Solution& sol);

struct Violation {
  enum class Kind {
    overload,            // facility load exceeds capacity
    invalid_assignment,  // customer unassigned or index out of range
    closed_facility,     // customer assigned to a facility with open=false
  };
  Kind kind;
  int facility = -1;
  int customer = -1;
  double load = 0.0;      // overload only
  double capacity = 0.0;  // overload only

  std::string describe() const;
};

/// Constraint violations are data, not errors: an infeasible solution
/// yields a non-passing report, never an exception.
struct FeasibilityReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

FeasibilityReport check_feasible(const Instance& inst, const Solution& sol);

}  // namespace refloc

#endif  // REFLOC_INSTANCE_HPP_
