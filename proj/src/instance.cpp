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

#include "refloc/instance.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace refloc {

double Instance::total_demand() const {
  return std::accumulate(demand.begin(), demand.end(), 0.0);
}

double Instance::total_capacity() const {
  return std::accumulate(capacity.begin(), capacity.end(), 0.0);
}

void Instance::validate() const {
  if (n_facilities <= 0) throw ValidationError("n_facilities must be positive");
  if (n_customers <= 0) throw ValidationError("n_customers must be positive");
  auto check_len = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
      std::ostringstream os;
      os << what << " has length " << got << ", expected " << want;
      throw ValidationError(os.str());
    }
  };
  check_len(capacity.size(), static_cast<std::size_t>(n_facilities), "capacity");
  check_len(fixed_cost.size(), static_cast<std::size_t>(n_facilities), "fixed_cost");
  check_len(demand.size(), static_cast<std::size_t>(n_customers), "demand");
  check_len(assign_cost.size(), static_cast<std::size_t>(n_customers), "assign_cost");
  for (int i = 0; i < n_customers; ++i) {
    check_len(assign_cost[i].size(), static_cast<std::size_t>(n_facilities),
              "assign_cost row");
  }
  auto check_coeff = [](double v, const char* what, int idx) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << what << "[" << idx << "] = " << v << " is not a finite nonnegative value";
      throw ValidationError(os.str());
    }
  };
  for (int j = 0; j < n_facilities; ++j) {
    check_coeff(capacity[j], "capacity", j);
    check_coeff(fixed_cost[j], "fixed_cost", j);
  }
  for (int i = 0; i < n_customers; ++i) {
    check_coeff(demand[i], "demand", i);
    for (int j = 0; j < n_facilities; ++j) check_coeff(assign_cost[i][j], "assign_cost", i);
  }
}

double evaluate(const Instance& inst, const Solution& sol) {
  if (sol.assign.size() != static_cast<std::size_t>(inst.n_customers) ||
      sol.open.size() != static_cast<std::size_t>(inst.n_facilities)) {
    throw std::out_of_range("solution dimensions do not match instance");
  }
  double total = 0.0;
  for (int i = 0; i < inst.n_customers; ++i) {
    const int j = sol.assign[i];
    if (j < 0 || j >= inst.n_facilities) {
      std::ostringstream os;
      os << "customer " << i << " assigned to invalid facility index " << j;
      throw std::out_of_range(os.str());
    }
    total += inst.assign_cost[i][j];
  }
  for (int j = 0; j < inst.n_facilities; ++j) {
    if (sol.open[j]) total += inst.fixed_cost[j];
  }
  return total;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::overload:
      os << "facility " << facility << " overloaded: load " << load << " > capacity "
         << capacity;
      break;
    case Kind::invalid_assignment:
      os << "customer " << customer << " has no valid facility assignment";
      break;
    case Kind::closed_facility:
      os << "customer " << customer << " assigned to closed facility " << facility;
      break;
  }
  return os.str();
}

FeasibilityReport check_feasible(const Instance& inst, const Solution& sol) {
  FeasibilityReport report;
  if (sol.assign.size() != static_cast<std::size_t>(inst.n_customers) ||
      sol.open.size() != static_cast<std::size_t>(inst.n_facilities)) {
    throw std::out_of_range("solution dimensions do not match instance");
  }
  std::vector<double> load(inst.n_facilities, 0.0);
  for (int i = 0; i < inst.n_customers; ++i) {
    const int j = sol.assign[i];
    if (j < 0 || j >= inst.n_facilities) {
      report.violations.push_back(
          {Violation::Kind::invalid_assignment, -1, i, 0.0, 0.0});
      continue;
    }
    if (!sol.open[j]) {
      report.violations.push_back({Violation::Kind::closed_facility, j, i, 0.0, 0.0});
    }
    load[j] += inst.demand[i];
  }
  for (int j = 0; j < inst.n_facilities; ++j) {
    if (load[j] > inst.capacity[j] + 1e-9) {
      report.violations.push_back(
          {Violation::Kind::overload, j, -1, load[j], inst.capacity[j]});
    }
  }
  return report;
}

}  // namespace refloc
