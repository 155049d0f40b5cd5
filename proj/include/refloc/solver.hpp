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

#ifndef REFLOC_SOLVER_HPP_
#define REFLOC_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refloc/instance.hpp"
#include "refloc/rng.hpp"

namespace refloc {

/// Extra linear restrictions injected into a solve.
///
/// keep_at_least over reference-open facilities R with predicted fraction g
/// enforces sum_{r in R} y_r >= ceil(g*|R| - 1e-9); the integer left-hand
/// side makes the ceiling the tightest valid form, and the epsilon guards
/// float noise at exact integers. fix_open pins y_r = 1 for all r in R.
struct SideConstraint {
  enum class Kind { keep_at_least, fix_open };

  Kind kind = Kind::fix_open;
  std::vector<int> ref_open;  // sorted, unique
  double gamma_hat = 1.0;     // keep_at_least only

  static SideConstraint keep_at_least(std::vector<int> ref_open, double gamma_hat);
  static SideConstraint fix_open(std::vector<int> ref_open);

  /// Required number of open facilities among ref_open.
  int rhs() const;

  /// Indices in range, gamma in [0,1]. Throws std::invalid_argument.
  void validate(int n_facilities) const;
};

bool satisfies(const std::vector<bool>& open, std::span<const SideConstraint> constraints);

enum class BoundMethod { lagrangian, lp };

enum class SolveStatus {
  optimal,
  feasible_time_limit,
  infeasible,
  no_solution_time_limit,
};

std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

/// Per-node instrumentation payload (test hooks).
struct NodeAudit {
  long long id = 0;
  long long parent = -1;
  int depth = 0;
  double bound = 0.0;
};

struct SolveConfig {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  std::optional<long long> node_limit;
  double gap_tolerance = 1e-6;  // relative; 0 = solve to exhaustion
  BoundMethod bound_method = BoundMethod::lagrangian;
  std::uint64_t rng_seed = 0;  // heuristic tie-breaks only

  // Optional instrumentation; not part of the determinism contract.
  std::function<void(const NodeAudit&)> on_node;
  std::function<void(long long node_id, double objective)> on_incumbent;

  /// Rejects nonpositive time limits and the like before solving.
  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> incumbent;
  std::optional<double> objective;
  double dual_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long long nodes = 0;
  double elapsed = 0.0;
  std::vector<std::pair<double, double>> incumbent_trace;  // (elapsed, objective)
};

/// Open/closed/free facility fixings plus customer pinnings, as used by the
/// search tree and exposed for bound/heuristic calls.
enum class FacilityState : std::uint8_t { free_to_choose, open, closed };

struct PartialFixing {
  std::vector<FacilityState> facility;  // [facility]
  std::vector<int> customer;            // [customer] -> facility index or kFree

  static constexpr int kFree = -1;
  static PartialFixing none(const Instance& inst);
};

/// Exact branch-and-bound for single-source CFLP.
///
/// Branches facilities first (most ambiguous open/closed status in the
/// relaxation, ties to larger capacity then lower index), then assigns the
/// free customer of largest demand over its feasible facilities in
/// increasing cost order. Node selection is best-bound with depth-first
/// plunging on the preferred child. Fully deterministic for a fixed
/// (instance, config, constraints, seed): identical results except the
/// elapsed fields.
SolveResult solve(const Instance& inst, const SolveConfig& config,
                  std::span<const SideConstraint> constraints = {});

/// Valid lower bound on any completion of the fixing. Lagrangian relaxation
/// of the assignment constraints (per-facility 0/1 knapsacks, subgradient
/// ascent) or the LP relaxation, per method. Returns +infinity when the
/// fixing is provably infeasible.
double lower_bound(const Instance& inst, const PartialFixing& fixing,
                   std::span<const SideConstraint> constraints,
                   BoundMethod method = BoundMethod::lagrangian);

/// Single Lagrangian evaluation at the given multipliers (one per customer;
/// entries for fixed customers are ignored). No subgradient steps.
double lagrangian_value(const Instance& inst, const PartialFixing& fixing,
                        std::span<const SideConstraint> constraints,
                        std::span<const double> lambda);

/// Greedy + one local-search pass. Largest-demand customers are assigned to
/// the cheapest facility with residual capacity, opening facilities as
/// needed; may fail (returns nullopt) even when the subproblem is feasible.
std::optional<Solution> primal_heuristic(const Instance& inst, const PartialFixing& fixing,
                                         std::span<const SideConstraint> constraints,
                                         Rng& rng);

/// Exhaustive-enumeration optimum for tiny instances (N_F <= 6, N_C <= 9);
/// the independent correctness oracle for solve(). Throws
/// std::invalid_argument beyond the size limit.
SolveResult brute_force_oracle(const Instance& inst,
                               std::span<const SideConstraint> constraints = {});

}  // namespace refloc

#endif  // REFLOC_SOLVER_HPP_
