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

#include "refloc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "refloc/knapsack.hpp"
#include "refloc/simplex.hpp"

namespace refloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPruneEps = 1e-9;
constexpr double kLoadEps = 1e-9;
constexpr int kRootSubgradientIters = 50;
constexpr int kNodeSubgradientIters = 10;

}  // namespace

SideConstraint SideConstraint::keep_at_least(std::vector<int> ref_open, double gamma_hat) {
  SideConstraint c;
  c.kind = Kind::keep_at_least;
  c.ref_open = std::move(ref_open);
  std::sort(c.ref_open.begin(), c.ref_open.end());
  c.ref_open.erase(std::unique(c.ref_open.begin(), c.ref_open.end()), c.ref_open.end());
  c.gamma_hat = gamma_hat;
  return c;
}

SideConstraint SideConstraint::fix_open(std::vector<int> ref_open) {
  SideConstraint c;
  c.kind = Kind::fix_open;
  c.ref_open = std::move(ref_open);
  std::sort(c.ref_open.begin(), c.ref_open.end());
  c.ref_open.erase(std::unique(c.ref_open.begin(), c.ref_open.end()), c.ref_open.end());
  c.gamma_hat = 1.0;
  return c;
}

int SideConstraint::rhs() const {
  if (kind == Kind::fix_open) return static_cast<int>(ref_open.size());
  const double raw = gamma_hat * static_cast<double>(ref_open.size());
  return static_cast<int>(std::ceil(raw - 1e-9));
}

void SideConstraint::validate(int n_facilities) const {
  for (int r : ref_open) {
    if (r < 0 || r >= n_facilities) {
      throw std::invalid_argument("side constraint references facility " +
                                  std::to_string(r) + " out of range");
    }
  }
  if (kind == Kind::keep_at_least && (gamma_hat < 0.0 || gamma_hat > 1.0 ||
                                      !std::isfinite(gamma_hat))) {
    throw std::invalid_argument("keep_at_least gamma must lie in [0,1]");
  }
}

bool satisfies(const std::vector<bool>& open, std::span<const SideConstraint> constraints) {
  for (const auto& c : constraints) {
    if (c.kind == SideConstraint::Kind::fix_open) {
      for (int r : c.ref_open) {
        if (!open[r]) return false;
      }
    } else {
      int count = 0;
      for (int r : c.ref_open) count += open[r] ? 1 : 0;
      if (count < c.rhs()) return false;
    }
  }
  return true;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_time_limit: return "feasible_time_limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::no_solution_time_limit: return "no_solution_time_limit";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "feasible_time_limit") return SolveStatus::feasible_time_limit;
  if (s == "infeasible") return SolveStatus::infeasible;
  if (s == "no_solution_time_limit") return SolveStatus::no_solution_time_limit;
  throw std::invalid_argument("unknown solve status '" + s + "'");
}

void SolveConfig::validate() const {
  if (std::isnan(time_limit) || time_limit <= 0.0) {
    throw std::invalid_argument("time_limit must be positive (or infinite)");
  }
  if (gap_tolerance < 0.0 || std::isnan(gap_tolerance)) {
    throw std::invalid_argument("gap_tolerance must be nonnegative");
  }
  if (node_limit && *node_limit <= 0) {
    throw std::invalid_argument("node_limit must be positive");
  }
}

PartialFixing PartialFixing::none(const Instance& inst) {
  PartialFixing f;
  f.facility.assign(inst.n_facilities, FacilityState::free_to_choose);
  f.customer.assign(inst.n_customers, kFree);
  return f;
}

namespace {

struct KeepConstraint {
  std::vector<int> members;
  std::vector<char> is_member;  // [facility]
  int rhs = 0;
};

// fix_open constraints become root facility fixings; keep_at_least stays
// dynamic. Vacuous keeps (rhs 0) are dropped so a gamma=0 hint solves the
// identical problem as no hint at all.
struct NormalizedConstraints {
  std::vector<KeepConstraint> keeps;
  std::vector<int> forced_open;
};

NormalizedConstraints normalize_constraints(const Instance& inst,
                                            std::span<const SideConstraint> constraints) {
  NormalizedConstraints out;
  for (const auto& c : constraints) {
    c.validate(inst.n_facilities);
    if (c.kind == SideConstraint::Kind::fix_open) {
      out.forced_open.insert(out.forced_open.end(), c.ref_open.begin(), c.ref_open.end());
    } else {
      const int rhs = c.rhs();
      if (rhs <= 0) continue;
      KeepConstraint k;
      k.members = c.ref_open;
      k.rhs = rhs;
      k.is_member.assign(inst.n_facilities, 0);
      for (int r : k.members) k.is_member[r] = 1;
      out.keeps.push_back(std::move(k));
    }
  }
  return out;
}

// Residual capacities, base cost and quick infeasibility screens for one
// node of the search (or an externally supplied fixing).
struct NodeView {
  bool infeasible = false;
  double base_cost = 0.0;
  std::vector<double> residual;     // [facility]; meaningful for non-closed
  std::vector<int> free_customers;  // ascending
  double free_demand = 0.0;
};

NodeView make_view(const Instance& inst, const PartialFixing& fix,
                   std::span<const KeepConstraint> keeps) {
  NodeView v;
  v.residual = inst.capacity;
  for (int j = 0; j < inst.n_facilities; ++j) {
    if (fix.facility[j] == FacilityState::open) v.base_cost += inst.fixed_cost[j];
  }
  for (int i = 0; i < inst.n_customers; ++i) {
    const int j = fix.customer[i];
    if (j == PartialFixing::kFree) {
      v.free_customers.push_back(i);
      v.free_demand += inst.demand[i];
      continue;
    }
    if (j < 0 || j >= inst.n_facilities || fix.facility[j] != FacilityState::open) {
      v.infeasible = true;  // inconsistent fixing
      return v;
    }
    v.base_cost += inst.assign_cost[i][j];
    v.residual[j] -= inst.demand[i];
    if (v.residual[j] < -kLoadEps) {
      v.infeasible = true;
      return v;
    }
  }
  double open_or_free_residual = 0.0;
  for (int j = 0; j < inst.n_facilities; ++j) {
    if (fix.facility[j] != FacilityState::closed) {
      open_or_free_residual += std::max(v.residual[j], 0.0);
    }
  }
  if (open_or_free_residual < v.free_demand - kLoadEps) {
    v.infeasible = true;
    return v;
  }
  for (const auto& k : keeps) {
    int possible = 0;
    for (int r : k.members) {
      if (fix.facility[r] != FacilityState::closed) ++possible;
    }
    if (possible < k.rhs) {
      v.infeasible = true;
      return v;
    }
  }
  for (int i : v.free_customers) {
    bool ok = false;
    for (int j = 0; j < inst.n_facilities && !ok; ++j) {
      ok = fix.facility[j] != FacilityState::closed &&
           v.residual[j] >= inst.demand[i] - kLoadEps;
    }
    if (!ok) {
      v.infeasible = true;
      return v;
    }
  }
  return v;
}

struct RelaxResult {
  bool infeasible = false;
  double bound = -kInf;
  std::vector<double> lambda;  // [customer]; only free entries meaningful
  std::vector<double> lean;    // [facility]; <= 0 favors open, |.| = ambiguity
};

// Lagrangian relaxation of the assignment constraints: dualizing
// sum_j x_ij = 1 splits the problem into one 0/1 knapsack per facility with
// item profits lambda_i - c_ij and capacity = residual capacity. Facility j
// contributes f_j - rho_j when open (rho_j the knapsack optimum), so free
// facilities contribute min(0, f_j - rho_j). A keep_at_least constraint is
// repaired greedily: force open the cheapest free members until the count
// holds, which is exact for a single cardinality bound; with several keeps
// the largest single repair cost is charged, still a valid lower bound.
// Multipliers ascend by subgradient steps theta*(UB-L)/||g||^2.
RelaxResult lagrangian_relax(const Instance& inst, const PartialFixing& fix,
                             std::span<const KeepConstraint> keeps, const NodeView& view,
                             int max_iters, double ub_hint,
                             const std::vector<double>& warm_lambda) {
  RelaxResult out;
  const int nf = inst.n_facilities;
  const auto& free_cust = view.free_customers;
  const int nfree = static_cast<int>(free_cust.size());

  out.lambda.assign(inst.n_customers, 0.0);
  if (warm_lambda.size() == out.lambda.size()) {
    out.lambda = warm_lambda;
  } else {
    for (int i : free_cust) {
      double best = kInf;
      for (int j = 0; j < nf; ++j) {
        if (fix.facility[j] == FacilityState::closed) continue;
        if (view.residual[j] < inst.demand[i] - kLoadEps) continue;
        best = std::min(best, inst.assign_cost[i][j]);
      }
      out.lambda[i] = best;
    }
  }
  out.lean.assign(nf, kInf);
  if (nfree == 0 && keeps.empty()) {
    out.bound = view.base_cost;
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::free_to_choose) out.lean[j] = inst.fixed_cost[j];
    }
    return out;
  }

  std::vector<double> weights(nfree);
  for (int t = 0; t < nfree; ++t) weights[t] = inst.demand[free_cust[t]];
  std::vector<double> profits(nfree);
  std::vector<std::vector<double>> takes(nf);
  std::vector<double> h(nf, kInf);
  std::vector<double> coverage(nfree);
  std::vector<double> grad(nfree);
  std::vector<double> lambda = out.lambda;

  double best_bound = -kInf;
  double theta = 2.0;
  int no_improve = 0;

  for (int iter = 0; iter < max_iters; ++iter) {
    double lambda_sum = 0.0;
    for (int i : free_cust) lambda_sum += lambda[i];

    double contrib = 0.0;
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::closed) {
        h[j] = kInf;
        continue;
      }
      for (int t = 0; t < nfree; ++t) {
        profits[t] = lambda[free_cust[t]] - inst.assign_cost[free_cust[t]][j];
      }
      KnapsackBound kb = knapsack_upper_bound(profits, weights, view.residual[j]);
      takes[j] = std::move(kb.take);
      if (fix.facility[j] == FacilityState::open) {
        h[j] = -kInf;  // always counted open
        contrib -= kb.value;
      } else {
        h[j] = inst.fixed_cost[j] - kb.value;
        contrib += std::min(0.0, h[j]);
      }
    }

    // Repair keep_at_least counts.
    double penalty = 0.0;
    for (const auto& k : keeps) {
      int have = 0;
      std::vector<double> costs;
      for (int r : k.members) {
        if (fix.facility[r] == FacilityState::closed) continue;
        if (fix.facility[r] == FacilityState::open || h[r] <= 0.0) {
          ++have;
        } else {
          costs.push_back(h[r]);
        }
      }
      const int need = k.rhs - have;
      if (need <= 0) continue;
      if (static_cast<int>(costs.size()) < need) {
        out.infeasible = true;
        return out;
      }
      std::nth_element(costs.begin(), costs.begin() + (need - 1), costs.end());
      double pen = 0.0;
      for (int t = 0; t < need; ++t) pen += costs[t];
      penalty = std::max(penalty, pen);
    }

    const double value = view.base_cost + lambda_sum + contrib + penalty;
    if (value > best_bound + 1e-10) {
      best_bound = value;
      out.lambda = lambda;
      for (int j = 0; j < nf; ++j) {
        out.lean[j] =
            (fix.facility[j] == FacilityState::free_to_choose) ? h[j] : kInf;
      }
      no_improve = 0;
    } else if (++no_improve >= 5) {
      theta *= 0.5;
      no_improve = 0;
      if (theta < 1e-3) break;
    }
    if (iter + 1 == max_iters) break;

    // Subgradient of the dualized assignment constraints.
    std::fill(coverage.begin(), coverage.end(), 0.0);
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::closed) continue;
      const bool open_in_relax = fix.facility[j] == FacilityState::open || h[j] <= 0.0;
      if (!open_in_relax) continue;
      for (int t = 0; t < nfree; ++t) coverage[t] += takes[j][t];
    }
    double norm_sq = 0.0;
    for (int t = 0; t < nfree; ++t) {
      grad[t] = 1.0 - coverage[t];
      norm_sq += grad[t] * grad[t];
    }
    if (norm_sq < 1e-18) break;  // relaxation satisfies assignment exactly
    const double ub = (std::isfinite(ub_hint) && ub_hint > best_bound)
                          ? ub_hint
                          : best_bound + std::max(1.0, 0.1 * std::abs(best_bound));
    const double step = theta * (ub - best_bound) / norm_sq;
    for (int t = 0; t < nfree; ++t) lambda[free_cust[t]] += step * grad[t];
  }
  out.bound = best_bound;
  return out;
}

// LP relaxation bound (weak formulation: capacity rows only, no x<=y
// disaggregation). Kept as the alternative bound_method; looser than the
// Lagrangian with integral knapsacks but exact as a relaxation.
RelaxResult lp_relax(const Instance& inst, const PartialFixing& fix,
                     std::span<const KeepConstraint> keeps, const NodeView& view) {
  RelaxResult out;
  const int nf = inst.n_facilities;
  const auto& free_cust = view.free_customers;
  const int nfree = static_cast<int>(free_cust.size());

  std::vector<int> fac_col(nf, -1);  // y column per free facility
  LpProblem lp;
  // x columns first: (free customer t, non-closed facility j)
  std::vector<std::vector<int>> xcol(nfree, std::vector<int>(nf, -1));
  for (int t = 0; t < nfree; ++t) {
    const int i = free_cust[t];
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::closed) continue;
      if (view.residual[j] < inst.demand[i] - kLoadEps) continue;
      xcol[t][j] = lp.n++;
      lp.cost.push_back(inst.assign_cost[i][j]);
      lp.lower.push_back(0.0);
      lp.upper.push_back(1.0);
    }
  }
  for (int j = 0; j < nf; ++j) {
    if (fix.facility[j] != FacilityState::free_to_choose) continue;
    fac_col[j] = lp.n++;
    lp.cost.push_back(inst.fixed_cost[j]);
    lp.lower.push_back(0.0);
    lp.upper.push_back(1.0);
  }
  for (int t = 0; t < nfree; ++t) {
    LpRow row;
    row.sense = RowSense::eq;
    row.rhs = 1.0;
    for (int j = 0; j < nf; ++j) {
      if (xcol[t][j] >= 0) row.coeffs.emplace_back(xcol[t][j], 1.0);
    }
    if (row.coeffs.empty()) {
      out.infeasible = true;
      return out;
    }
    lp.rows.push_back(std::move(row));
  }
  for (int j = 0; j < nf; ++j) {
    if (fix.facility[j] == FacilityState::closed) continue;
    LpRow row;
    row.sense = RowSense::le;
    bool any = false;
    for (int t = 0; t < nfree; ++t) {
      if (xcol[t][j] >= 0) {
        row.coeffs.emplace_back(xcol[t][j], inst.demand[free_cust[t]]);
        any = true;
      }
    }
    if (fac_col[j] >= 0) {
      row.coeffs.emplace_back(fac_col[j], -std::max(view.residual[j], 0.0));
      row.rhs = 0.0;
    } else {
      row.rhs = std::max(view.residual[j], 0.0);
    }
    if (any) lp.rows.push_back(std::move(row));
  }
  for (const auto& k : keeps) {
    LpRow row;
    row.sense = RowSense::ge;
    int already_open = 0;
    for (int r : k.members) {
      if (fix.facility[r] == FacilityState::open) {
        ++already_open;
      } else if (fac_col[r] >= 0) {
        row.coeffs.emplace_back(fac_col[r], 1.0);
      }
    }
    row.rhs = k.rhs - already_open;
    if (row.rhs > 0) lp.rows.push_back(std::move(row));
  }

  out.lean.assign(nf, kInf);
  out.lambda.assign(inst.n_customers, 0.0);
  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::infeasible) {
    out.infeasible = true;
    return out;
  }
  if (sol.status != LpStatus::optimal) {
    // Numerical bail-out: fall back to the cheapest-assignment bound.
    double weak = view.base_cost;
    for (int t = 0; t < nfree; ++t) {
      double best = kInf;
      for (int j = 0; j < nf; ++j) {
        if (xcol[t][j] >= 0) best = std::min(best, inst.assign_cost[free_cust[t]][j]);
      }
      weak += best;
    }
    out.bound = weak;
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::free_to_choose) out.lean[j] = 0.0;
    }
    return out;
  }
  out.bound = view.base_cost + sol.objective;
  for (int j = 0; j < nf; ++j) {
    if (fac_col[j] >= 0) out.lean[j] = 0.5 - sol.x[fac_col[j]];
  }
  return out;
}

RelaxResult relax_bound(const Instance& inst, const PartialFixing& fix,
                        std::span<const KeepConstraint> keeps, const NodeView& view,
                        BoundMethod method, int iters, double ub_hint,
                        const std::vector<double>& warm_lambda) {
  if (method == BoundMethod::lp) return lp_relax(inst, fix, keeps, view);
  return lagrangian_relax(inst, fix, keeps, view, iters, ub_hint, warm_lambda);
}

// Greedy construction + one reassignment pass, as a feasible-solution
// source at every node. Returns solutions for the *original* constrained
// problem (node fixings respected, side constraints repaired at the end).
std::optional<Solution> heuristic_impl(const Instance& inst, const PartialFixing& fix,
                                       std::span<const KeepConstraint> keeps,
                                       const NodeView& view, Rng& rng) {
  const int nf = inst.n_facilities;
  std::vector<bool> open(nf, false);
  std::vector<double> residual = view.residual;
  std::vector<int> assign(inst.n_customers, PartialFixing::kFree);
  for (int j = 0; j < nf; ++j) open[j] = fix.facility[j] == FacilityState::open;
  for (int i = 0; i < inst.n_customers; ++i) {
    if (fix.customer[i] != PartialFixing::kFree) assign[i] = fix.customer[i];
  }

  std::vector<int> order = view.free_customers;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.demand[a] != inst.demand[b]) return inst.demand[a] > inst.demand[b];
    return a < b;
  });

  std::vector<int> tied;
  for (int i : order) {
    double best = kInf;
    tied.clear();
    for (int j = 0; j < nf; ++j) {
      if (fix.facility[j] == FacilityState::closed) continue;
      if (residual[j] < inst.demand[i] - kLoadEps) continue;
      const double cost = inst.assign_cost[i][j] + (open[j] ? 0.0 : inst.fixed_cost[j]);
      if (cost < best - 1e-12) {
        best = cost;
        tied.assign(1, j);
      } else if (cost <= best + 1e-12) {
        tied.push_back(j);
      }
    }
    if (tied.empty()) return std::nullopt;
    const int j = tied.size() == 1
                      ? tied[0]
                      : tied[rng.uniform_int(0, static_cast<std::int64_t>(tied.size()) - 1)];
    assign[i] = j;
    open[j] = true;
    residual[j] -= inst.demand[i];
  }

  // Open the cheapest free members until every keep constraint holds.
  for (const auto& k : keeps) {
    int have = 0;
    std::vector<int> candidates;
    for (int r : k.members) {
      if (open[r]) {
        ++have;
      } else if (fix.facility[r] != FacilityState::closed) {
        candidates.push_back(r);
      }
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      if (inst.fixed_cost[a] != inst.fixed_cost[b]) {
        return inst.fixed_cost[a] < inst.fixed_cost[b];
      }
      return a < b;
    });
    for (int t = 0; t < k.rhs - have; ++t) {
      if (t >= static_cast<int>(candidates.size())) return std::nullopt;
      open[candidates[t]] = true;
    }
  }

  // One reassignment pass.
  std::vector<int> load_count(nf, 0);
  for (int i = 0; i < inst.n_customers; ++i) {
    if (assign[i] >= 0) ++load_count[assign[i]];
  }
  auto may_close = [&](int j) {
    if (fix.facility[j] != FacilityState::free_to_choose) return false;
    for (const auto& k : keeps) {
      if (!k.is_member[j]) continue;
      int have = 0;
      for (int r : k.members) have += open[r] ? 1 : 0;
      if (have - 1 < k.rhs) return false;
    }
    return true;
  };
  for (int i : view.free_customers) {
    const int j0 = assign[i];
    const bool closes_j0 = load_count[j0] == 1 && may_close(j0);
    double best_delta = -1e-9;
    int best_j = -1;
    for (int j = 0; j < nf; ++j) {
      if (j == j0 || fix.facility[j] == FacilityState::closed) continue;
      if (residual[j] < inst.demand[i] - kLoadEps) continue;
      double delta = inst.assign_cost[i][j] - inst.assign_cost[i][j0];
      if (!open[j]) delta += inst.fixed_cost[j];
      if (closes_j0) delta -= inst.fixed_cost[j0];
      if (delta < best_delta) {
        best_delta = delta;
        best_j = j;
      }
    }
    if (best_j >= 0) {
      residual[j0] += inst.demand[i];
      residual[best_j] -= inst.demand[i];
      --load_count[j0];
      ++load_count[best_j];
      assign[i] = best_j;
      if (!open[best_j]) open[best_j] = true;
      if (load_count[j0] == 0 && may_close(j0)) open[j0] = false;
    }
  }
  // Shed unused facilities where the constraints allow it.
  for (int j = 0; j < nf; ++j) {
    if (open[j] && load_count[j] == 0 && may_close(j)) open[j] = false;
  }

  Solution sol;
  sol.open = open;
  sol.assign = assign;
  sol.objective = evaluate(inst, sol);
  if (!check_feasible(inst, sol).pass()) return std::nullopt;
  return sol;
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

struct Node {
  PartialFixing fix;
  std::vector<double> lambda;
  double bound = -kInf;
  long long id = 0;
  long long parent = -1;
  int depth = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const SolveConfig& config,
                 std::span<const SideConstraint> constraints)
      : inst_(inst),
        config_(config),
        constraints_(constraints.begin(), constraints.end()),
        rng_(config.rng_seed) {
    auto norm = normalize_constraints(inst, constraints);
    keeps_ = std::move(norm.keeps);
    root_fix_ = PartialFixing::none(inst);
    for (int j : norm.forced_open) root_fix_.facility[j] = FacilityState::open;
  }

  SolveResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SolveResult res;
    Node root;
    root.fix = root_fix_;
    root.id = next_id_++;
    push_node(std::move(root), /*prefer_dive=*/true);

    bool limit_hit = false;
    while (!dive_.empty() || !pq_.empty()) {
      if (elapsed() >= config_.time_limit) {
        limit_hit = true;
        break;
      }
      if (config_.node_limit && res.nodes >= *config_.node_limit) {
        limit_hit = true;
        break;
      }
      // Early stop on proven gap.
      const double lb = open_lower_bound();
      if (incumbent_ &&
          incumbent_->objective - lb <=
              config_.gap_tolerance * std::max(std::abs(incumbent_->objective), 1e-10)) {
        res.dual_bound = lb;
        finish(res, SolveStatus::optimal, elapsed());
        return res;
      }

      Node node = pop_node();
      if (incumbent_ && node.bound >= incumbent_->objective - kPruneEps) continue;
      ++res.nodes;

      const NodeView view = make_view(inst_, node.fix, keeps_);
      if (view.infeasible) continue;

      const int iters = node.depth == 0 ? kRootSubgradientIters : kNodeSubgradientIters;
      const double ub_hint = incumbent_ ? incumbent_->objective : kInf;
      RelaxResult relax = relax_bound(inst_, node.fix, keeps_, view, config_.bound_method,
                                      iters, ub_hint, node.lambda);
      if (relax.infeasible) continue;
      node.bound = std::max(node.bound, relax.bound);
      if (config_.on_node) {
        config_.on_node({node.id, node.parent, node.depth, node.bound});
      }
      if (incumbent_ && node.bound >= incumbent_->objective - kPruneEps) continue;

      if (auto sol = heuristic_impl(inst_, node.fix, keeps_, view, rng_)) {
        try_incumbent(*sol, node.id, elapsed(), res);
        if (incumbent_ && node.bound >= incumbent_->objective - kPruneEps) continue;
      }

      if (view.free_customers.empty()) {
        // All customers pinned; facilities are fully fixed on any such path,
        // so the node value is just its base cost.
        Solution sol;
        sol.open.assign(inst_.n_facilities, false);
        for (int j = 0; j < inst_.n_facilities; ++j) {
          sol.open[j] = node.fix.facility[j] == FacilityState::open;
        }
        sol.assign = node.fix.customer;
        sol.objective = evaluate(inst_, sol);
        if (check_feasible(inst_, sol).pass() && satisfies(sol.open, constraints_)) {
          try_incumbent(sol, node.id, elapsed(), res);
        }
        continue;
      }

      branch(node, relax, view);
    }

    res.dual_bound = incumbent_ && dive_.empty() && pq_.empty()
                         ? incumbent_->objective
                         : open_lower_bound();
    if (limit_hit) {
      finish(res,
             incumbent_ ? SolveStatus::feasible_time_limit
                        : SolveStatus::no_solution_time_limit,
             elapsed());
    } else if (incumbent_) {
      res.dual_bound = incumbent_->objective;
      finish(res, SolveStatus::optimal, elapsed());
    } else {
      res.dual_bound = kInf;
      finish(res, SolveStatus::infeasible, elapsed());
    }
    return res;
  }

 private:
  struct PqCmp {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
      return a.id > b.id;
    }
  };

  void push_node(Node n, bool prefer_dive) {
    if (prefer_dive) {
      dive_.push_back(std::move(n));
    } else {
      pq_.push(std::move(n));
    }
  }

  Node pop_node() {
    if (!dive_.empty()) {
      Node n = std::move(dive_.back());
      dive_.pop_back();
      return n;
    }
    Node n = pq_.top();
    pq_.pop();
    return n;
  }

  double open_lower_bound() const {
    double lb = kInf;
    if (!pq_.empty()) lb = pq_.top().bound;
    for (const auto& n : dive_) lb = std::min(lb, n.bound);
    if (pq_.empty() && dive_.empty()) {
      lb = incumbent_ ? incumbent_->objective : kInf;
    }
    return lb;
  }

  void try_incumbent(const Solution& sol, long long node_id, double now, SolveResult& res) {
    if (!satisfies(sol.open, constraints_)) return;
    if (incumbent_ && sol.objective >= incumbent_->objective - 1e-12) return;
    incumbent_ = sol;
    res.incumbent_trace.emplace_back(now, sol.objective);
    if (config_.on_incumbent) config_.on_incumbent(node_id, sol.objective);
  }

  void branch(const Node& node, const RelaxResult& relax, const NodeView& view) {
    // Facility phase first: most ambiguous open/closed status, ties to the
    // larger capacity, then the lower index.
    int fac = -1;
    for (int j = 0; j < inst_.n_facilities; ++j) {
      if (node.fix.facility[j] != FacilityState::free_to_choose) continue;
      if (fac < 0) {
        fac = j;
        continue;
      }
      const double aj = std::isfinite(relax.lean[j]) ? std::abs(relax.lean[j]) : kInf;
      const double af = std::isfinite(relax.lean[fac]) ? std::abs(relax.lean[fac]) : kInf;
      if (aj < af || (aj == af && inst_.capacity[j] > inst_.capacity[fac])) fac = j;
    }
    if (fac >= 0) {
      // Preferred child (the relaxation's lean) is created first and dived.
      const bool open_first = relax.lean[fac] <= 0.0;
      Node preferred = make_child(node, relax);
      preferred.fix.facility[fac] = open_first ? FacilityState::open : FacilityState::closed;
      Node other = make_child(node, relax);
      other.fix.facility[fac] = open_first ? FacilityState::closed : FacilityState::open;
      push_node(std::move(other), false);
      push_node(std::move(preferred), true);
      return;
    }

    // Assignment phase: largest-demand free customer over its feasible
    // facilities in increasing cost order.
    int cust = -1;
    for (int i : view.free_customers) {
      if (cust < 0 || inst_.demand[i] > inst_.demand[cust]) cust = i;
    }
    std::vector<int> targets;
    for (int j = 0; j < inst_.n_facilities; ++j) {
      if (node.fix.facility[j] != FacilityState::open) continue;
      if (view.residual[j] < inst_.demand[cust] - kLoadEps) continue;
      targets.push_back(j);
    }
    std::sort(targets.begin(), targets.end(), [&](int a, int b) {
      if (inst_.assign_cost[cust][a] != inst_.assign_cost[cust][b]) {
        return inst_.assign_cost[cust][a] < inst_.assign_cost[cust][b];
      }
      return a < b;
    });
    for (std::size_t t = 0; t < targets.size(); ++t) {
      Node child = make_child(node, relax);
      child.fix.customer[cust] = targets[t];
      push_node(std::move(child), /*prefer_dive=*/t == 0);
    }
  }

  Node make_child(const Node& node, const RelaxResult& relax) {
    Node child;
    child.fix = node.fix;
    child.lambda = relax.lambda;
    child.bound = node.bound;
    child.id = next_id_++;
    child.parent = node.id;
    child.depth = node.depth + 1;
    return child;
  }

  void finish(SolveResult& res, SolveStatus status, double elapsed) {
    res.elapsed = elapsed;
    res.status = status;
    if (incumbent_) {
      // Returned incumbents must be sound: feasible and constraint-obeying.
      if (!check_feasible(inst_, *incumbent_).pass() ||
          !satisfies(incumbent_->open, constraints_)) {
        throw std::logic_error("internal error: incumbent fails verification");
      }
      res.incumbent = incumbent_;
      res.objective = incumbent_->objective;
      res.gap = (incumbent_->objective - res.dual_bound) /
                std::max(std::abs(incumbent_->objective), 1e-10);
      if (res.gap < 0.0) res.gap = 0.0;
    } else {
      res.gap = kInf;
    }
    if (status == SolveStatus::infeasible) res.dual_bound = kInf;
  }

  const Instance& inst_;
  const SolveConfig& config_;
  std::vector<SideConstraint> constraints_;
  std::vector<KeepConstraint> keeps_;
  PartialFixing root_fix_;
  Rng rng_;
  std::optional<Solution> incumbent_;
  std::priority_queue<Node, std::vector<Node>, PqCmp> pq_;
  std::vector<Node> dive_;
  long long next_id_ = 0;
};

}  // namespace

SolveResult solve(const Instance& inst, const SolveConfig& config,
                  std::span<const SideConstraint> constraints) {
  inst.validate();
  config.validate();
  BranchAndBound engine(inst, config, constraints);
  return engine.run();
}

double lower_bound(const Instance& inst, const PartialFixing& fixing,
                   std::span<const SideConstraint> constraints, BoundMethod method) {
  auto norm = normalize_constraints(inst, constraints);
  PartialFixing fix = fixing;
  for (int j : norm.forced_open) {
    if (fix.facility[j] == FacilityState::closed) return kInf;
    fix.facility[j] = FacilityState::open;
  }
  const NodeView view = make_view(inst, fix, norm.keeps);
  if (view.infeasible) return kInf;
  RelaxResult relax = relax_bound(inst, fix, norm.keeps, view, method,
                                  kRootSubgradientIters, kInf, {});
  if (relax.infeasible) return kInf;
  return relax.bound;
}

double lagrangian_value(const Instance& inst, const PartialFixing& fixing,
                        std::span<const SideConstraint> constraints,
                        std::span<const double> lambda) {
  auto norm = normalize_constraints(inst, constraints);
  PartialFixing fix = fixing;
  for (int j : norm.forced_open) {
    if (fix.facility[j] == FacilityState::closed) return kInf;
    fix.facility[j] = FacilityState::open;
  }
  const NodeView view = make_view(inst, fix, norm.keeps);
  if (view.infeasible) return kInf;
  std::vector<double> warm(lambda.begin(), lambda.end());
  warm.resize(inst.n_customers, 0.0);
  RelaxResult relax =
      lagrangian_relax(inst, fix, norm.keeps, view, /*max_iters=*/1, kInf, warm);
  if (relax.infeasible) return kInf;
  return relax.bound;
}

std::optional<Solution> primal_heuristic(const Instance& inst, const PartialFixing& fixing,
                                         std::span<const SideConstraint> constraints,
                                         Rng& rng) {
  auto norm = normalize_constraints(inst, constraints);
  PartialFixing fix = fixing;
  for (int j : norm.forced_open) {
    if (fix.facility[j] == FacilityState::closed) return std::nullopt;
    fix.facility[j] = FacilityState::open;
  }
  const NodeView view = make_view(inst, fix, norm.keeps);
  if (view.infeasible) return std::nullopt;
  auto sol = heuristic_impl(inst, fix, norm.keeps, view, rng);
  if (sol && !satisfies(sol->open, constraints)) return std::nullopt;
  return sol;
}

SolveResult brute_force_oracle(const Instance& inst,
                               std::span<const SideConstraint> constraints) {
  inst.validate();
  if (inst.n_facilities > 6 || inst.n_customers > 9) {
    throw std::invalid_argument("brute_force_oracle: size limit is 6 facilities x 9 customers");
  }
  for (const auto& c : constraints) c.validate(inst.n_facilities);
  const auto t0 = std::chrono::steady_clock::now();

  const int nf = inst.n_facilities;
  const int nc = inst.n_customers;
  const int n_masks = 1 << nf;

  int forced_mask = 0;
  for (const auto& c : constraints) {
    if (c.kind == SideConstraint::Kind::fix_open) {
      for (int r : c.ref_open) forced_mask |= 1 << r;
    }
  }
  // Cheapest valid open-superset of every mask, by subset-sum DP.
  std::vector<double> gmin(n_masks, kInf);
  std::vector<int> gmin_arg(n_masks, -1);
  for (int mask = 0; mask < n_masks; ++mask) {
    if ((mask & forced_mask) != forced_mask) continue;
    bool ok = true;
    for (const auto& c : constraints) {
      if (c.kind != SideConstraint::Kind::keep_at_least) continue;
      int count = 0;
      for (int r : c.ref_open) count += (mask >> r) & 1;
      if (count < c.rhs()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double fx = 0.0;
    for (int j = 0; j < nf; ++j) {
      if ((mask >> j) & 1) fx += inst.fixed_cost[j];
    }
    gmin[mask] = fx;
    gmin_arg[mask] = mask;
  }
  for (int b = 0; b < nf; ++b) {
    for (int mask = n_masks - 1; mask >= 0; --mask) {
      if ((mask >> b) & 1) continue;
      const int sup = mask | (1 << b);
      if (gmin[sup] < gmin[mask]) {
        gmin[mask] = gmin[sup];
        gmin_arg[mask] = gmin_arg[sup];
      }
    }
  }

  SolveResult res;
  if (!std::isfinite(gmin[0])) {
    res.status = SolveStatus::infeasible;
    res.dual_bound = kInf;
    res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

  std::vector<double> suffix_min(nc + 1, 0.0);
  for (int i = nc - 1; i >= 0; --i) {
    double m = kInf;
    for (int j = 0; j < nf; ++j) m = std::min(m, inst.assign_cost[i][j]);
    suffix_min[i] = suffix_min[i + 1] + m;
  }

  double best = kInf;
  int best_mask = 0;
  std::vector<int> assign(nc, 0), best_assign;
  std::vector<double> load(nf, 0.0);
  long long leaves = 0;

  auto dfs = [&](auto&& self, int i, int used_mask, double cost) -> void {
    if (cost + suffix_min[i] + gmin[used_mask] >= best) return;
    if (i == nc) {
      ++leaves;
      const double total = cost + gmin[used_mask];
      if (total < best) {
        best = total;
        best_mask = gmin_arg[used_mask];
        best_assign = assign;
      }
      return;
    }
    for (int j = 0; j < nf; ++j) {
      if (load[j] + inst.demand[i] > inst.capacity[j] + kLoadEps) continue;
      load[j] += inst.demand[i];
      assign[i] = j;
      self(self, i + 1, used_mask | (1 << j), cost + inst.assign_cost[i][j]);
      load[j] -= inst.demand[i];
    }
  };
  dfs(dfs, 0, 0, 0.0);

  res.nodes = leaves;
  res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!std::isfinite(best)) {
    res.status = SolveStatus::infeasible;
    res.dual_bound = kInf;
    return res;
  }
  Solution sol;
  sol.open.assign(nf, false);
  for (int j = 0; j < nf; ++j) sol.open[j] = (best_mask >> j) & 1;
  sol.assign = best_assign;
  sol.objective = evaluate(inst, sol);
  res.status = SolveStatus::optimal;
  res.objective = sol.objective;
  res.dual_bound = sol.objective;
  res.incumbent = std::move(sol);
  res.gap = 0.0;
  return res;
}

}  // namespace refloc
