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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "refloc/instance.hpp"
#include "refloc/rng.hpp"
#include "refloc/solver.hpp"
#include "support/gen.hpp"

using namespace refloc;

namespace {

Instance two_by_two() {
  Instance inst;
  inst.n_facilities = 2;
  inst.n_customers = 2;
  inst.capacity = {10, 10};
  inst.fixed_cost = {5, 5};
  inst.demand = {3, 4};
  inst.assign_cost = {{1, 2}, {2, 1}};
  inst.validate();
  return inst;
}

SolveConfig exact_config() {
  SolveConfig cfg;
  cfg.gap_tolerance = 0.0;
  return cfg;
}

void check_same_optimum(const SolveResult& got, const SolveResult& want) {
  REQUIRE(got.status == want.status);
  if (want.status == SolveStatus::optimal) {
    REQUIRE(got.objective.has_value());
    CHECK(std::abs(*got.objective - *want.objective) <= 1e-6);
  }
}

}  // namespace

TEST_CASE("2x2 instance solves to the oracle optimum") {
  const Instance inst = two_by_two();
  const SolveResult oracle = brute_force_oracle(inst);
  REQUIRE(oracle.status == SolveStatus::optimal);
  CHECK(*oracle.objective == doctest::Approx(8.0));

  const SolveResult got = solve(inst, exact_config());
  check_same_optimum(got, oracle);
  CHECK(got.gap <= 1e-9);
  CHECK(got.dual_bound <= *got.objective + 1e-9);
  CHECK(check_feasible(inst, *got.incumbent).pass());
}

TEST_CASE("fix_open forces both fixed costs") {
  const Instance inst = two_by_two();
  const auto fix = SideConstraint::fix_open({0, 1});
  const std::vector<SideConstraint> cons{fix};
  const SolveResult got = solve(inst, exact_config(), cons);
  const SolveResult oracle = brute_force_oracle(inst, cons);
  check_same_optimum(got, oracle);
  CHECK(*got.objective == doctest::Approx(12.0));  // 1 + 1 + 5 + 5
  CHECK(*got.objective >= 8.0);                    // never below the free optimum
  CHECK((*got.incumbent).open[0]);
  CHECK((*got.incumbent).open[1]);
}

TEST_CASE("capacity shortfall reports infeasible") {
  Instance inst = two_by_two();
  inst.capacity = {3, 3};  // total 6 < demand 7
  const SolveResult got = solve(inst, exact_config());
  CHECK(got.status == SolveStatus::infeasible);
  CHECK(!got.incumbent.has_value());
  CHECK(brute_force_oracle(inst).status == SolveStatus::infeasible);
}

TEST_CASE("keep_at_least with gamma 0 is vacuous, identical to unconstrained") {
  const Instance inst = two_by_two();
  const std::vector<SideConstraint> cons{SideConstraint::keep_at_least({0, 1}, 0.0)};
  const SolveResult a = solve(inst, exact_config());
  const SolveResult b = solve(inst, exact_config(), cons);
  CHECK(*a.objective == *b.objective);
  CHECK(a.nodes == b.nodes);  // constraint is dropped, search is identical
}

TEST_CASE("keep_at_least right-hand side rounds up") {
  // gamma * |R| = 0.7 * 6 = 4.2 -> at least 5 reference facilities.
  auto c = SideConstraint::keep_at_least({0, 1, 2, 3, 4, 5}, 0.7);
  CHECK(c.rhs() == 5);
  CHECK(SideConstraint::keep_at_least({0, 1, 2}, 1.0).rhs() == 3);
  CHECK(SideConstraint::keep_at_least({0, 1, 2}, 0.0).rhs() == 0);
  CHECK(SideConstraint::keep_at_least({0, 1, 2}, 1.0 / 3.0).rhs() == 1);
}

TEST_CASE("keep_at_least gamma=1 is inactive when the optimum already opens R") {
  // Cheap fixed costs force both facilities open in the optimum.
  Instance inst = two_by_two();
  inst.fixed_cost = {0.1, 0.1};
  const SolveResult plain = solve(inst, exact_config());
  REQUIRE(plain.status == SolveStatus::optimal);
  REQUIRE(plain.incumbent->open[0]);
  REQUIRE(plain.incumbent->open[1]);
  const std::vector<SideConstraint> cons{SideConstraint::keep_at_least({0, 1}, 1.0)};
  const SolveResult constrained = solve(inst, exact_config(), cons);
  CHECK(*constrained.objective == doctest::Approx(*plain.objective));
}

TEST_CASE("oracle handles the 1x1 base case") {
  Instance inst;
  inst.n_facilities = 1;
  inst.n_customers = 1;
  inst.capacity = {5};
  inst.fixed_cost = {7};
  inst.demand = {3};
  inst.assign_cost = {{2}};
  const SolveResult res = brute_force_oracle(inst);
  REQUIRE(res.status == SolveStatus::optimal);
  CHECK(*res.objective == doctest::Approx(9.0));
  Rng rng(1);
  CHECK_THROWS_AS(brute_force_oracle(testsupport::random_instance(rng, 7, 3)),
                  std::invalid_argument);
}

TEST_CASE("config validation rejects nonsense before solving") {
  const Instance inst = two_by_two();
  SolveConfig cfg;
  cfg.time_limit = 0.0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.gap_tolerance = -1.0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.node_limit = 0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
}

TEST_CASE("lagrangian value at zero multipliers has the hand-checkable form") {
  const Instance inst = two_by_two();
  const auto fixing = PartialFixing::none(inst);
  const std::vector<double> zero(2, 0.0);
  // All profits lambda_i - c_ij <= 0, every knapsack is empty, free
  // facilities contribute min(0, f_j) = 0.
  CHECK(lagrangian_value(inst, fixing, {}, zero) == doctest::Approx(0.0));

  // lambda = (2, 2): knapsack profits (1,0) and (0,1), both rho = 1,
  // h_j = 5 - 1 = 4 > 0 so facilities stay closed: L = 4.
  const std::vector<double> two(2, 2.0);
  CHECK(lagrangian_value(inst, fixing, {}, two) == doctest::Approx(4.0));

  // Fixing both facilities open pays their fixed costs in the base.
  PartialFixing open_fix = fixing;
  open_fix.facility[0] = FacilityState::open;
  open_fix.facility[1] = FacilityState::open;
  CHECK(lagrangian_value(inst, open_fix, {}, zero) == doctest::Approx(10.0));
}

TEST_CASE("root lower bound never exceeds the oracle optimum") {
  Rng rng(101);
  int tested = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int nf = static_cast<int>(rng.uniform_int(2, 5));
    const int nc = static_cast<int>(rng.uniform_int(2, 8));
    const Instance inst = testsupport::random_instance(rng, nf, nc, 1.0, 2.5);
    const SolveResult oracle = brute_force_oracle(inst);
    if (oracle.status != SolveStatus::optimal) continue;
    ++tested;
    const auto fixing = PartialFixing::none(inst);
    for (auto method : {BoundMethod::lagrangian, BoundMethod::lp}) {
      const double lb = lower_bound(inst, fixing, {}, method);
      CHECK(lb <= *oracle.objective + 1e-6);
    }
  }
  CHECK(tested > 50);
}

TEST_CASE("lower bound respects arbitrary fixings") {
  Rng rng(202);
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = testsupport::random_instance(rng, 3, 5, 1.0, 2.5);
    PartialFixing fixing = PartialFixing::none(inst);
    // Random facility fixings; customers stay free so consistency is easy.
    for (int j = 0; j < 3; ++j) {
      const auto r = rng.uniform01();
      fixing.facility[j] = r < 0.2   ? FacilityState::closed
                           : r < 0.5 ? FacilityState::open
                                     : FacilityState::free_to_choose;
    }
    // Oracle optimum restricted to the fixing: enumerate and filter.
    const SolveResult plain = brute_force_oracle(inst);
    double restricted = std::numeric_limits<double>::infinity();
    if (plain.status == SolveStatus::optimal) {
      // Recompute by forcing closures/openings through constraints on a
      // modified instance: closed facility -> capacity 0 and huge costs.
      Instance mod = inst;
      std::vector<int> forced;
      for (int j = 0; j < 3; ++j) {
        if (fixing.facility[j] == FacilityState::closed) {
          mod.capacity[j] = 0.0;
          for (int i = 0; i < 5; ++i) mod.assign_cost[i][j] = 1e6;
        }
        if (fixing.facility[j] == FacilityState::open) forced.push_back(j);
      }
      std::vector<SideConstraint> cons;
      if (!forced.empty()) cons.push_back(SideConstraint::fix_open(forced));
      const SolveResult r = brute_force_oracle(mod, cons);
      if (r.status == SolveStatus::optimal && *r.objective < 1e5) restricted = *r.objective;
    }
    const double lb = lower_bound(inst, fixing, {}, BoundMethod::lagrangian);
    if (std::isfinite(restricted)) {
      CHECK(lb <= restricted + 1e-6);
    }
  }
}

TEST_CASE("primal heuristic: trivial success and allowed failure") {
  SUBCASE("one big facility succeeds") {
    Instance inst;
    inst.n_facilities = 1;
    inst.n_customers = 3;
    inst.capacity = {100};
    inst.fixed_cost = {10};
    inst.demand = {5, 6, 7};
    inst.assign_cost = {{1}, {1}, {1}};
    Rng rng(1);
    const auto sol = primal_heuristic(inst, PartialFixing::none(inst), {}, rng);
    REQUIRE(sol.has_value());
    CHECK(check_feasible(inst, *sol).pass());
  }
  SUBCASE("tight packing may fail, the solver still finds the optimum") {
    Instance inst;
    inst.n_facilities = 2;
    inst.n_customers = 3;
    inst.capacity = {7, 5};
    inst.fixed_cost = {1, 1};
    inst.demand = {5, 4, 3};
    inst.assign_cost = {{1, 2}, {1, 2}, {1, 2}};
    Rng rng(1);
    const auto sol = primal_heuristic(inst, PartialFixing::none(inst), {}, rng);
    CHECK(!sol.has_value());  // greedy dead-ends: 5 -> facility 0, 4 -> 1, 3 stuck
    const SolveResult got = solve(inst, exact_config());
    const SolveResult oracle = brute_force_oracle(inst);
    check_same_optimum(got, oracle);
  }
}

TEST_CASE("heuristic solutions never beat the oracle") {
  Rng rng(303);
  for (int rep = 0; rep < 80; ++rep) {
    const Instance inst = testsupport::random_instance(rng, 4, 6, 1.0, 2.5);
    const SolveResult oracle = brute_force_oracle(inst);
    Rng hrng(rep);
    const auto sol = primal_heuristic(inst, PartialFixing::none(inst), {}, hrng);
    if (!sol) continue;
    REQUIRE(oracle.status == SolveStatus::optimal);
    CHECK(sol->objective >= *oracle.objective - 1e-9);
  }
}

TEST_CASE("randomized oracle equality, with and without side constraints") {
  Rng rng(404);
  int optimal_cases = 0, infeasible_cases = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const int nf = static_cast<int>(rng.uniform_int(1, 5));
    const int nc = static_cast<int>(rng.uniform_int(1, 8));
    const Instance inst = testsupport::random_instance(rng, nf, nc, 0.85, 2.2);
    const auto cons = testsupport::random_constraints(rng, nf);
    const SolveResult oracle = brute_force_oracle(inst, cons);
    for (auto method : {BoundMethod::lagrangian, BoundMethod::lp}) {
      SolveConfig cfg = exact_config();
      cfg.bound_method = method;
      cfg.rng_seed = rep;
      const SolveResult got = solve(inst, cfg, cons);
      check_same_optimum(got, oracle);
      if (got.status == SolveStatus::optimal) {
        CHECK(check_feasible(inst, *got.incumbent).pass());
        CHECK(satisfies(got.incumbent->open, cons));
        CHECK(testsupport::independent_feasible(inst, *got.incumbent));
      }
    }
    if (oracle.status == SolveStatus::optimal) ++optimal_cases;
    if (oracle.status == SolveStatus::infeasible) ++infeasible_cases;
  }
  CHECK(optimal_cases > 60);
  CHECK(infeasible_cases > 3);
}

TEST_CASE("constraints only shrink the feasible set") {
  Rng rng(505);
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = testsupport::random_instance(rng, 4, 6, 1.0, 2.2);
    const auto cons = testsupport::random_constraints(rng, 4);
    const SolveResult plain = solve(inst, exact_config());
    SolveConfig cfg = exact_config();
    const SolveResult constrained = solve(inst, cfg, cons);
    if (plain.status == SolveStatus::optimal) {
      // Forcing facilities open never destroys feasibility.
      REQUIRE(constrained.status == SolveStatus::optimal);
      CHECK(*constrained.objective >= *plain.objective - 1e-9);
    }
  }
}

TEST_CASE("determinism: identical inputs give identical results") {
  Rng rng(606);
  const Instance inst = testsupport::random_instance(rng, 5, 8, 1.2, 2.0);
  const auto cons = testsupport::random_constraints(rng, 5);
  SolveConfig cfg = exact_config();
  cfg.rng_seed = 99;
  const SolveResult a = solve(inst, cfg, cons);
  const SolveResult b = solve(inst, cfg, cons);
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.dual_bound == b.dual_bound);
  CHECK(a.nodes == b.nodes);
  CHECK(a.gap == b.gap);
  REQUIRE(a.incumbent_trace.size() == b.incumbent_trace.size());
  for (std::size_t k = 0; k < a.incumbent_trace.size(); ++k) {
    CHECK(a.incumbent_trace[k].second == b.incumbent_trace[k].second);
  }
  if (a.incumbent) {
    CHECK(a.incumbent->assign == b.incumbent->assign);
    CHECK(a.incumbent->open == b.incumbent->open);
  }
}

TEST_CASE("incumbent trace objectives are strictly decreasing") {
  Rng rng(707);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance inst = testsupport::random_instance(rng, 5, 8, 1.2, 2.2);
    const SolveResult res = solve(inst, exact_config());
    for (std::size_t k = 1; k < res.incumbent_trace.size(); ++k) {
      CHECK(res.incumbent_trace[k].second < res.incumbent_trace[k - 1].second);
    }
  }
}

TEST_CASE("node bounds stay below the objective of incumbents found beneath them") {
  Rng rng(808);
  for (int rep = 0; rep < 15; ++rep) {
    const Instance inst = testsupport::random_instance(rng, 5, 7, 1.2, 2.2);
    std::map<long long, std::pair<long long, double>> nodes;  // id -> (parent, bound)
    std::vector<std::pair<long long, double>> incumbents;
    SolveConfig cfg = exact_config();
    cfg.on_node = [&nodes](const NodeAudit& a) {
      nodes[a.id] = {a.parent, a.bound};
    };
    cfg.on_incumbent = [&incumbents](long long id, double obj) {
      incumbents.emplace_back(id, obj);
    };
    const SolveResult res = solve(inst, cfg);
    if (res.status != SolveStatus::optimal) continue;
    for (const auto& [id, obj] : incumbents) {
      long long cur = id;
      while (cur >= 0) {
        const auto it = nodes.find(cur);
        if (it == nodes.end()) break;
        CHECK(it->second.second <= obj + 1e-6);
        cur = it->second.first;
      }
    }
  }
}

TEST_CASE("node limit yields a time-limit style status") {
  Rng rng(909);
  const Instance inst = testsupport::random_instance(rng, 5, 8, 1.2, 2.0);
  SolveConfig cfg = exact_config();
  cfg.node_limit = 1;
  const SolveResult res = solve(inst, cfg);
  CHECK((res.status == SolveStatus::feasible_time_limit ||
         res.status == SolveStatus::no_solution_time_limit));
  CHECK(res.nodes <= 1);
  if (res.incumbent) {
    CHECK(res.dual_bound <= *res.objective + 1e-9);
  }
}
