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

#include "refloc/perturb.hpp"
#include "refloc/solver.hpp"
#include "support/gen.hpp"
#include "support/stats.hpp"

using namespace refloc;

namespace {

Instance three_equal_5000() {
  Instance inst;
  inst.n_facilities = 3;
  inst.n_customers = 2;
  inst.capacity = {5000, 5000, 5000};
  inst.fixed_cost = {10, 20, 30};
  inst.demand = {100, 200};
  inst.assign_cost = {{1, 2, 3}, {3, 2, 1}};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("apply shifts capacities and nothing else") {
  const Instance ref = three_equal_5000();
  Disruption d;
  d.delta_capacity = {0, 88, -696};
  const Instance got = apply(ref, d);
  CHECK(got.capacity == std::vector<double>{5000, 5088, 4304});
  CHECK(got.fixed_cost == ref.fixed_cost);
  CHECK(got.demand == ref.demand);
  CHECK(got.assign_cost == ref.assign_cost);
  // The reference itself is untouched.
  CHECK(ref.capacity == std::vector<double>{5000, 5000, 5000});
}

TEST_CASE("apply with a zero disruption is the identity") {
  const Instance ref = three_equal_5000();
  Disruption d;
  d.delta_capacity = {0, 0, 0};
  CHECK(apply(ref, d) == ref);
}

TEST_CASE("apply rejects negative capacities and bad lengths") {
  const Instance ref = three_equal_5000();
  Disruption d;
  d.delta_capacity = {0, 0, -5001};
  CHECK_THROWS_AS(apply(ref, d), std::invalid_argument);
  d.delta_capacity = {0, 0};
  CHECK_THROWS_AS(apply(ref, d), std::invalid_argument);
}

TEST_CASE("a disruption may make the instance infeasible; solving reports it") {
  Instance ref = three_equal_5000();
  ref.capacity = {150, 100, 80};
  Disruption d;
  d.delta_capacity = {-100, -60, -50};  // total 120 < demand 300
  const Instance got = apply(ref, d);
  got.validate();
  SolveConfig cfg;
  cfg.gap_tolerance = 0.0;
  CHECK(solve(got, cfg).status == SolveStatus::infeasible);
}

TEST_CASE("zero-fraction config yields the all-zero disruption") {
  const Instance ref = three_equal_5000();
  PerturbConfig cfg;
  cfg.frac_min = 0.0;
  cfg.frac_max = 0.0;
  Rng rng(5);
  const Disruption d = sample_disruption(ref, cfg, rng);
  CHECK(d.delta_capacity == std::vector<double>{0, 0, 0});
}

TEST_CASE("same stream, same disruption") {
  const Instance ref = three_equal_5000();
  PerturbConfig cfg;
  Rng a = Rng::stream(42, 7);
  Rng b = Rng::stream(42, 7);
  const Disruption da = sample_disruption(ref, cfg, a);
  const Disruption db = sample_disruption(ref, cfg, b);
  CHECK(da == db);
  CHECK(da.seed == db.seed);

  Rng c = Rng::stream(42, 8);
  const Disruption dc = sample_disruption(ref, cfg, c);
  CHECK(da.delta_capacity != dc.delta_capacity);
}

TEST_CASE("perturbed-count histogram is uniform and the floor holds") {
  Rng gen(17);
  Instance ref = testsupport::random_instance(gen, 20, 5);
  for (auto& s : ref.capacity) s = 1000.0 + s;  // comfortable floor margin
  PerturbConfig cfg;  // 5%..50% of 20 -> counts in {1,...,10}

  constexpr int kDraws = 10000;
  std::vector<long long> hist(10, 0);
  double min_capacity = 1e18;
  for (int k = 0; k < kDraws; ++k) {
    Rng rng = Rng::stream(99, static_cast<std::uint64_t>(k));
    const Disruption d = sample_disruption(ref, cfg, rng);
    int m = 0;
    for (int j = 0; j < 20; ++j) {
      if (d.delta_capacity[j] != 0.0) {
        ++m;
        min_capacity = std::min(min_capacity, ref.capacity[j] + d.delta_capacity[j]);
      }
    }
    REQUIRE(m >= 1);
    REQUIRE(m <= 10);
    ++hist[m - 1];
  }
  CHECK(min_capacity >= cfg.capacity_floor);
  const double p = testsupport::chi2_uniform_pvalue(hist);
  CHECK(p > 0.01);
}

TEST_CASE("floor redraw engages when capacities sit near the floor") {
  Instance ref = three_equal_5000();
  ref.capacity = {2.0, 2.0, 2.0};  // sigma 0.4, floor 1: redraws are common
  PerturbConfig cfg;
  cfg.frac_min = 1.0;
  cfg.frac_max = 1.0;
  for (int k = 0; k < 2000; ++k) {
    Rng rng = Rng::stream(3, static_cast<std::uint64_t>(k));
    const Disruption d = sample_disruption(ref, cfg, rng);
    for (int j = 0; j < 3; ++j) {
      CHECK(ref.capacity[j] + d.delta_capacity[j] >= cfg.capacity_floor);
    }
  }
}

TEST_CASE("degenerate reference is rejected") {
  Instance ref = three_equal_5000();
  ref.capacity = {0.5, 0.2, 0.9};  // all below the default floor of 1
  PerturbConfig cfg;
  Rng rng(1);
  CHECK_THROWS_AS(sample_disruption(ref, cfg, rng), std::invalid_argument);
}

TEST_CASE("perturb config validation") {
  PerturbConfig cfg;
  cfg.frac_min = 0.6;
  cfg.frac_max = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PerturbConfig{};
  cfg.sigma_rel = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("seeded generator basics") {
  // Mean/spread smoke checks for the Gaussian used by the sampler.
  Rng rng(123);
  double sum = 0.0, sum_sq = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(0.0, 1.0);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);

  // uniform_int hits every value in a small range.
  std::vector<long long> counts(5, 0);
  for (int i = 0; i < 5000; ++i) ++counts[rng.uniform_int(0, 4)];
  for (long long c : counts) CHECK(c > 800);

  // Streams reproduce and differ.
  Rng s1 = Rng::stream(7, 1), s1b = Rng::stream(7, 1), s2 = Rng::stream(7, 2);
  CHECK(s1.next_u64() == s1b.next_u64());
  CHECK(Rng::stream(7, 1).next_u64() != s2.next_u64());
}
