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

// Small statistics helpers for test assertions (chi-squared uniformity).

#ifndef REFLOC_TESTS_SUPPORT_STATS_HPP_
#define REFLOC_TESTS_SUPPORT_STATS_HPP_

#include <cmath>
#include <span>
#include <stdexcept>

namespace refloc::testsupport {

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) series, return 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

// p-value of the chi-squared statistic against uniform expected counts.
inline double chi2_uniform_pvalue(std::span<const long long> counts) {
  long long total = 0;
  for (long long c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0.0;
  for (long long c : counts) {
    const double diff = c - expected;
    stat += diff * diff / expected;
  }
  return gamma_q(0.5 * (counts.size() - 1), 0.5 * stat);
}

}  // namespace refloc::testsupport

#endif  // REFLOC_TESTS_SUPPORT_STATS_HPP_
