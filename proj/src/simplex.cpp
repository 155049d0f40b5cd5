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

#include "refloc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace refloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

enum class VarState : unsigned char { at_lower, at_upper, basic };

struct Tableau {
  int m = 0;  // rows
  int nv = 0; // total columns: structural + slack + artificial
  std::vector<double> col;    // dense column-major A, m * nv
  std::vector<double> lower, upper, x;
  std::vector<VarState> state;
  std::vector<int> basic;     // var per row
  std::vector<double> binv;   // m * m row-major
  std::vector<double> rhs;

  double a(int row, int var) const { return col[static_cast<std::size_t>(var) * m + row]; }
  double& a(int row, int var) { return col[static_cast<std::size_t>(var) * m + row]; }
  double& bi(int i, int k) { return binv[static_cast<std::size_t>(i) * m + k]; }
  double bi(int i, int k) const { return binv[static_cast<std::size_t>(i) * m + k]; }
};

// Rebuild binv from the basis columns by Gauss-Jordan, then recompute basic
// values from the nonbasic ones. Returns false on a (numerically) singular
// basis.
bool refactorize(Tableau& t) {
  const int m = t.m;
  std::vector<double> work(static_cast<std::size_t>(m) * 2 * m, 0.0);
  auto w = [&work, m](int i, int k) -> double& {
    return work[static_cast<std::size_t>(i) * 2 * m + k];
  };
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) w(i, k) = t.a(i, t.basic[k]);
    w(i, m + i) = 1.0;
  }
  for (int p = 0; p < m; ++p) {
    int piv = p;
    double best = std::abs(w(p, p));
    for (int i = p + 1; i < m; ++i) {
      if (std::abs(w(i, p)) > best) {
        best = std::abs(w(i, p));
        piv = i;
      }
    }
    if (best < 1e-12) return false;
    if (piv != p) {
      for (int k = 0; k < 2 * m; ++k) std::swap(w(p, k), w(piv, k));
    }
    const double d = w(p, p);
    for (int k = 0; k < 2 * m; ++k) w(p, k) /= d;
    for (int i = 0; i < m; ++i) {
      if (i == p) continue;
      const double f = w(i, p);
      if (f == 0.0) continue;
      for (int k = 0; k < 2 * m; ++k) w(i, k) -= f * w(p, k);
    }
  }
  // Row i of the inverse maps to basis position of... we built [B | I] with
  // column order = basis order, so the right half rows are B^{-1} rows in
  // basis-column order after the elimination.
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) t.bi(i, k) = w(i, m + k);
  }
  // x_B = B^{-1} (b - A_N x_N)
  std::vector<double> resid = t.rhs;
  for (int j = 0; j < t.nv; ++j) {
    if (t.state[j] == VarState::basic) continue;
    const double v = t.x[j];
    if (v == 0.0) continue;
    for (int i = 0; i < m; ++i) resid[i] -= t.a(i, j) * v;
  }
  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    for (int k = 0; k < m; ++k) v += t.bi(i, k) * resid[k];
    t.x[t.basic[i]] = v;
  }
  return true;
}

// Primal simplex sweep for a fixed cost vector. Mutates the tableau basis.
LpStatus run_phase(Tableau& t, const std::vector<double>& cost, int& iter_budget) {
  const int m = t.m;
  std::vector<double> y(m), w(m);
  int degenerate_streak = 0;
  int since_refactor = 0;
  while (iter_budget > 0) {
    --iter_budget;
    // y = c_B^T B^{-1}
    for (int k = 0; k < m; ++k) {
      double v = 0.0;
      for (int i = 0; i < m; ++i) v += cost[t.basic[i]] * t.bi(i, k);
      y[k] = v;
    }
    const bool bland = degenerate_streak > 400;
    int enter = -1;
    double enter_viol = kReducedCostTol;
    int enter_dir = 0;
    for (int j = 0; j < t.nv; ++j) {
      if (t.state[j] == VarState::basic) continue;
      if (t.lower[j] == t.upper[j]) continue;  // fixed
      double d = cost[j];
      for (int i = 0; i < m; ++i) d -= y[i] * t.a(i, j);
      double viol = 0.0;
      int dir = 0;
      if (t.state[j] == VarState::at_lower && d < -kReducedCostTol) {
        viol = -d;
        dir = 1;
      } else if (t.state[j] == VarState::at_upper && d > kReducedCostTol) {
        viol = d;
        dir = -1;
      }
      if (dir == 0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (viol > enter_viol) {
        enter_viol = viol;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) return LpStatus::optimal;

    // w = B^{-1} A_enter
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (int k = 0; k < m; ++k) v += t.bi(i, k) * t.a(k, enter);
      w[i] = v;
    }

    // Ratio test: entering moves by t >= 0 in direction enter_dir.
    double t_max = t.upper[enter] - t.lower[enter];  // bound flip distance
    int leave_row = -1;
    int leave_hits_lower = 0;
    for (int i = 0; i < m; ++i) {
      const double delta = enter_dir * w[i];  // x_basic[i] changes by -delta * t
      const int k = t.basic[i];
      if (delta > kPivotTol) {
        if (t.lower[k] > -kInf) {
          const double ratio = (t.x[k] - t.lower[k]) / delta;
          if (ratio < t_max - 1e-12 ||
              (ratio < t_max + 1e-12 && (leave_row < 0 || k < t.basic[leave_row]))) {
            t_max = std::max(ratio, 0.0);
            leave_row = i;
            leave_hits_lower = 1;
          }
        }
      } else if (delta < -kPivotTol) {
        if (t.upper[k] < kInf) {
          const double ratio = (t.upper[k] - t.x[k]) / (-delta);
          if (ratio < t_max - 1e-12 ||
              (ratio < t_max + 1e-12 && (leave_row < 0 || k < t.basic[leave_row]))) {
            t_max = std::max(ratio, 0.0);
            leave_row = i;
            leave_hits_lower = 0;
          }
        }
      }
    }
    if (t_max == kInf) return LpStatus::unbounded;
    degenerate_streak = (t_max < 1e-10) ? degenerate_streak + 1 : 0;

    // Apply the move.
    for (int i = 0; i < m; ++i) t.x[t.basic[i]] -= enter_dir * t_max * w[i];
    if (leave_row < 0) {
      // Bound flip, basis unchanged.
      t.x[enter] = (t.state[enter] == VarState::at_lower) ? t.upper[enter] : t.lower[enter];
      t.state[enter] =
          (t.state[enter] == VarState::at_lower) ? VarState::at_upper : VarState::at_lower;
      continue;
    }
    const int leave = t.basic[leave_row];
    t.x[enter] = (t.state[enter] == VarState::at_lower ? t.lower[enter] : t.upper[enter]) +
                 enter_dir * t_max;
    t.x[leave] = leave_hits_lower ? t.lower[leave] : t.upper[leave];
    t.state[leave] = leave_hits_lower ? VarState::at_lower : VarState::at_upper;
    t.state[enter] = VarState::basic;
    t.basic[leave_row] = enter;
    // binv row update.
    const double pivot = w[leave_row];
    for (int k = 0; k < m; ++k) t.bi(leave_row, k) /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      for (int k = 0; k < m; ++k) t.bi(i, k) -= f * t.bi(leave_row, k);
    }
    if (++since_refactor >= 128) {
      since_refactor = 0;
      if (!refactorize(t)) return LpStatus::iteration_limit;
    }
  }
  return LpStatus::iteration_limit;
}

}  // namespace

LpSolution solve_lp(const LpProblem& prob, int max_iterations) {
  const int m = static_cast<int>(prob.rows.size());
  const int n = prob.n;
  Tableau t;
  t.m = m;
  t.nv = n + 2 * m;  // structural, slack per row, artificial per row
  t.col.assign(static_cast<std::size_t>(t.nv) * m, 0.0);
  t.lower.assign(t.nv, 0.0);
  t.upper.assign(t.nv, 0.0);
  t.x.assign(t.nv, 0.0);
  t.state.assign(t.nv, VarState::at_lower);
  t.rhs.resize(m);

  for (int j = 0; j < n; ++j) {
    t.lower[j] = prob.lower[j];
    t.upper[j] = prob.upper[j];
  }
  for (int i = 0; i < m; ++i) {
    const LpRow& row = prob.rows[i];
    t.rhs[i] = row.rhs;
    for (const auto& [j, v] : row.coeffs) {
      if (j < 0 || j >= n) throw std::invalid_argument("lp row references bad column");
      t.a(i, j) += v;
    }
    const int slack = n + i;
    t.a(i, slack) = 1.0;
    switch (row.sense) {
      case RowSense::le:
        t.lower[slack] = 0.0;
        t.upper[slack] = kInf;
        break;
      case RowSense::ge:
        t.lower[slack] = -kInf;
        t.upper[slack] = 0.0;
        break;
      case RowSense::eq:
        t.lower[slack] = 0.0;
        t.upper[slack] = 0.0;
        break;
    }
  }

  // Nonbasic start: finite bound nearest zero.
  for (int j = 0; j < n + m; ++j) {
    double v;
    if (t.lower[j] > -kInf && t.upper[j] < kInf) {
      v = (std::abs(t.lower[j]) <= std::abs(t.upper[j])) ? t.lower[j] : t.upper[j];
    } else if (t.lower[j] > -kInf) {
      v = t.lower[j];
    } else if (t.upper[j] < kInf) {
      v = t.upper[j];
    } else {
      v = 0.0;
    }
    t.x[j] = v;
    t.state[j] = (t.upper[j] < kInf && v == t.upper[j] && t.lower[j] != t.upper[j])
                     ? VarState::at_upper
                     : VarState::at_lower;
  }

  // Artificial basis absorbing the residual.
  t.basic.resize(m);
  t.binv.assign(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> phase1_cost(t.nv, 0.0);
  for (int i = 0; i < m; ++i) {
    double resid = t.rhs[i];
    for (int j = 0; j < n + m; ++j) {
      if (t.x[j] != 0.0) resid -= t.a(i, j) * t.x[j];
    }
    const int art = n + m + i;
    t.a(i, art) = (resid >= 0.0) ? 1.0 : -1.0;
    t.lower[art] = 0.0;
    t.upper[art] = kInf;
    t.x[art] = std::abs(resid);
    t.state[art] = VarState::basic;
    t.basic[i] = art;
    t.bi(i, i) = (resid >= 0.0) ? 1.0 : -1.0;
    phase1_cost[art] = 1.0;
  }

  int budget = max_iterations;
  LpSolution out;
  LpStatus st = run_phase(t, phase1_cost, budget);
  if (st == LpStatus::iteration_limit) {
    out.status = st;
    return out;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) infeas += phase1_cost[t.basic[i]] * std::max(t.x[t.basic[i]], 0.0);
  if (infeas > kFeasTol) {
    out.status = LpStatus::infeasible;
    return out;
  }
  // Pin artificials at zero for phase 2.
  for (int i = 0; i < m; ++i) {
    const int art = n + m + i;
    t.upper[art] = 0.0;
    if (t.state[art] != VarState::basic) t.x[art] = 0.0;
  }

  std::vector<double> phase2_cost(t.nv, 0.0);
  for (int j = 0; j < n; ++j) phase2_cost[j] = prob.cost[j];
  st = run_phase(t, phase2_cost, budget);
  if (st != LpStatus::optimal) {
    out.status = st;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x.assign(t.x.begin(), t.x.begin() + n);
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += prob.cost[j] * out.x[j];
  out.objective = obj;
  return out;
}

}  // namespace refloc
