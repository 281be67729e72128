// Copyright 2026 The dwtk Authors
//
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

#include "dw/lp.hpp"

#include <cmath>
#include <limits>

#include "dw/error.hpp"

namespace dw::lp {

namespace {

constexpr double kTol = 1e-9;

// Dense tableau: m rows over (n structural + m artificial) columns + rhs.
struct Tableau {
  int m = 0;
  int n_total = 0;                  // structural + artificial
  std::vector<std::vector<double>> a;  // m x n_total
  std::vector<double> b;            // m
  std::vector<int> basis;           // m, column index of the basic var per row
};

// Price out: reduced costs for objective c over the current basis.
// Returns entering column by Bland's rule, or -1 at optimality.
int entering_column(const Tableau& t, const std::vector<double>& cost,
                    const std::vector<double>& y, const std::vector<bool>& blocked) {
  for (int j = 0; j < t.n_total; ++j) {
    if (blocked[j]) continue;
    double rc = cost[j];
    for (int i = 0; i < t.m; ++i) rc -= y[i] * t.a[i][j];
    if (rc < -kTol) return j;
  }
  return -1;
}

void compute_multipliers(const Tableau& t, const std::vector<double>& cost,
                         std::vector<double>& y) {
  // Basis columns are kept as unit vectors by explicit pivoting, so the
  // multiplier of row i is simply the cost of its basic variable.
  for (int i = 0; i < t.m; ++i) y[i] = cost[t.basis[i]];
}

void pivot(Tableau& t, int row, int col) {
  const double piv = t.a[row][col];
  const double inv = 1.0 / piv;
  for (int j = 0; j < t.n_total; ++j) t.a[row][j] *= inv;
  t.b[row] *= inv;
  t.a[row][col] = 1.0;
  for (int i = 0; i < t.m; ++i) {
    if (i == row) continue;
    const double f = t.a[i][col];
    if (f == 0.0) continue;
    for (int j = 0; j < t.n_total; ++j) t.a[i][j] -= f * t.a[row][j];
    t.b[i] -= f * t.b[row];
    t.a[i][col] = 0.0;
  }
  t.basis[row] = col;
}

// Returns false on unbounded direction.
bool simplex_iterations(Tableau& t, const std::vector<double>& cost,
                        const std::vector<bool>& blocked) {
  std::vector<double> y(t.m);
  const int max_pivots = 20000;
  for (int iter = 0; iter < max_pivots; ++iter) {
    compute_multipliers(t, cost, y);
    int col = entering_column(t, cost, y, blocked);
    if (col < 0) return true;
    // Ratio test, Bland tie-break on the leaving basic variable index.
    int row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < t.m; ++i) {
      if (t.a[i][col] > kTol) {
        double ratio = t.b[i] / t.a[i][col];
        if (ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && row >= 0 && t.basis[i] < t.basis[row])) {
          best_ratio = ratio;
          row = i;
        }
      }
    }
    if (row < 0) return false;
    pivot(t, row, col);
  }
  throw Error(ErrorCode::kNoConvergence, "simplex pivot budget exhausted");
}

}  // namespace

Solution solve(const Problem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = p.num_vars;
  Tableau t;
  t.m = m;
  t.n_total = n + m;
  t.a.assign(m, std::vector<double>(t.n_total, 0.0));
  t.b.resize(m);
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sign = (p.rhs[i] < 0.0) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.a[i][j] = sign * p.rows[i][j];
    t.b[i] = sign * p.rhs[i];
    t.a[i][n + i] = 1.0;
    t.basis[i] = n + i;
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<double> cost1(t.n_total, 0.0);
  for (int j = n; j < t.n_total; ++j) cost1[j] = 1.0;
  std::vector<bool> blocked(t.n_total, false);
  if (!simplex_iterations(t, cost1, blocked))
    throw Error(ErrorCode::kNoConvergence, "phase-1 unbounded (should not happen)");
  double phase1 = 0.0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= n) phase1 += t.b[i];
  if (phase1 > 1e-7)
    throw Error(ErrorCode::kInfeasible, "no feasible point satisfies the constraints");

  // Drive leftover zero-level artificials out of the basis where possible;
  // rows with no structural pivot are redundant and stay harmless.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::fabs(t.a[i][j]) > 1e-7) {
        col = j;
        break;
      }
    }
    if (col >= 0) pivot(t, i, col);
  }
  for (int j = n; j < t.n_total; ++j) blocked[j] = true;

  // Phase 2.
  std::vector<double> cost2(t.n_total, 0.0);
  for (int j = 0; j < n; ++j) cost2[j] = p.objective[j];
  if (!simplex_iterations(t, cost2, blocked))
    throw Error(ErrorCode::kNoConvergence, "objective unbounded below");

  Solution s;
  s.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) s.x[t.basis[i]] = t.b[i];
  s.objective = 0.0;
  for (int j = 0; j < n; ++j) s.objective += p.objective[j] * s.x[j];
  return s;
}

}  // namespace dw::lp
