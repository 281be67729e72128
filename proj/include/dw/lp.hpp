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

#pragma once

#include <vector>

namespace dw::lp {

/// minimize c.x  subject to  A x = b, x >= 0.
/// Rows may be linearly dependent; redundant rows are tolerated.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;            // size num_vars
  std::vector<std::vector<double>> rows;    // each size num_vars
  std::vector<double> rhs;                  // size rows.size()
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
};

/// Dense two-phase primal simplex with Bland's rule. Sized for the small
/// polytope problems in this toolkit (tens of variables), not for anything
/// big. Throws Error(kInfeasible) when phase 1 cannot reach zero, and
/// Error(kNoConvergence) on an unbounded phase-2 ray.
Solution solve(const Problem& p);

}  // namespace dw::lp
