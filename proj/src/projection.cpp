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

#include "dw/projection.hpp"

#include <cmath>
#include <limits>

namespace dw::npa {

FeasibilityResult alternating_projection_feasible(
    std::vector<double> start, const std::vector<ConvexSet>& sets,
    const std::function<double(const std::vector<double>&)>& residual,
    const FeasibilityOptions& opt) {
  FeasibilityResult out;
  std::vector<double> x = std::move(start);
  const size_t dim = x.size();

  std::vector<std::vector<double>> corrections;
  corrections.reserve(sets.size());
  for (const auto& s : sets)
    corrections.emplace_back(s.affine ? 0 : dim, 0.0);

  double best = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  std::vector<double> y(dim);

  for (int cycle = 1; cycle <= opt.max_cycles; ++cycle) {
    for (size_t k = 0; k < sets.size(); ++k) {
      if (sets[k].affine) {
        sets[k].project(x);
        continue;
      }
      auto& e = corrections[k];
      for (size_t i = 0; i < dim; ++i) y[i] = x[i] + e[i];
      x = y;
      sets[k].project(x);
      for (size_t i = 0; i < dim; ++i) e[i] = y[i] - x[i];
    }
    const double r = residual(x);
    out.cycles = cycle;
    if (cycle % 16 == 1) out.residual_history.push_back(r);
    if (r < opt.tol) {
      out.verdict = Verdict::kFeasible;
      out.point = std::move(x);
      out.residual = r;
      out.residual_history.push_back(r);
      return out;
    }
    if (r < best * 0.995) {
      best = r;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (since_improvement >= opt.patience && r > opt.stall_factor * opt.tol) {
      out.verdict = Verdict::kInfeasibleSuspected;
      out.point = std::move(x);
      out.residual = r;
      out.residual_history.push_back(r);
      return out;
    }
  }
  out.verdict = Verdict::kMaxIters;
  out.residual = residual(x);
  out.residual_history.push_back(out.residual);
  out.point = std::move(x);
  return out;
}

}  // namespace dw::npa
