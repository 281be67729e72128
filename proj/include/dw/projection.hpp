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

#include <functional>
#include <vector>

namespace dw::npa {

enum class Verdict { kFeasible, kInfeasibleSuspected, kMaxIters };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kFeasible: return "FEASIBLE";
    case Verdict::kInfeasibleSuspected: return "INFEASIBLE_SUSPECTED";
    case Verdict::kMaxIters: return "MAX_ITERS";
  }
  return "UNKNOWN";
}

/// One convex set, given by its (exact) projection. Affine sets are marked
/// so the Dykstra correction can be skipped for them.
struct ConvexSet {
  std::function<void(std::vector<double>&)> project;
  bool affine = false;
};

struct FeasibilityOptions {
  double tol = 1e-7;
  int max_cycles = 60000;
  int patience = 600;          // cycles without improvement before a stall call
  double stall_factor = 10.0;  // residual must sit above stall_factor*tol
};

struct FeasibilityResult {
  Verdict verdict = Verdict::kMaxIters;
  std::vector<double> point;             // iterate after the last cone projection
  double residual = 0.0;
  int cycles = 0;
  std::vector<double> residual_history;  // sampled every few cycles
};

/// Dykstra-corrected cyclic projections onto the given sets. The point is
/// declared feasible once `residual` (caller-supplied measure of constraint
/// violation, evaluated after each full cycle) drops below tol. A residual
/// that stops improving while still far from tol is reported as
/// INFEASIBLE_SUSPECTED; exhausting the cycle budget yields MAX_ITERS and
/// the caller decides.
FeasibilityResult alternating_projection_feasible(
    std::vector<double> start, const std::vector<ConvexSet>& sets,
    const std::function<double(const std::vector<double>&)>& residual,
    const FeasibilityOptions& opt = {});

}  // namespace dw::npa
