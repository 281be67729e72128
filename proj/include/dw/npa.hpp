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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dw/projection.hpp"

namespace dw::npa {

// Scenario: one hidden party with a single binary measurement (generator F,
// the outcome-0 projector) and two observers with two binary settings each
// (generators A0, A1 and B0, B1, again outcome-0 projectors). Operators of
// different parties commute; within a party adjacent repetitions collapse by
// idempotence. Moment matrices are real symmetric, so a word and its adjoint
// share an entry class.

/// Canonical operator word. Party sequences hold setting indices of
/// outcome-0 projectors, adjacent duplicates removed.
struct Word {
  bool has_hidden = false;
  std::vector<std::uint8_t> party1;
  std::vector<std::uint8_t> party2;

  int length() const {
    return (has_hidden ? 1 : 0) + static_cast<int>(party1.size() + party2.size());
  }
  bool identity() const { return length() == 0; }
  Word adjoint() const;
  std::string str() const;  // e.g. "F.A0.A1.B0", "1" for the identity

  /// Class key: lexicographic minimum of the word and its adjoint.
  std::string class_key() const;

  /// Append one generator with projector reduction. Generator codes:
  /// 'F' hidden, ('A', x) or ('B', x).
  void append_hidden();
  void append_party1(int setting);
  void append_party2(int setting);
};

/// (left)^dagger * right, reduced.
Word word_product(const Word& left, const Word& right);

enum class Level { k1, k1AB, k2, k3 };

Level level_from_int(int level);
std::string level_name(Level level);

/// Moment-matrix skeleton: the word list, the entry->class map and class
/// bookkeeping. Gamma itself is a flat row-major size*size vector handled by
/// the solver.
struct MomentStructure {
  std::vector<Word> words;
  int size = 0;
  int num_classes = 0;
  std::vector<int> entry_class;      // size*size
  std::vector<int> class_count;      // entries per class
  std::vector<std::string> class_labels;
  int identity_class = -1;
  bool hidden_party = false;

  /// Class of a given moment word, when it appears anywhere in the matrix.
  std::optional<int> find_class(const Word& w) const;
};

MomentStructure build_moment_matrix(Level level, bool hidden_party);

/// Linear functional over moment classes: sum_c coeffs[c]*<class c> + constant.
struct Functional {
  std::vector<double> coeffs;
  double constant = 0.0;
};

/// E[x1,x2] = 4<Ax By> - 2<Ax> - 2<By> + 1.
Functional correlator_functional(const MomentStructure& s, int x1, int x2);
/// E00 + E01 - E10 + E11.
Functional chsh_functional(const MomentStructure& s);
/// Per-observer objectivity sum_a <F_a P^{b=a}_{x=0}> = 1 - <F> - <P0> + 2<F P0>.
Functional objectivity_functional(const MomentStructure& s, int observer);
/// p(a, b1, b2 | x1, x2) (or marginal cells when some slots are left blank)
/// via inclusion-exclusion. Returns nullopt when a needed moment does not
/// appear at this level.
std::optional<Functional> probability_functional(const MomentStructure& s,
                                                 std::optional<int> a,
                                                 std::optional<std::pair<int, int>> b1x1,
                                                 std::optional<std::pair<int, int>> b2x2);
/// Nonnegativity functionals for every cell expressible at this level.
std::vector<Functional> cell_positivity_functionals(const MomentStructure& s);

struct Constraint {
  Functional f;
  double value = 0.0;
  bool equality = true;  // false: f >= value
};

struct SdpOptions {
  double tol = 1e-7;
  int max_cycles = 60000;
  int patience = 600;
};

struct SdpResult {
  Verdict verdict = Verdict::kMaxIters;
  std::vector<double> gamma;  // size*size, row-major
  double residual = 0.0;
  int cycles = 0;
  std::vector<double> residual_history;
};

/// Dykstra-corrected alternating projections between the PSD cone, the
/// class-tied affine subspace (with <1> = 1 and the equality constraints)
/// and the inequality half-spaces. FEASIBLE certificates are PSD by
/// construction and satisfy every constraint within tol.
SdpResult sdp_feasible(const MomentStructure& s, const std::vector<Constraint>& constraints,
                       const SdpOptions& opt = {},
                       const std::vector<double>* warm_start = nullptr);

/// Max residual of the constraints (and class ties) on a given certificate;
/// used to re-verify FEASIBLE results independently of the solver loop.
double certificate_residual(const MomentStructure& s,
                            const std::vector<Constraint>& constraints,
                            const std::vector<double>& gamma);

/// Largest witness value S with a feasible moment matrix under the extra
/// constraints, located by bisection to width `width`.
double max_chsh_feasible(Level level, const std::vector<Constraint>& extra,
                         double width = 1e-3, const SdpOptions& opt = {});

/// Solver sanity anchor: unconstrained maximal witness value. 2*sqrt(2)
/// within a few 1e-3 from level 1+AB on.
double tsirelson_bound(Level level, const SdpOptions& opt = {});

struct QuantumDeltaResult {
  double delta = 0.0;
  int feasibility_calls = 0;
  double boundary_residual = 0.0;  // residual of the last infeasible probe
  Level level = Level::k1AB;
};

/// Minimal objectivity violation delta compatible with CHSH = chsh_target
/// and agreement E00 = 1 - 2*epsilon at the given relaxation level,
/// bisected to width 1e-3. Cell nonnegativity (where expressible) is
/// enforced alongside the moment structure, which keeps the bound at or
/// above the exact no-signalling value. Throws INFEASIBLE when the targets
/// are not attainable at this level (cross-checked against the NS linear
/// program to tell post-quantum targets from post-no-signalling ones).
QuantumDeltaResult delta_min_quantum(double chsh_target, double epsilon, Level level,
                                     const SdpOptions& opt = {});

}  // namespace dw::npa
