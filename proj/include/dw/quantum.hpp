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

#include <array>
#include <cstdint>
#include <vector>

#include "dw/behavior.hpp"
#include "dw/linalg.hpp"

namespace dw::quantum {

/// Bipartite state plus one dichotomic (+-1) observable per party and
/// setting. Observables must square to the identity; anything else is
/// rejected at construction rather than silently projected.
class QuantumRealization {
 public:
  QuantumRealization(CMatrix rho, int d1, int d2, std::array<CMatrix, 2> obs1,
                     std::array<CMatrix, 2> obs2, double tol = 1e-10);

  const CMatrix& rho() const { return rho_; }
  int d1() const { return d1_; }
  int d2() const { return d2_; }
  const CMatrix& obs1(int x) const { return obs1_[x]; }
  const CMatrix& obs2(int x) const { return obs2_[x]; }

  /// Same observables on a noise-mixed state (1-p) rho + p I/d.
  QuantumRealization with_white_noise(double p) const;

 private:
  CMatrix rho_;
  int d1_, d2_;
  std::array<CMatrix, 2> obs1_, obs2_;
};

/// p(b1,b2|x1,x2) = Tr[rho (P^b1_x1 x P^b2_x2)] with P^b_x = (I + (-1)^b B_x)/2.
behavior::Behavior born_behavior(const QuantumRealization& r);

/// The (|00>+|11>)/sqrt(2) realization with B0 = sigma_z on both sides,
/// B1_1 = -sigma_z/2 - (sqrt(3)/2) sigma_x, B1_2 = sigma_z/2 - (sqrt(3)/2) sigma_x.
/// Reaches witness value 5/2 at perfect agreement.
QuantumRealization make_max_violation_realization();

struct Ensemble {
  std::vector<double> priors;
  std::vector<CMatrix> states;
};

/// Best achievable probability of identifying the ensemble index from one
/// measurement. Exact Helstrom expression for two states; for more states
/// the dual program (min Tr Y with Y >= p_i sigma_i) is solved by bisection
/// over alternating-projection feasibility checks.
double guessing_probability(const Ensemble& e);

/// sum_k Tr(rhoA F_k) sigma_k. Throws POVM_INCOMPLETE when the effects do
/// not resolve the identity.
CMatrix measure_and_prepare(const CMatrix& rhoA, const std::vector<CMatrix>& povm,
                            const std::vector<CMatrix>& prepared);

/// <(B0_1 - B0_2)^2> + 1/2 <((B1_2 - B0_2) - B1_1)^2> on rho. Requires the
/// perfect-agreement precondition E00 = 1 (within 1e-8); under it the value
/// equals 5/2 - CHSH.
double sos_residual(const QuantumRealization& r);

struct SelfTestReport {
  double sos_residual = 0.0;   // raw quadratic form; meaningful when e00 ~ 1
  double chsh = 0.0;
  double e00 = 0.0;
  double swap_fidelity = 0.0;  // overlap of the extracted pair with (|00>+|11>)/sqrt(2)
  double extraction_trace = 0.0;
  std::array<double, 4> marginals1{};  // p(b1|x1) for (b1,x1) pairs
  std::array<double, 4> marginals2{};
};

/// Partial-swap extraction: Z_j, X_j are built from the observables
/// (Z = B0, X from the +-(sqrt(3)/3)(2 B1 +- B0) combinations), the local
/// isometry is applied, and the two extracted ancilla qubits are compared
/// against the maximally entangled target.
SelfTestReport swap_selftest(const QuantumRealization& r);

/// Closed-form optimum of the agreement-constrained violation over two-qubit
/// realizations: 1 - 2 eps + 3 sin(pi/3 - asin(1 - 2 eps)/3).
double constrained_chsh_curve(double epsilon);

struct ConstrainedChshResult {
  double chsh = 0.0;
  double eps_achieved = 0.0;
  double schmidt_angle = 0.0;
  std::array<double, 4> measurement_angles{};  // a0, a1, b0, b1 in the z-x plane
  std::array<double, 4> correlators{};         // E00 E01 E10 E11
  double angle_criterion = 0.0;                // asin-sum test value, pi at the optimum
};

/// Maximizes the witness over one Schmidt angle and four z-x plane
/// measurement angles subject to E00 = 1 - 2*eps, by penalty rounds followed
/// by an exact constraint-eliminated polish. Throws NO_CONVERGENCE if the
/// result stays below the closed-form curve minus tol after retries.
ConstrainedChshResult optimize_constrained_chsh(double epsilon, double tol = 1e-4,
                                                std::uint64_t seed = 1);

/// Builds the two-qubit realization described by a ConstrainedChshResult.
QuantumRealization realization_from_angles(double schmidt_angle,
                                           const std::array<double, 4>& angles);

}  // namespace dw::quantum
