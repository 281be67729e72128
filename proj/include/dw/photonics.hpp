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

#include "dw/linalg.hpp"
#include "dw/random.hpp"
#include "dw/snm.hpp"

namespace dw::photonics {

/// Simulated Sagnac dephasing source. |delta| is the temporal overlap
/// between the delayed and undelayed joint wavefunctions: 1 means no
/// system-environment coupling (pure singlet), 0 full dephasing. The pump
/// phase rotates the coherent part only.
struct ExperimentModel {
  cplx delta{1.0, 0.0};
  double phase = 0.0;
  long long counts_per_setting = 10000;
  std::uint64_t seed = 1;
  double background = 0.0;  // mean accidental counts added to every cell

  void validate() const;
};

/// Per-party analyzer angles (radians): the beam passes the quarter-wave
/// plate, then the half-wave plate, then a polarizing splitter.
struct WaveplateSetting {
  double hwp1 = 0.0, qwp1 = 0.0;
  double hwp2 = 0.0, qwp2 = 0.0;
};

// Jones matrices. HWP(t): rotation by 2t composed with a sigma_z
// reflection; QWP(t): quarter retarder (fast axis horizontal, diag(1, i))
// rotated by t. The conventions are fixed here once; only consistency
// matters for the optimizer.
CMatrix hwp_jones(double theta);
CMatrix qwp_jones(double theta);

/// The +-1 polarization observable measured by (hwp, qwp) + splitter.
CMatrix analyzer_observable(double hwp, double qwp);

/// Two-photon polarization state in the basis {HH, HV, VH, VV}:
/// |delta|^2 weight on the (phase-rotated) singlet and the rest on the
/// separable mixture (|HV><HV| + |VH><VH|)/2.
CMatrix final_state(const ExperimentModel& m);

/// Single-qubit dephasing isometry applied to alpha|H> + beta|V> with the
/// environment qubit starting in |0>: returns the joint polarization x A
/// density matrix (4x4, A is the second factor).
CMatrix dephasing_channel(cplx alpha, cplx beta, cplx delta);

/// Raw correlator of final_state under the analyzer setting. Raw means the
/// detector labels are NOT remapped: the singlet gives -1 at zero angles.
double ideal_expectation(const ExperimentModel& m, const WaveplateSetting& w);

/// Outcome-pair probabilities (b1,b2) = 00,01,10,11, raw labels.
std::array<double, 4> ideal_probabilities(const ExperimentModel& m,
                                          const WaveplateSetting& w);

/// Poisson coincidence counts with means counts_per_setting * p + background.
/// The stream is explicit so parallel runs never share generator state.
std::array<long long, 4> sample_counts(const ExperimentModel& m,
                                       const WaveplateSetting& w, Rng& rng);

/// Largest witness value reachable from final_state over all analyzer
/// settings: 2 sqrt(t1^2 + t2^2) from the two top singular values of the
/// correlation matrix. Equals 2 sqrt(1 + |delta|^4) for this family.
double max_chsh_unconstrained(const ExperimentModel& m);

/// Black box the ab-initio protocol drives. Detector labels are remapped
/// (outcome of party 2 flipped) so that the equal-settings correlator at
/// zero angles is the agreement correlator E00 = +1 at full overlap.
/// Parameter layout: {h1,q1,h2,q2} for the x=0 measurements, then the same
/// four for x=1.
class SimulatedBox : public snm::BlackBox {
 public:
  enum class Mode { kPoisson, kExact };

  explicit SimulatedBox(const ExperimentModel& m, Mode mode = Mode::kPoisson);

  snm::SettingCounts measure(int x1, int x2, const std::array<double, 8>& params) override;
  double shots_per_setting() const override;

 private:
  ExperimentModel model_;
  Mode mode_;
  Rng rng_;
};

struct TomographyOptimum {
  double chsh = 0.0;
  double eps_achieved = 0.0;
  std::array<double, 8> params{};
};

/// Exact-state analogue of the black-box protocol: with the state known,
/// the analyzer angles maximizing |CHSH| at agreement E00 = 1 - 2 eps are
/// found by a penalized noiseless simplex search. Uses the same remapped
/// labels as SimulatedBox.
TomographyOptimum tomography_optimal_chsh(const ExperimentModel& m, double eps_target,
                                          std::uint64_t seed);

}  // namespace dw::photonics
