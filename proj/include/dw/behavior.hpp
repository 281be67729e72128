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
#include <vector>

namespace dw::behavior {

// Conventions used throughout this module:
//  * two observers, binary settings x in {0,1}, binary outcomes b in {0,1};
//  * the privileged ("starred") setting of every observer is index 0;
//  * correlators E[x1][x2] = sum (-1)^(b1+b2) p(b1,b2|x1,x2);
//  * the witness is S = E00 + E01 - E10 + E11 with agreement E00 = 1 - 2*eps.

/// Observed conditional distribution p(b1,b2|x1,x2), validated on
/// construction: entries in [0,1], each setting pair normalized.
class Behavior {
 public:
  /// Flat tensor in [b1][b2][x1][x2] order (b1 slowest).
  static Behavior from_tensor(const std::array<double, 16>& p, double tol = 1e-12);
  static Behavior uniform();

  double p(int b1, int b2, int x1, int x2) const {
    return p_[((b1 * 2 + b2) * 2 + x1) * 2 + x2];
  }
  const std::array<double, 16>& tensor() const { return p_; }

  double correlator(int x1, int x2) const;
  /// Marginal of observer 1, summed over b2.
  double marginal1(int b1, int x1, int x2) const;
  double marginal2(int b2, int x1, int x2) const;
  bool is_no_signalling(double tol = 1e-10) const;

  /// Outcome/setting relabelings (the witness has several symmetries; this
  /// maps between their conventions).
  Behavior relabeled(bool flip_b1, bool flip_b2, bool swap_x1, bool swap_x2) const;

 private:
  Behavior() = default;
  std::array<double, 16> p_ = {};
};

/// Hidden-variable-augmented distribution p(a, b1..bn | x1..xn) for n
/// observers. The hidden outcome a normally ranges over {0,1}; the LHV
/// reconstruction uses a four-valued a = (a0,a1) pair, so the alphabet size
/// is a constructor parameter.
class ExtendedBehavior {
 public:
  ExtendedBehavior(int n, int hidden_count, std::vector<double> p, double tol = 1e-12);

  int observers() const { return n_; }
  int hidden_count() const { return hidden_count_; }

  /// b and x are bit-packed with observer 1 in the most significant bit,
  /// matching the nesting order of the JSON layout.
  double p(int a, unsigned b_bits, unsigned x_bits) const {
    return p_[(static_cast<size_t>(a) << (2 * n_)) | (static_cast<size_t>(b_bits) << n_) |
              x_bits];
  }
  const std::vector<double>& tensor() const { return p_; }

  /// Hidden-outcome prior p(a), evaluated at the all-starred setting tuple.
  double hidden_prior(int a) const;

  /// Observed n=2 behavior (sum over a).
  Behavior marginal_behavior() const;

  /// p(b_i | a, x1..xn) independent of the other observers' settings.
  bool is_no_signalling(double tol = 1e-10) const;
  /// p(a | x1..xn) = p(a).
  bool is_no_superdeterministic(double tol = 1e-10) const;

 private:
  int n_ = 0;
  int hidden_count_ = 2;
  std::vector<double> p_;
};

struct WitnessReport {
  double correlators[2][2];  // E[x1][x2]
  double chsh = 0.0;
  double epsilon = 0.0;
  double delta_ns_lower = 0.0;
};

double correlator(const Behavior& b, int x1, int x2);

/// Evaluates the witness: S, eps = (1 - E00)/2, and the no-signalling lower
/// bound max(eps/2, (S - 2 + 2 eps)/4) on the objectivity violation delta.
WitnessReport chsh_witness(const Behavior& b);

/// Worst-observer objectivity violation at the all-starred setting tuple:
/// max_i [1 - sum_a p(a, b_i = a | x = 0...0)].
double delta_objectivity_violation(const ExtendedBehavior& e);

/// sum_a p(a, b_1 = ... = b_n = a | x = 0...0).
double global_agreement(const ExtendedBehavior& e);

/// The saturating distribution: at a setting tuple with k starred observers
/// the (a, starred-b) block carries weight (1-k*delta)/2 on full agreement
/// and delta/2 on each single-observer defect, and the unstarred outcomes
/// are uniform. Rejects n*delta > 1.
ExtendedBehavior make_tightness_distribution(int n, double delta);

/// p(b1,b2|x1,x2) = 1/2 * [b1 xor b2 == x1 and not x2]; the anticorrelated
/// cell sits at (x1,x2) = (1,0), matching the -E10 term of the witness.
Behavior make_pr_box();

struct LhvReconstruction {
  ExtendedBehavior model;   // hidden pair (a0,a1) encoded as a = 2*a0 + a1
  Behavior reconstructed;   // behavior generated by the deterministic model
  double max_error = 0.0;   // max-norm distance to the input behavior
};

/// Rebuilds a full-agreement behavior from the deterministic-response model
/// with hidden pair distribution p~(a0,a1) = p(b1=a0, b2=a1 | x1=0, x2=1).
/// Throws AGREEMENT_VIOLATED when p(b1=b2|x1=x2) < 1 - tol for either equal
/// setting pair, and RECONSTRUCTION_MISMATCH when the rebuilt behavior
/// deviates by more than recon_tol (e.g. for the PR box).
LhvReconstruction lhv_reconstruct(const Behavior& b, double tol = 1e-9,
                                  double recon_tol = 1e-9);

/// Exact minimum objectivity violation over extended no-signalling,
/// no-superdeterministic behaviors with CHSH = chsh_target and agreement
/// E00 = 1 - 2*epsilon, solved as a 32-variable linear program. Throws
/// INFEASIBLE when the targets leave the no-signalling set.
double delta_min_ns_lp(double chsh_target, double epsilon);

}  // namespace dw::behavior
