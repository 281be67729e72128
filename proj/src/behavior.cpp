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

#include "dw/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dw/error.hpp"
#include "dw/lp.hpp"

namespace dw::behavior {

namespace {

void validate_tensor(const double* p, size_t cells, size_t outcome_block,
                     double tol) {
  // cells = outcome_block * number of setting tuples; each block sums to 1.
  for (size_t i = 0; i < cells; ++i) {
    if (!(p[i] >= -tol && p[i] <= 1.0 + tol))
      throw Error(ErrorCode::kInvalidArgument,
                  "probability entry outside [0,1]: " + std::to_string(p[i]));
  }
  const size_t setting_tuples = cells / outcome_block;
  for (size_t s = 0; s < setting_tuples; ++s) {
    double sum = 0.0;
    for (size_t o = 0; o < outcome_block; ++o) sum += p[o * setting_tuples + s];
    if (std::fabs(sum - 1.0) > tol)
      throw Error(ErrorCode::kInvalidArgument,
                  "setting tuple not normalized: sum = " + std::to_string(sum));
  }
}

}  // namespace

Behavior Behavior::from_tensor(const std::array<double, 16>& p, double tol) {
  // Outcomes are the two leading indices, settings the two trailing ones, so
  // entries of one setting tuple are strided by 4.
  validate_tensor(p.data(), 16, 4, tol);
  Behavior b;
  b.p_ = p;
  return b;
}

Behavior Behavior::uniform() {
  std::array<double, 16> p;
  p.fill(0.25);
  return from_tensor(p);
}

double Behavior::correlator(int x1, int x2) const {
  double e = 0.0;
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      e += ((b1 + b2) % 2 == 0 ? 1.0 : -1.0) * p(b1, b2, x1, x2);
  return e;
}

double Behavior::marginal1(int b1, int x1, int x2) const {
  return p(b1, 0, x1, x2) + p(b1, 1, x1, x2);
}

double Behavior::marginal2(int b2, int x1, int x2) const {
  return p(0, b2, x1, x2) + p(1, b2, x1, x2);
}

bool Behavior::is_no_signalling(double tol) const {
  for (int b1 = 0; b1 < 2; ++b1)
    for (int x1 = 0; x1 < 2; ++x1)
      if (std::fabs(marginal1(b1, x1, 0) - marginal1(b1, x1, 1)) > tol) return false;
  for (int b2 = 0; b2 < 2; ++b2)
    for (int x2 = 0; x2 < 2; ++x2)
      if (std::fabs(marginal2(b2, 0, x2) - marginal2(b2, 1, x2)) > tol) return false;
  return true;
}

Behavior Behavior::relabeled(bool flip_b1, bool flip_b2, bool swap_x1,
                             bool swap_x2) const {
  std::array<double, 16> q;
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2) {
          int sb1 = flip_b1 ? 1 - b1 : b1;
          int sb2 = flip_b2 ? 1 - b2 : b2;
          int sx1 = swap_x1 ? 1 - x1 : x1;
          int sx2 = swap_x2 ? 1 - x2 : x2;
          q[((b1 * 2 + b2) * 2 + x1) * 2 + x2] = p(sb1, sb2, sx1, sx2);
        }
  return from_tensor(q);
}

ExtendedBehavior::ExtendedBehavior(int n, int hidden_count, std::vector<double> p,
                                   double tol)
    : n_(n), hidden_count_(hidden_count), p_(std::move(p)) {
  if (n_ < 1 || n_ > 16)
    throw Error(ErrorCode::kInvalidArgument, "observer count out of range");
  if (hidden_count_ != 2 && hidden_count_ != 4)
    throw Error(ErrorCode::kInvalidArgument, "hidden alphabet must have 2 or 4 values");
  const size_t expected = static_cast<size_t>(hidden_count_) << (2 * n_);
  if (p_.size() != expected)
    throw Error(ErrorCode::kInvalidArgument, "tensor size mismatch");
  // Normalization per setting tuple: for fixed x_bits, sum over (a, b_bits).
  const size_t nb = static_cast<size_t>(1) << n_;
  for (size_t x = 0; x < nb; ++x) {
    double sum = 0.0;
    for (int a = 0; a < hidden_count_; ++a)
      for (size_t b = 0; b < nb; ++b) sum += this->p(a, b, x);
    if (std::fabs(sum - 1.0) > tol)
      throw Error(ErrorCode::kInvalidArgument, "setting tuple not normalized");
  }
  for (double v : p_) {
    if (!(v >= -tol && v <= 1.0 + tol))
      throw Error(ErrorCode::kInvalidArgument, "probability entry outside [0,1]");
  }
}

double ExtendedBehavior::hidden_prior(int a) const {
  const size_t nb = static_cast<size_t>(1) << n_;
  double s = 0.0;
  for (size_t b = 0; b < nb; ++b) s += p(a, b, 0);
  return s;
}

Behavior ExtendedBehavior::marginal_behavior() const {
  if (n_ != 2)
    throw Error(ErrorCode::kInvalidArgument, "observed behavior defined for n=2 only");
  std::array<double, 16> q{};
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2) {
          double s = 0.0;
          for (int a = 0; a < hidden_count_; ++a)
            s += p(a, static_cast<unsigned>(b1 * 2 + b2),
                   static_cast<unsigned>(x1 * 2 + x2));
          q[((b1 * 2 + b2) * 2 + x1) * 2 + x2] = s;
        }
  return Behavior::from_tensor(q, 1e-9);
}

bool ExtendedBehavior::is_no_signalling(double tol) const {
  const unsigned nb = 1u << n_;
  for (int i = 0; i < n_; ++i) {
    const unsigned bit_i = 1u << (n_ - 1 - i);
    for (int a = 0; a < hidden_count_; ++a)
      for (int bi = 0; bi < 2; ++bi)
        for (unsigned x = 0; x < nb; ++x) {
          // p(a, b_i | x) must match the same quantity with any other
          // observer's setting toggled.
          double base = 0.0;
          for (unsigned b = 0; b < nb; ++b)
            if (((b & bit_i) != 0) == (bi == 1)) base += p(a, b, x);
          for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            const unsigned x2 = x ^ (1u << (n_ - 1 - j));
            double other = 0.0;
            for (unsigned b = 0; b < nb; ++b)
              if (((b & bit_i) != 0) == (bi == 1)) other += p(a, b, x2);
            if (std::fabs(base - other) > tol) return false;
          }
        }
  }
  return true;
}

bool ExtendedBehavior::is_no_superdeterministic(double tol) const {
  const unsigned nb = 1u << n_;
  for (int a = 0; a < hidden_count_; ++a) {
    double ref = 0.0;
    for (unsigned b = 0; b < nb; ++b) ref += p(a, b, 0);
    for (unsigned x = 1; x < nb; ++x) {
      double s = 0.0;
      for (unsigned b = 0; b < nb; ++b) s += p(a, b, x);
      if (std::fabs(s - ref) > tol) return false;
    }
  }
  return true;
}

double correlator(const Behavior& b, int x1, int x2) { return b.correlator(x1, x2); }

WitnessReport chsh_witness(const Behavior& b) {
  WitnessReport r;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) r.correlators[x1][x2] = b.correlator(x1, x2);
  r.chsh = r.correlators[0][0] + r.correlators[0][1] - r.correlators[1][0] +
           r.correlators[1][1];
  r.epsilon = (1.0 - r.correlators[0][0]) / 2.0;
  r.delta_ns_lower = std::max(r.epsilon / 2.0, (r.chsh - 2.0 + 2.0 * r.epsilon) / 4.0);
  return r;
}

double delta_objectivity_violation(const ExtendedBehavior& e) {
  if (e.hidden_count() != 2)
    throw Error(ErrorCode::kInvalidArgument,
                "objectivity is defined against a binary hidden outcome");
  const int n = e.observers();
  const unsigned nb = 1u << n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const unsigned bit_i = 1u << (n - 1 - i);
    double g = 0.0;
    for (int a = 0; a < 2; ++a)
      for (unsigned b = 0; b < nb; ++b)
        if ((((b & bit_i) != 0) ? 1 : 0) == a) g += e.p(a, b, 0);
    worst = std::max(worst, 1.0 - g);
  }
  return worst;
}

double global_agreement(const ExtendedBehavior& e) {
  if (e.hidden_count() != 2)
    throw Error(ErrorCode::kInvalidArgument,
                "global agreement is defined against a binary hidden outcome");
  const int n = e.observers();
  const unsigned all = (1u << n) - 1;
  return e.p(0, 0u, 0) + e.p(1, all, 0);
}

ExtendedBehavior make_tightness_distribution(int n, double delta) {
  if (delta < 0.0 || n * delta > 1.0)
    throw Error(ErrorCode::kInvalidArgument,
                "n*delta must lie in [0,1], got " + std::to_string(n * delta));
  const unsigned nb = 1u << n;
  std::vector<double> p(static_cast<size_t>(2) << (2 * n), 0.0);
  for (unsigned x = 0; x < nb; ++x) {
    // Starred observers are those measuring setting 0.
    int k = 0;
    for (int i = 0; i < n; ++i)
      if ((x & (1u << (n - 1 - i))) == 0) ++k;
    const double uniform_factor = std::pow(2.0, k - n);
    for (int a = 0; a < 2; ++a)
      for (unsigned b = 0; b < nb; ++b) {
        int disagreements = 0;
        for (int i = 0; i < n; ++i) {
          const unsigned bit = 1u << (n - 1 - i);
          if ((x & bit) != 0) continue;  // unstarred observer
          const int bi = ((b & bit) != 0) ? 1 : 0;
          if (bi != a) ++disagreements;
        }
        double block;
        if (disagreements == 0)
          block = (1.0 - k * delta) / 2.0;
        else if (disagreements == 1)
          block = delta / 2.0;
        else
          block = 0.0;
        p[(static_cast<size_t>(a) << (2 * n)) | (static_cast<size_t>(b) << n) | x] =
            block * uniform_factor;
      }
  }
  return ExtendedBehavior(n, 2, std::move(p));
}

Behavior make_pr_box() {
  std::array<double, 16> p{};
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
          if ((b1 ^ b2) == (x1 & (1 - x2)))
            p[((b1 * 2 + b2) * 2 + x1) * 2 + x2] = 0.5;
  return Behavior::from_tensor(p);
}

LhvReconstruction lhv_reconstruct(const Behavior& b, double tol, double recon_tol) {
  if (!b.is_no_signalling(std::max(tol, 1e-10)))
    throw Error(ErrorCode::kAgreementViolated, "input behavior is signalling");
  for (int x = 0; x < 2; ++x) {
    const double agree = b.p(0, 0, x, x) + b.p(1, 1, x, x);
    if (agree < 1.0 - tol)
      throw Error(ErrorCode::kAgreementViolated,
                  "equal-setting agreement " + std::to_string(agree) +
                      " below 1 - tol at x = " + std::to_string(x));
  }

  // Hidden pair distribution from the crossed setting (0,1).
  double pt[2][2];
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1) pt[a0][a1] = b.p(a0, a1, 0, 1);

  std::array<double, 16> q{};
  std::vector<double> ext(static_cast<size_t>(4) << 4, 0.0);
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1) {
      const int a[2] = {a0, a1};
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2) {
          const int b1 = a[x1];
          const int b2 = a[x2];
          q[((b1 * 2 + b2) * 2 + x1) * 2 + x2] += pt[a0][a1];
          const size_t idx = (static_cast<size_t>(a0 * 2 + a1) << 4) |
                             (static_cast<size_t>(b1 * 2 + b2) << 2) |
                             static_cast<size_t>(x1 * 2 + x2);
          ext[idx] += pt[a0][a1];
        }
    }

  LhvReconstruction out{ExtendedBehavior(2, 4, std::move(ext)),
                        Behavior::from_tensor(q, 1e-9), 0.0};
  for (int i = 0; i < 16; ++i)
    out.max_error = std::max(out.max_error,
                             std::fabs(out.reconstructed.tensor()[i] - b.tensor()[i]));
  if (out.max_error > recon_tol)
    throw Error(ErrorCode::kReconstructionMismatch,
                "deterministic-response model misses the behavior by " +
                    std::to_string(out.max_error));
  return out;
}

double delta_min_ns_lp(double chsh_target, double epsilon) {
  if (std::fabs(chsh_target) > 4.0 + 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "chsh target outside [-4,4]");
  if (epsilon < -1e-12 || epsilon > 0.5 + 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "epsilon outside [0, 1/2]");

  // Variables: p(a,b1,b2|x1,x2) flattened (32), then t, then two surplus
  // variables for the per-observer objectivity inequalities.
  const int kP = 32;
  const int kT = kP;
  const int kS1 = kP + 1;
  const int kS2 = kP + 2;
  const int num_vars = kP + 3;
  auto pidx = [](int a, int b1, int b2, int x1, int x2) {
    return (((a * 2 + b1) * 2 + b2) * 2 + x1) * 2 + x2;
  };

  lp::Problem prob;
  prob.num_vars = num_vars;
  prob.objective.assign(num_vars, 0.0);
  prob.objective[kT] = 1.0;
  auto add_row = [&](std::vector<double> row, double rhs) {
    prob.rows.push_back(std::move(row));
    prob.rhs.push_back(rhs);
  };

  // Normalization per setting pair.
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      std::vector<double> row(num_vars, 0.0);
      for (int a = 0; a < 2; ++a)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int b2 = 0; b2 < 2; ++b2) row[pidx(a, b1, b2, x1, x2)] = 1.0;
      add_row(std::move(row), 1.0);
    }

  // No-superdeterminism: p(a|x1,x2) equal across setting pairs.
  for (int a = 0; a < 2; ++a)
    for (int s = 1; s < 4; ++s) {
      const int x1 = s >> 1, x2 = s & 1;
      std::vector<double> row(num_vars, 0.0);
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          row[pidx(a, b1, b2, 0, 0)] += 1.0;
          row[pidx(a, b1, b2, x1, x2)] -= 1.0;
        }
      add_row(std::move(row), 0.0);
    }

  // No-signalling conditional on a, both directions.
  for (int a = 0; a < 2; ++a)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int x1 = 0; x1 < 2; ++x1) {
        std::vector<double> row(num_vars, 0.0);
        for (int b2 = 0; b2 < 2; ++b2) {
          row[pidx(a, b1, b2, x1, 0)] += 1.0;
          row[pidx(a, b1, b2, x1, 1)] -= 1.0;
        }
        add_row(std::move(row), 0.0);
      }
  for (int a = 0; a < 2; ++a)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int x2 = 0; x2 < 2; ++x2) {
        std::vector<double> row(num_vars, 0.0);
        for (int b1 = 0; b1 < 2; ++b1) {
          row[pidx(a, b1, b2, 0, x2)] += 1.0;
          row[pidx(a, b1, b2, 1, x2)] -= 1.0;
        }
        add_row(std::move(row), 0.0);
      }

  // Agreement E00 = 1 - 2*eps and witness value.
  {
    std::vector<double> row(num_vars, 0.0);
    for (int a = 0; a < 2; ++a)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          row[pidx(a, b1, b2, 0, 0)] = ((b1 + b2) % 2 == 0) ? 1.0 : -1.0;
    add_row(std::move(row), 1.0 - 2.0 * epsilon);
  }
  {
    std::vector<double> row(num_vars, 0.0);
    const double sign_for[2][2] = {{1.0, 1.0}, {-1.0, 1.0}};
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int a = 0; a < 2; ++a)
          for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2)
              row[pidx(a, b1, b2, x1, x2)] +=
                  sign_for[x1][x2] * (((b1 + b2) % 2 == 0) ? 1.0 : -1.0);
    add_row(std::move(row), chsh_target);
  }

  // Objectivity at the starred settings: g_i + t - s_i = 1 encodes
  // g_i >= 1 - t for both observers.
  {
    std::vector<double> row(num_vars, 0.0);
    for (int a = 0; a < 2; ++a)
      for (int b2 = 0; b2 < 2; ++b2) row[pidx(a, a, b2, 0, 0)] = 1.0;
    row[kT] = 1.0;
    row[kS1] = -1.0;
    add_row(std::move(row), 1.0);
  }
  {
    std::vector<double> row(num_vars, 0.0);
    for (int a = 0; a < 2; ++a)
      for (int b1 = 0; b1 < 2; ++b1) row[pidx(a, b1, a, 0, 0)] = 1.0;
    row[kT] = 1.0;
    row[kS2] = -1.0;
    add_row(std::move(row), 1.0);
  }

  lp::Solution sol = lp::solve(prob);
  return std::max(sol.objective, 0.0);
}

}  // namespace dw::behavior
