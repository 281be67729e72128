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

#include "dw/photonics.hpp"

#include <algorithm>
#include <cmath>

#include "dw/error.hpp"

namespace dw::photonics {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ExperimentModel::validate() const {
  if (std::abs(delta) > 1.0 + 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "|delta| must be <= 1");
  if (counts_per_setting < 1)
    throw Error(ErrorCode::kInvalidArgument, "counts_per_setting must be >= 1");
  if (background < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "background rate must be >= 0");
}

CMatrix hwp_jones(double t) {
  const double c = std::cos(2.0 * t), s = std::sin(2.0 * t);
  return CMatrix(2, 2, {c, s, s, -c});
}

CMatrix qwp_jones(double t) {
  const double c = std::cos(t), s = std::sin(t);
  const CMatrix rot(2, 2, {c, -s, s, c});
  const CMatrix ret(2, 2, {1.0, 0.0, 0.0, cplx(0.0, 1.0)});
  const CMatrix rot_back(2, 2, {c, s, -s, c});
  return rot * ret * rot_back;
}

CMatrix analyzer_observable(double hwp, double qwp) {
  const CMatrix j = hwp_jones(hwp) * qwp_jones(qwp);
  return j.adjoint() * pauli_z() * j;
}

CMatrix final_state(const ExperimentModel& m) {
  m.validate();
  const double w = std::norm(m.delta);  // |delta|^2
  // Coherent part: (|HV> - e^{-i phase}|VH>)/sqrt(2); basis order HH HV VH VV.
  const cplx ph = std::exp(cplx(0.0, -m.phase));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const CMatrix singlet =
      CMatrix::ket({0.0, inv_sqrt2, -ph * inv_sqrt2, 0.0});
  CMatrix rho = CMatrix::projector(singlet) * cplx(w, 0.0);
  rho(1, 1) += (1.0 - w) * 0.5;
  rho(2, 2) += (1.0 - w) * 0.5;
  return rho;
}

CMatrix dephasing_channel(cplx alpha, cplx beta, cplx delta) {
  if (std::fabs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw Error(ErrorCode::kInvalidArgument, "input amplitudes not normalized");
  if (std::abs(delta) > 1.0 + 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "|delta| must be <= 1");
  const double gamma = std::sqrt(std::max(0.0, 1.0 - std::norm(delta)));
  // Basis order: (pol, A) = H0, H1, V0, V1.
  const CMatrix out = CMatrix::ket({alpha * delta, alpha * gamma, beta, 0.0});
  return CMatrix::projector(out);
}

std::array<double, 4> ideal_probabilities(const ExperimentModel& m,
                                          const WaveplateSetting& w) {
  const CMatrix rho = final_state(m);
  const CMatrix m1 = analyzer_observable(w.hwp1, w.qwp1);
  const CMatrix m2 = analyzer_observable(w.hwp2, w.qwp2);
  const CMatrix id = CMatrix::identity(2);
  std::array<double, 4> p{};
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2) {
      const CMatrix p1 = (b1 == 0) ? (id + m1) * cplx(0.5, 0.0)
                                   : (id - m1) * cplx(0.5, 0.0);
      const CMatrix p2 = (b2 == 0) ? (id + m2) * cplx(0.5, 0.0)
                                   : (id - m2) * cplx(0.5, 0.0);
      p[b1 * 2 + b2] = std::clamp(expectation(rho, kron(p1, p2)), 0.0, 1.0);
    }
  return p;
}

double ideal_expectation(const ExperimentModel& m, const WaveplateSetting& w) {
  const auto p = ideal_probabilities(m, w);
  return p[0] - p[1] - p[2] + p[3];
}

std::array<long long, 4> sample_counts(const ExperimentModel& m,
                                       const WaveplateSetting& w, Rng& rng) {
  const auto p = ideal_probabilities(m, w);
  std::array<long long, 4> counts{};
  for (int i = 0; i < 4; ++i)
    counts[i] = rng.poisson(m.counts_per_setting * p[i] + m.background);
  return counts;
}

double max_chsh_unconstrained(const ExperimentModel& m) {
  const CMatrix rho = final_state(m);
  const CMatrix sig[3] = {pauli_x(), pauli_y(), pauli_z()};
  // Correlation matrix T_ij and the top two singular values of T.
  std::vector<double> tt(9, 0.0);
  double t[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = expectation(rho, kron(sig[i], sig[j]));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += t[k][i] * t[k][j];
      tt[static_cast<size_t>(i) * 3 + j] = s;
    }
  auto eig = symmetric_eigen(tt, 3);  // ascending eigenvalues of T^T T
  const double s1 = std::max(0.0, eig.values[2]);
  const double s2 = std::max(0.0, eig.values[1]);
  return 2.0 * std::sqrt(s1 + s2);
}

SimulatedBox::SimulatedBox(const ExperimentModel& m, Mode mode)
    : model_(m), mode_(mode), rng_(m.seed) {
  model_.validate();
}

double SimulatedBox::shots_per_setting() const {
  return static_cast<double>(model_.counts_per_setting);
}

snm::SettingCounts SimulatedBox::measure(int x1, int x2,
                                         const std::array<double, 8>& params) {
  WaveplateSetting w;
  w.hwp1 = params[x1 == 0 ? 0 : 4];
  w.qwp1 = params[x1 == 0 ? 1 : 5];
  w.hwp2 = params[x2 == 0 ? 2 : 6];
  w.qwp2 = params[x2 == 0 ? 3 : 7];
  snm::SettingCounts out{};
  if (mode_ == Mode::kExact) {
    const auto p = ideal_probabilities(model_, w);
    // Detector remap: party 2 outcome flipped.
    out[0] = model_.counts_per_setting * p[1];
    out[1] = model_.counts_per_setting * p[0];
    out[2] = model_.counts_per_setting * p[3];
    out[3] = model_.counts_per_setting * p[2];
    return out;
  }
  const auto c = sample_counts(model_, w, rng_);
  out[0] = static_cast<double>(c[1]);
  out[1] = static_cast<double>(c[0]);
  out[2] = static_cast<double>(c[3]);
  out[3] = static_cast<double>(c[2]);
  return out;
}

TomographyOptimum tomography_optimal_chsh(const ExperimentModel& m,
                                          double eps_target, std::uint64_t seed) {
  m.validate();
  if (eps_target < 0.0 || eps_target > 0.5)
    throw Error(ErrorCode::kInvalidArgument, "eps target outside [0, 1/2]");
  const double c = 1.0 - 2.0 * eps_target;

  // Remapped correlators of the exact state: flip party 2.
  auto correlator = [&](double h1, double q1, double h2, double q2) {
    WaveplateSetting w{h1, q1, h2, q2};
    return -ideal_expectation(m, w);
  };
  auto chsh = [&](const std::vector<double>& v) {
    const double e00 = correlator(v[0], v[1], v[2], v[3]);
    const double e01 = correlator(v[0], v[1], v[6], v[7]);
    const double e10 = correlator(v[4], v[5], v[2], v[3]);
    const double e11 = correlator(v[4], v[5], v[6], v[7]);
    return std::array<double, 4>{e00, e01, e10, e11};
  };

  double w_pen = 100.0;
  std::vector<double> incumbent(8, kPi / 4.0);
  double incumbent_val = 1e9;
  Rng rng(seed);
  for (int round = 0; round < 7; ++round, w_pen *= 10.0) {
    auto obj = [&](const std::vector<double>& v) {
      const auto e = chsh(v);
      const double s = e[0] + e[1] - e[2] + e[3];
      return -std::fabs(s) + w_pen * (e[0] - c) * (e[0] - c);
    };
    snm::SnmConfig cfg;
    cfg.use_ars = false;
    cfg.seed = rng.next_u64();
    cfg.max_evals = 900;
    cfg.bounds.assign(8, {0.0, kPi});
    if (round > 0) {
      for (int k = 0; k < 8; ++k) {
        const double lo = std::max(0.0, incumbent[k] - 0.15);
        const double hi = std::min(kPi, incumbent[k] + 0.15);
        cfg.bounds[k] = {lo, std::max(hi, lo + 1e-9)};
      }
    }
    auto res = snm::snm_minimize(obj, cfg);
    // Re-score the incumbent under the current penalty weight before
    // comparing, weights grow between rounds.
    incumbent_val = obj(incumbent);
    if (res.best_value < incumbent_val || round == 0) {
      incumbent_val = res.best_value;
      incumbent = res.best_x;
    }
  }

  TomographyOptimum out;
  const auto e = chsh(incumbent);
  out.chsh = std::fabs(e[0] + e[1] - e[2] + e[3]);
  out.eps_achieved = (1.0 - e[0]) / 2.0;
  for (int k = 0; k < 8; ++k) out.params[k] = incumbent[k];
  return out;
}

}  // namespace dw::photonics
