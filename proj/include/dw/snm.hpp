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
#include <functional>
#include <utility>
#include <vector>

namespace dw::snm {

/// Stochastic Nelder-Mead configuration. The reflection/expansion/
/// contraction coefficients follow the classic simplex method; the adaptive
/// random search (ARS) replaces the shrink step: with probability p_global a
/// fresh point is drawn uniformly inside the bounds, otherwise uniformly
/// inside a small ball around a randomly chosen simplex point.
struct SnmConfig {
  double alpha = 1.0;   // reflection, > 0
  double gamma = 2.0;   // expansion, > 1
  double beta = 0.5;    // contraction, in [0,1]
  double p_global = 0.1;
  // Local-search ball radius, measured in bound-width units: the ball is
  // { x : sum_i ((x_i - c_i)/width_i)^2 <= ars_radius^2 }.
  double ars_radius = 0.05;
  // ARS draws per invocation are capped; an uncapped "until improvement"
  // loop does not terminate on flat noisy objectives. Draws count against
  // max_evals.
  int ars_max_draws = 50;
  // When false the ARS step is replaced by the classic shrink toward the
  // best vertex (plain Nelder-Mead, used as a baseline and for noiseless
  // objectives).
  bool use_ars = true;

  std::vector<std::pair<double, double>> bounds;  // per-dimension [lo, hi]
  int max_evals = 350;
  std::uint64_t seed = 1;
  // Optional early stop: halt as soon as an evaluation falls below this.
  bool has_stop_below = false;
  double stop_below = 0.0;
};

enum class StepKind {
  kInit,
  kReflection,
  kExpansion,
  kContractExternal,
  kContractInternal,
  kArsGlobal,
  kArsLocal,
  kShrink,
};

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::kInit: return "init";
    case StepKind::kReflection: return "reflection";
    case StepKind::kExpansion: return "expansion";
    case StepKind::kContractExternal: return "contract_ext";
    case StepKind::kContractInternal: return "contract_int";
    case StepKind::kArsGlobal: return "ars_global";
    case StepKind::kArsLocal: return "ars_local";
    case StepKind::kShrink: return "shrink";
  }
  return "?";
}

/// One objective evaluation, with enough context to re-check the acceptance
/// rule that admitted (or rejected) the point.
struct EvalRecord {
  int index = 0;
  StepKind kind = StepKind::kInit;
  std::vector<double> x;
  double value = 0.0;
  // Simplex statistics at decision time (NaN for the initial points).
  double f_min = 0.0;
  double f_second = 0.0;
  double f_max = 0.0;
  bool accepted = false;
  std::vector<double> ars_center;  // filled for kArsLocal
};

struct SnmResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  std::vector<EvalRecord> trace;
  bool stopped_early = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// n stratified samples per dimension: each coordinate hits each of the n
/// equal-width strata exactly once.
std::vector<std::vector<double>> latin_hypercube(
    int dim, const std::vector<std::pair<double, double>>& bounds, int n,
    std::uint64_t seed);

SnmResult snm_minimize(const Objective& f, const SnmConfig& cfg);

// ---------------------------------------------------------------------------
// Black-box protocol layer.

/// Coincidence counts for one setting pair, outcome order
/// (b1,b2) = 00, 01, 10, 11. Real-valued so a noiseless box can report exact
/// expected counts.
using SettingCounts = std::array<double, 4>;

/// Minimal interface the two-stage protocol drives: eight control
/// parameters, the first four belonging to the x=0 measurements of the two
/// parties, the last four to the x=1 measurements.
class BlackBox {
 public:
  virtual ~BlackBox() = default;
  virtual SettingCounts measure(int x1, int x2, const std::array<double, 8>& params) = 0;
  virtual double shots_per_setting() const = 0;
};

double correlator_from_counts(const SettingCounts& c);

struct AbinitioConfig {
  SnmConfig stage1;                   // 4-dim, default budget 100
  SnmConfig stage2;                   // 4-dim, default budget 250
  double stage1_early_stop = 0.03;    // stop stage 1 once A < this
  double stage1_fail_threshold = 0.1; // STAGE1_FAILED above this at budget
};

/// Default waveplate-angle configuration: both stages over [0, pi]^4.
AbinitioConfig default_abinitio_config(std::uint64_t seed);

struct ProtocolEval {
  int index = 0;
  int stage = 0;  // 1 or 2; 0 marks the final verification measurement
  std::array<double, 8> params{};
  double objective = 0.0;
  // Counts per setting pair (x1,x2) in row-major order; settings not
  // measured in this evaluation stay zero.
  std::array<SettingCounts, 4> counts{};
};

struct AbinitioResult {
  double chsh = 0.0;           // |S| from the final verification counts
  double eps_achieved = 0.0;   // (1 - E00)/2 from the final counts
  std::array<double, 8> params{};
  double stage1_residual = 0.0;
  bool stage1_early_stopped = false;
  double sigma_chsh = 0.0;     // Poisson standard error of the final S
  std::array<double, 4> final_correlators{};  // E00 E01 E10 E11
  std::vector<ProtocolEval> trace;
};

/// Two-stage constrained protocol: stage 1 tunes the x=0 parameters to meet
/// the agreement target |E00 - (1-2*eps)|, stage 2 freezes them and tunes
/// the x=1 parameters to maximize |CHSH|. The reported numbers come from one
/// fresh verification measurement at the best parameters, so they carry no
/// optimizer selection bias. Throws STAGE1_FAILED when the agreement
/// residual stays above the failure threshold at budget.
AbinitioResult abinitio_protocol(BlackBox& box, double eps_target,
                                 const AbinitioConfig& cfg);

}  // namespace dw::snm
