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

#include "dw/snm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dw/error.hpp"
#include "dw/random.hpp"

namespace dw::snm {

namespace {

void validate_config(const SnmConfig& cfg) {
  if (cfg.alpha <= 0.0) throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (cfg.gamma <= 1.0) throw Error(ErrorCode::kInvalidArgument, "gamma must be > 1");
  if (cfg.beta < 0.0 || cfg.beta > 1.0)
    throw Error(ErrorCode::kInvalidArgument, "beta must lie in [0,1]");
  if (cfg.p_global < 0.0 || cfg.p_global > 1.0)
    throw Error(ErrorCode::kInvalidArgument, "p_global must lie in [0,1]");
  if (cfg.ars_radius <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, "ars_radius must be > 0");
  if (cfg.bounds.empty())
    throw Error(ErrorCode::kInvalidArgument, "bounds must be nonempty");
  for (auto [lo, hi] : cfg.bounds)
    if (!(lo < hi)) throw Error(ErrorCode::kInvalidArgument, "empty bound interval");
  if (cfg.max_evals < static_cast<int>(cfg.bounds.size()) + 1)
    throw Error(ErrorCode::kInvalidArgument, "budget below initial simplex size");
}

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace

std::vector<std::vector<double>> latin_hypercube(
    int dim, const std::vector<std::pair<double, double>>& bounds, int n,
    std::uint64_t seed) {
  if (dim < 1 || static_cast<int>(bounds.size()) != dim)
    throw Error(ErrorCode::kInvalidArgument, "bounds must match dimension");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  std::vector<int> strata(n);
  for (int d = 0; d < dim; ++d) {
    for (int i = 0; i < n; ++i) strata[i] = i;
    for (int i = n - 1; i > 0; --i)
      std::swap(strata[i], strata[rng.uniform_index(static_cast<std::uint64_t>(i) + 1)]);
    const auto [lo, hi] = bounds[d];
    const double w = (hi - lo) / n;
    for (int i = 0; i < n; ++i)
      pts[i][d] = lo + w * (strata[i] + rng.uniform());
  }
  return pts;
}

SnmResult snm_minimize(const Objective& f, const SnmConfig& cfg) {
  validate_config(cfg);
  const int d = static_cast<int>(cfg.bounds.size());
  Rng rng(cfg.seed);
  SnmResult result;
  result.best_value = std::numeric_limits<double>::infinity();
  std::vector<Vertex> simplex;
  int evals = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto evaluate = [&](const std::vector<double>& x, StepKind kind, double fmin,
                      double fsecond, double fmax,
                      const std::vector<double>* center) -> double {
    const double v = f(x);
    EvalRecord rec;
    rec.index = evals++;
    rec.kind = kind;
    rec.x = x;
    rec.value = v;
    rec.f_min = fmin;
    rec.f_second = fsecond;
    rec.f_max = fmax;
    if (center) rec.ars_center = *center;
    result.trace.push_back(std::move(rec));
    if (v < result.best_value) {
      result.best_value = v;
      result.best_x = x;
    }
    return v;
  };
  auto budget_left = [&] { return evals < cfg.max_evals; };
  auto should_stop = [&] {
    return cfg.has_stop_below && result.best_value < cfg.stop_below;
  };

  // Step 0: initial simplex from Latin hypercube samples.
  for (auto& x : latin_hypercube(d, cfg.bounds, d + 1, rng.next_u64())) {
    if (!budget_left() || should_stop()) break;
    double v = evaluate(x, StepKind::kInit, nan, nan, nan, nullptr);
    result.trace.back().accepted = true;
    simplex.push_back({std::move(x), v});
  }

  while (budget_left() && !should_stop() && simplex.size() >= 2) {
    // Step 1: drop the worst point while the simplex is oversized.
    while (static_cast<int>(simplex.size()) > d + 1) {
      auto worst = std::max_element(
          simplex.begin(), simplex.end(),
          [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      simplex.erase(worst);
    }
    // Step 2: rank.
    int i_max = 0, i_min = 0;
    for (size_t i = 1; i < simplex.size(); ++i) {
      if (simplex[i].f > simplex[i_max].f) i_max = static_cast<int>(i);
      if (simplex[i].f < simplex[i_min].f) i_min = static_cast<int>(i);
    }
    double f_second = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < simplex.size(); ++i)
      if (static_cast<int>(i) != i_max) f_second = std::max(f_second, simplex[i].f);
    const double f_max = simplex[i_max].f;
    const double f_min = simplex[i_min].f;

    // Step 3: barycenter of everything but the worst point, then reflect.
    std::vector<double> xbar(d, 0.0);
    for (size_t i = 0; i < simplex.size(); ++i) {
      if (static_cast<int>(i) == i_max) continue;
      for (int k = 0; k < d; ++k) xbar[k] += simplex[i].x[k];
    }
    for (int k = 0; k < d; ++k) xbar[k] /= d;
    std::vector<double> xref(d);
    for (int k = 0; k < d; ++k)
      xref[k] = (1.0 + cfg.alpha) * xbar[k] - cfg.alpha * simplex[i_max].x[k];

    if (!budget_left()) break;
    const double f_ref =
        evaluate(xref, StepKind::kReflection, f_min, f_second, f_max, nullptr);

    if (f_min <= f_ref && f_ref < f_second) {
      result.trace.back().accepted = true;
      simplex.push_back({std::move(xref), f_ref});
      continue;
    }
    if (f_ref <= f_min) {
      // 3a: expansion.
      if (!budget_left()) break;
      std::vector<double> xexp(d);
      for (int k = 0; k < d; ++k)
        xexp[k] = (1.0 - cfg.gamma) * xbar[k] + cfg.gamma * xref[k];
      const double f_exp =
          evaluate(xexp, StepKind::kExpansion, f_min, f_second, f_max, nullptr);
      if (f_exp < f_ref) {
        result.trace.back().accepted = true;
        simplex.push_back({std::move(xexp), f_exp});
      } else {
        result.trace[result.trace.size() - 2].accepted = true;
        simplex.push_back({std::move(xref), f_ref});
      }
      continue;
    }

    bool contracted = false;
    if (f_second <= f_ref && f_ref < f_max) {
      // 3b: external contraction.
      if (!budget_left()) break;
      std::vector<double> xc(d);
      for (int k = 0; k < d; ++k)
        xc[k] = (1.0 - cfg.beta) * xbar[k] + cfg.beta * xref[k];
      const double f_c =
          evaluate(xc, StepKind::kContractExternal, f_min, f_second, f_max, nullptr);
      if (f_c <= f_ref) {
        result.trace.back().accepted = true;
        simplex.push_back({std::move(xc), f_c});
        contracted = true;
      }
    } else {
      // 3c: internal contraction (f_ref >= f_max).
      if (!budget_left()) break;
      std::vector<double> xc(d);
      for (int k = 0; k < d; ++k)
        xc[k] = (1.0 - cfg.beta) * xbar[k] + cfg.beta * simplex[i_max].x[k];
      const double f_c =
          evaluate(xc, StepKind::kContractInternal, f_min, f_second, f_max, nullptr);
      if (f_c <= f_max) {
        result.trace.back().accepted = true;
        simplex.push_back({std::move(xc), f_c});
        contracted = true;
      }
    }
    if (contracted) continue;

    // Step 4: contraction failed.
    if (!cfg.use_ars) {
      // Classic shrink toward the incumbent best vertex.
      const std::vector<double> anchor = simplex[i_min].x;
      for (size_t i = 0; i < simplex.size() && budget_left(); ++i) {
        if (static_cast<int>(i) == i_min) continue;
        for (int k = 0; k < d; ++k)
          simplex[i].x[k] = anchor[k] + 0.5 * (simplex[i].x[k] - anchor[k]);
        simplex[i].f =
            evaluate(simplex[i].x, StepKind::kShrink, f_min, f_second, f_max, nullptr);
        result.trace.back().accepted = true;
      }
      continue;
    }
    for (int draw = 0; draw < cfg.ars_max_draws && budget_left(); ++draw) {
      std::vector<double> xr(d);
      StepKind kind;
      std::vector<double> center;
      if (rng.uniform() < cfg.p_global) {
        kind = StepKind::kArsGlobal;
        for (int k = 0; k < d; ++k)
          xr[k] = rng.uniform(cfg.bounds[k].first, cfg.bounds[k].second);
      } else {
        kind = StepKind::kArsLocal;
        center = simplex[rng.uniform_index(simplex.size())].x;
        // Uniform draw in the width-scaled ball around the chosen vertex,
        // clamped to the box (clamping cannot leave the ball).
        std::vector<double> dir(d);
        double norm = 0.0;
        for (int k = 0; k < d; ++k) {
          dir[k] = rng.normal();
          norm += dir[k] * dir[k];
        }
        norm = std::sqrt(std::max(norm, 1e-300));
        const double r = cfg.ars_radius * std::pow(rng.uniform(), 1.0 / d);
        for (int k = 0; k < d; ++k) {
          const double width = cfg.bounds[k].second - cfg.bounds[k].first;
          double v = center[k] + width * r * dir[k] / norm;
          v = std::clamp(v, cfg.bounds[k].first, cfg.bounds[k].second);
          xr[k] = v;
        }
      }
      const double f_r = evaluate(xr, kind, f_min, f_second, f_max,
                                  center.empty() ? nullptr : &center);
      if (f_r < f_max) {
        result.trace.back().accepted = true;
        simplex.push_back({std::move(xr), f_r});
        break;
      }
    }
    // If no draw was admitted the simplex is unchanged; the next iteration
    // re-evaluates a fresh reflection (noisy objectives) or retries ARS.
  }

  result.stopped_early = should_stop();
  return result;
}

double correlator_from_counts(const SettingCounts& c) {
  const double total = c[0] + c[1] + c[2] + c[3];
  if (total <= 0.0) return 0.0;
  return (c[0] - c[1] - c[2] + c[3]) / total;
}

AbinitioConfig default_abinitio_config(std::uint64_t seed) {
  AbinitioConfig cfg;
  const double pi = 3.14159265358979323846;
  cfg.stage1.bounds.assign(4, {0.0, pi});
  cfg.stage1.max_evals = 100;
  cfg.stage1.seed = seed;
  cfg.stage2.bounds.assign(4, {0.0, pi});
  cfg.stage2.max_evals = 250;
  cfg.stage2.seed = seed ^ 0x5bf0633221ULL;
  return cfg;
}

AbinitioResult abinitio_protocol(BlackBox& box, double eps_target,
                                 const AbinitioConfig& cfg) {
  if (eps_target < 0.0 || eps_target > 0.5)
    throw Error(ErrorCode::kInvalidArgument, "eps target outside [0, 1/2]");
  AbinitioResult out;
  int eval_counter = 0;
  const double agreement_target = 1.0 - 2.0 * eps_target;

  std::array<double, 8> params{};
  for (int k = 0; k < 4; ++k) {
    params[k] = 0.5 * (cfg.stage1.bounds[k].first + cfg.stage1.bounds[k].second);
    params[4 + k] = 0.5 * (cfg.stage2.bounds[k].first + cfg.stage2.bounds[k].second);
  }

  // Stage 1: agreement residual A = |E00 - (1-2 eps)| over the x=0 block.
  SnmConfig s1 = cfg.stage1;
  s1.has_stop_below = true;
  s1.stop_below = cfg.stage1_early_stop;
  auto stage1_obj = [&](const std::vector<double>& v) {
    std::array<double, 8> p = params;
    for (int k = 0; k < 4; ++k) p[k] = v[k];
    const SettingCounts c = box.measure(0, 0, p);
    const double e00 = correlator_from_counts(c);
    ProtocolEval ev;
    ev.index = eval_counter++;
    ev.stage = 1;
    ev.params = p;
    ev.objective = std::fabs(e00 - agreement_target);
    ev.counts[0] = c;
    out.trace.push_back(std::move(ev));
    return out.trace.back().objective;
  };
  SnmResult r1 = snm_minimize(stage1_obj, s1);
  out.stage1_residual = r1.best_value;
  out.stage1_early_stopped = r1.stopped_early;
  if (r1.best_value > cfg.stage1_fail_threshold)
    throw Error(ErrorCode::kStage1Failed,
                "agreement residual " + std::to_string(r1.best_value) +
                    " above threshold at budget");
  for (int k = 0; k < 4; ++k) params[k] = r1.best_x[k];

  // Stage 2: S = -|CHSH| over the x=1 block, x=0 parameters frozen.
  auto measure_all = [&](const std::array<double, 8>& p,
                         std::array<SettingCounts, 4>& counts) {
    std::array<double, 4> e{};
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2) {
        counts[x1 * 2 + x2] = box.measure(x1, x2, p);
        e[x1 * 2 + x2] = correlator_from_counts(counts[x1 * 2 + x2]);
      }
    return e;
  };
  auto chsh_of = [](const std::array<double, 4>& e) {
    return e[0] + e[1] - e[2] + e[3];
  };
  auto stage2_obj = [&](const std::vector<double>& v) {
    std::array<double, 8> p = params;
    for (int k = 0; k < 4; ++k) p[4 + k] = v[k];
    ProtocolEval ev;
    ev.index = eval_counter++;
    ev.stage = 2;
    ev.params = p;
    const auto e = measure_all(p, ev.counts);
    ev.objective = -std::fabs(chsh_of(e));
    out.trace.push_back(std::move(ev));
    return out.trace.back().objective;
  };
  SnmResult r2 = snm_minimize(stage2_obj, cfg.stage2);
  for (int k = 0; k < 4; ++k) params[4 + k] = r2.best_x[k];

  // Fresh verification measurement at the selected parameters; reporting
  // from a new draw avoids the optimizer's selection bias.
  ProtocolEval fin;
  fin.index = eval_counter++;
  fin.stage = 0;
  fin.params = params;
  const auto e = measure_all(params, fin.counts);
  fin.objective = -std::fabs(chsh_of(e));
  double sigma2 = 0.0;
  for (int s = 0; s < 4; ++s) {
    const auto& c = fin.counts[s];
    const double total = c[0] + c[1] + c[2] + c[3];
    if (total > 0.0)
      sigma2 += std::max(0.0, 1.0 - e[s] * e[s]) / total;
  }
  out.trace.push_back(fin);
  out.params = params;
  out.final_correlators = e;
  out.chsh = std::fabs(chsh_of(e));
  out.eps_achieved = (1.0 - e[0]) / 2.0;
  out.sigma_chsh = std::sqrt(sigma2);
  return out;
}

}  // namespace dw::snm
