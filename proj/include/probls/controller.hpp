/* Copyright 2026 The probls Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// One probabilistic line search, driven step by step by the caller.
//
//   LineSearch search(f0, df0, sigma_f, sigma_df);
//   double t = search.pending();
//   for (;;) {
//     auto [y, dy] = evaluate(t);
//     auto decision = search.step(t, y, dy);
//     if (auto* out = std::get_if<SearchOutcome>(&decision)) break;
//     t = std::get<Evaluate>(decision).t;
//   }
//
// All values handed to the search are raw; the search works in the frame
// where y(0) = 0 and y'(0) = -1, which removes the prior scale.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "probls/acquisition.hpp"
#include "probls/candidates.hpp"
#include "probls/errors.hpp"
#include "probls/gp_surrogate.hpp"
#include "probls/wolfe.hpp"

namespace probls {

inline constexpr int kDefaultSearchBudget = 7;
inline constexpr double kStepGrowth = 1.3;

struct SearchFrame {
  double f0_raw = 0.0;
  double df0_raw = -1.0;
  double scale = 1.0;
  double sigma_f_scaled = 0.0;
  double sigma_df_scaled = 0.0;

  static SearchFrame make(double f0_raw, double df0_raw, double sigma_f_raw,
                          double sigma_df_raw) {
    if (!(df0_raw < 0.0)) {
      throw NotDescentDirection("line search needs a negative initial slope");
    }
    detail::expects(sigma_f_raw >= 0.0 && sigma_df_raw >= 0.0,
                    "SearchFrame: noise levels must be >= 0");
    const double scale = std::abs(df0_raw);
    const SearchFrame frame{f0_raw, df0_raw, scale, sigma_f_raw / scale, sigma_df_raw / scale};
    if (!std::isnormal(scale) || !std::isfinite(f0_raw) ||
        !std::isfinite(frame.sigma_f_scaled) || !std::isfinite(frame.sigma_df_scaled)) {
      throw NotDescentDirection("initial slope too small to standardize the search");
    }
    return frame;
  }

  double scaled_y(double y_raw) const { return (y_raw - f0_raw) / scale; }
  double scaled_dy(double dy_raw) const { return dy_raw / scale; }
};

struct SearchOutcome {
  double t_accepted = 0.0;
  double accepted_raw_y = 0.0;
  double accepted_raw_dy = 0.0;
  int evals = 0;
  bool forced = false;
  double p_wolfe = 0.0;      // at the accepted node
  double next_alpha0 = 0.0;  // filled in by the caller via propagate()
};

struct Evaluate {
  double t = 1.0;
};

using SearchDecision = std::variant<Evaluate, SearchOutcome>;

class LineSearch {
 public:
  LineSearch(double f0_raw, double df0_raw, double sigma_f_raw, double sigma_df_raw,
             WolfeParams wolfe = {}, int budget = kDefaultSearchBudget,
             KernelParams kernel = {})
      : frame_(SearchFrame::make(f0_raw, df0_raw, sigma_f_raw, sigma_df_raw)),
        gp_(kernel),
        wolfe_(wolfe),
        budget_(budget) {
    wolfe_.validate();
    detail::expects(budget >= 1, "LineSearch: budget must be >= 1");
    gp_.add({0.0, 0.0, -1.0, sq(frame_.sigma_f_scaled), sq(frame_.sigma_df_scaled)});
    proposals_.push_back(pending_);
  }

  const SearchFrame& frame() const noexcept { return frame_; }
  const SurrogatePosterior& posterior() const noexcept { return gp_; }
  const WolfeParams& wolfe() const noexcept { return wolfe_; }
  int evals_used() const noexcept { return evals_; }
  int budget() const noexcept { return budget_; }
  double alpha_ext() const noexcept { return alpha_ext_; }
  bool finished() const noexcept { return finished_; }

  // Scaled location the caller must evaluate next.
  double pending() const noexcept { return pending_; }

  // Every location proposed so far, in order (the first is always 1).
  const std::vector<double>& proposals() const noexcept { return proposals_; }

  SearchDecision step(double t, double y_raw, double dy_raw) {
    detail::expects(!finished_, "LineSearch::step: search already finished");
    detail::expects(std::abs(t - pending_) <= 1e-12 * std::max(1.0, pending_),
                    "LineSearch::step: t differs from the pending proposal");
    t = pending_;
    ++evals_;
    evaluated_.push_back({t, y_raw, dy_raw});

    double y = frame_.scaled_y(y_raw);
    double dy = frame_.scaled_dy(dy_raw);
    if (!std::isfinite(y) || !std::isfinite(dy)) {
      // Stand-in for an exploded evaluation: decisively worse than t = 0.
      y = 100.0;
      dy = 10.0;
      evaluated_.back().finite = false;
    }

    try {
      gp_.add({t, y, dy, sq(frame_.sigma_f_scaled), sq(frame_.sigma_df_scaled)});
    } catch (const DegenerateSurrogate&) {
      return finish_forced();
    }

    if (const auto accepted = probls::accept(evaluated_ts(), gp_, wolfe_)) {
      return finish(*accepted, false);
    }
    if (evals_ >= budget_) return finish_forced();

    const CandidateList candidates = generate_candidates(gp_, alpha_ext_);
    const double next = select_next(candidates, gp_, wolfe_);
    if (next == candidates.extrapolation_point) alpha_ext_ *= 2.0;
    pending_ = next;
    proposals_.push_back(next);
    return Evaluate{next};
  }

 private:
  struct Evaluated {
    double t;
    double y_raw;
    double dy_raw;
    bool finite = true;
  };

  static double sq(double v) { return v * v; }

  std::vector<double> evaluated_ts() const {
    std::vector<double> ts;
    for (const auto& e : evaluated_) {
      if (e.finite && gp_contains(e.t)) ts.push_back(e.t);
    }
    return ts;
  }

  bool gp_contains(double t) const {
    for (const auto& o : gp_.observations()) {
      if (o.t == t) return true;
    }
    return false;
  }

  SearchOutcome finish(double t, bool forced) {
    finished_ = true;
    SearchOutcome out;
    out.t_accepted = t;
    out.evals = evals_;
    out.forced = forced;
    for (const auto& e : evaluated_) {
      if (e.t == t) {
        out.accepted_raw_y = e.y_raw;
        out.accepted_raw_dy = e.dy_raw;
      }
    }
    out.p_wolfe = gp_contains(t) ? p_wolfe(gp_, t, wolfe_) : 0.0;
    return out;
  }

  // Budget exhausted or surrogate broken: the evaluated node with the lowest
  // posterior mean, or the latest evaluation if none is usable.
  SearchOutcome finish_forced() {
    std::optional<double> best;
    double best_mu = std::numeric_limits<double>::infinity();
    for (const double t : evaluated_ts()) {
      const double mu = gp_.mean(t);
      if (!best || mu < best_mu) {
        best = t;
        best_mu = mu;
      }
    }
    return finish(best.value_or(evaluated_.back().t), true);
  }

  SearchFrame frame_;
  SurrogatePosterior gp_;
  WolfeParams wolfe_;
  int budget_;
  int evals_ = 0;
  double alpha_ext_ = 1.0;
  double pending_ = 1.0;
  bool finished_ = false;
  std::vector<Evaluated> evaluated_;
  std::vector<double> proposals_;
};

// Bounds on the propagated step scale. They only guard against numerical
// blow-up; they are not a convergence schedule.
struct StepSizeBounds {
  double alpha_min = 0.0;
  double alpha_max = std::numeric_limits<double>::infinity();

  static StepSizeBounds relative_to(double alpha_init, double low = 1e-10,
                                    double high = 1e10) {
    return {low * alpha_init, high * alpha_init};
  }
};

// Step scale for the next search: 1.3 times the step just taken.
inline double propagate(double t_accepted, double alpha0_prev,
                        const StepSizeBounds& bounds = {}) {
  detail::expects(t_accepted > 0.0, "propagate: t_accepted must be > 0");
  return std::clamp(kStepGrowth * t_accepted * alpha0_prev, bounds.alpha_min,
                    bounds.alpha_max);
}

// Runs a whole search against eval(t) -> std::pair<double, double> of raw
// (value, projected gradient) at scaled location t.
template <class Eval>
SearchOutcome run_line_search(Eval&& eval, double f0_raw, double df0_raw,
                              double sigma_f_raw, double sigma_df_raw,
                              const WolfeParams& wolfe = {},
                              int budget = kDefaultSearchBudget,
                              std::vector<double>* proposals = nullptr) {
  LineSearch search(f0_raw, df0_raw, sigma_f_raw, sigma_df_raw, wolfe, budget);
  double t = search.pending();
  for (;;) {
    const auto [y, dy] = eval(t);
    SearchDecision decision = search.step(t, y, dy);
    if (auto* out = std::get_if<SearchOutcome>(&decision)) {
      if (proposals) *proposals = search.proposals();
      return *out;
    }
    t = std::get<Evaluate>(decision).t;
  }
}

}  // namespace probls
