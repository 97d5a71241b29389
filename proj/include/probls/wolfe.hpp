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

// Probabilistic Wolfe conditions.
//
// Sufficient decrease and curvature are positivity constraints on
//
//   a_t = f(0) - f(t) + c1 t f'(0),     b_t = f'(t) - c2 f'(0),
//
// both linear in the jointly Gaussian (f(0), f'(0), f(t), f'(t)). The
// acceptance probability is the bivariate normal mass of {a > 0, b > 0}.
// The strong variant additionally caps b by a high-confidence bound on
// -2 c2 f'(0).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>

#include "probls/bvn.hpp"
#include "probls/errors.hpp"
#include "probls/gp_surrogate.hpp"

namespace probls {

struct WolfeParams {
  double c1 = 0.05;
  double c2 = 0.8;
  double threshold = 0.3;
  bool strong = true;

  void validate() const {
    detail::expects(0.0 <= c1 && c1 < c2 && c2 <= 1.0, "WolfeParams: need 0 <= c1 < c2 <= 1");
    detail::expects(0.0 < threshold && threshold <= 1.0, "WolfeParams: need 0 < threshold <= 1");
  }
};

struct WolfeBelief {
  double m_a = 0.0;
  double m_b = 0.0;
  double c_aa = 0.0;
  double c_bb = 0.0;
  double c_ab = 0.0;
  double rho = 0.0;
  double p_wolfe = 0.0;
  std::optional<double> b_bar;  // present for the strong variant
};

// Below this variance (in units of the prior scale theta2) a Wolfe quantity
// is treated as known exactly.
inline constexpr double kDegenerateVariance = 1e-10;
inline constexpr double kRhoClamp = 1e-12;

// Means and covariance of (a_t, b_t). p_wolfe is left at zero.
inline WolfeBelief wolfe_moments(const SurrogatePosterior& gp, double t,
                                 const WolfeParams& params) {
  detail::expects(t > 0.0, "wolfe_moments: t must be > 0");
  const double c1t = params.c1 * t;
  const double c2 = params.c2;

  const MeanDerivatives m0 = gp.mean_derivatives(0.0);
  const MeanDerivatives mt = gp.mean_derivatives(t);

  // Posterior (cross-)covariances; d marks a derivative in that slot.
  const double k00 = gp.covariance(0, 0, 0.0, 0.0);
  const double k_d00 = gp.covariance(0, 1, 0.0, 0.0);   // Cov(f(0), f'(0))
  const double dk_d00 = gp.covariance(1, 1, 0.0, 0.0);  // Var f'(0)
  const double ktt = gp.covariance(0, 0, t, t);
  const double k_dtt = gp.covariance(0, 1, t, t);       // Cov(f(t), f'(t))
  const double dk_dtt = gp.covariance(1, 1, t, t);      // Var f'(t)
  const double k0t = gp.covariance(0, 0, 0.0, t);       // Cov(f(0), f(t))
  const double dk0t = gp.covariance(1, 0, 0.0, t);      // Cov(f'(0), f(t))
  const double k_d0t = gp.covariance(0, 1, 0.0, t);     // Cov(f(0), f'(t))
  const double dk_d0t = gp.covariance(1, 1, 0.0, t);    // Cov(f'(0), f'(t))

  WolfeBelief out;
  out.m_a = m0.mu - mt.mu + c1t * m0.d1;
  out.m_b = mt.d1 - c2 * m0.d1;
  out.c_aa = k00 + c1t * c1t * dk_d00 + ktt + 2.0 * (c1t * (k_d00 - dk0t) - k0t);
  out.c_bb = c2 * c2 * dk_d00 - 2.0 * c2 * dk_d0t + dk_dtt;
  out.c_ab = -c2 * (k_d00 + c1t * dk_d00) + c2 * dk0t + k_d0t + c1t * dk_d0t - k_dtt;
  out.c_aa = std::max(out.c_aa, 0.0);
  out.c_bb = std::max(out.c_bb, 0.0);

  const double denom = std::sqrt(out.c_aa * out.c_bb);
  out.rho = denom > 0.0 ? std::clamp(out.c_ab / denom, -1.0, 1.0) : 0.0;
  if (params.strong) {
    out.b_bar = 2.0 * c2 * (std::abs(m0.d1) + 2.0 * std::sqrt(std::max(dk_d00, 0.0)));
  }
  return out;
}

// Acceptance probability for given moments. The b-interval is capped by
// belief.b_bar when present; variance_unit is the prior scale theta2.
inline double wolfe_probability(const WolfeBelief& belief, double variance_unit = 1.0) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!std::isfinite(belief.m_a) || !std::isfinite(belief.m_b) || !std::isfinite(belief.c_aa) ||
      !std::isfinite(belief.c_bb) || !std::isfinite(belief.rho)) {
    return 0.0;
  }
  const bool a_exact = belief.c_aa <= kDegenerateVariance * variance_unit;
  const bool b_exact = belief.c_bb <= kDegenerateVariance * variance_unit;
  const double b_upper = belief.b_bar.value_or(inf);

  if (a_exact && belief.m_a < 0.0) return 0.0;
  if (b_exact) {
    const bool b_ok = belief.m_b >= 0.0 && belief.m_b <= b_upper;
    if (!b_ok) return 0.0;
    if (a_exact) return 1.0;
    return phi(belief.m_a / std::sqrt(belief.c_aa));
  }

  const double sb = std::sqrt(belief.c_bb);
  const double b_low = -belief.m_b / sb;
  const double b_high = belief.b_bar ? (*belief.b_bar - belief.m_b) / sb : inf;
  if (!(b_low < b_high)) return 0.0;
  if (a_exact) return std::max(0.0, phi(b_high) - phi(b_low));

  double rho = belief.rho;
  if (rho >= 1.0 - kRhoClamp) {
    rho = 1.0;
  } else if (rho <= -1.0 + kRhoClamp) {
    rho = -1.0;
  }
  return bvn_prob({-belief.m_a / std::sqrt(belief.c_aa), inf, b_low, b_high, rho});
}

inline WolfeBelief wolfe_belief(const SurrogatePosterior& gp, double t,
                                const WolfeParams& params) {
  WolfeBelief belief = wolfe_moments(gp, t, params);
  belief.p_wolfe = wolfe_probability(belief, gp.params().theta2);
  return belief;
}

inline double p_wolfe(const SurrogatePosterior& gp, double t, const WolfeParams& params) {
  return wolfe_belief(gp, t, params).p_wolfe;
}

// Among evaluated nodes whose acceptance probability exceeds the threshold,
// the one with the lowest posterior mean.
inline std::optional<double> accept(std::span<const double> observed_ts,
                                    const SurrogatePosterior& gp,
                                    const WolfeParams& params) {
  std::optional<double> best;
  double best_mu = std::numeric_limits<double>::infinity();
  for (const double t : observed_ts) {
    if (t <= 0.0) continue;
    if (p_wolfe(gp, t, params) <= params.threshold) continue;
    const double mu = gp.mean(t);
    if (!best || mu < best_mu) {
      best = t;
      best_mu = mu;
    }
  }
  return best;
}

}  // namespace probls
