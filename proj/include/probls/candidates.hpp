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

// Analytic enumeration of evaluation candidates from the piecewise-cubic
// posterior mean: one local minimizer per cell at most, plus an
// extrapolation node past the largest evaluated location.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "probls/errors.hpp"
#include "probls/gp_surrogate.hpp"

namespace probls {

inline constexpr double kEdgeTolerance = 1e-10;

struct CandidateList {
  std::vector<double> points;  // interior minimizers, ascending
  double extrapolation_point = 1.0;
  double alpha_ext = 1.0;

  // Interior points followed by the extrapolation node.
  std::vector<double> all() const {
    std::vector<double> out = points;
    out.push_back(extrapolation_point);
    return out;
  }
};

// Minimizer of the cubic on (t_left, t_right] whose derivative is
//   mu'(t) = d1 + d2 s + d3 s^2 / 2,  s = t - t_left,
// given the right-sided derivatives d1, d2, d3 at t_left. A stationary point
// within kEdgeTolerance of t_left belongs to the previous cell and is not
// reported; one within kEdgeTolerance of t_right is.
inline std::optional<double> cell_minimum(double d1, double d2, double d3,
                                          double t_left, double t_right) {
  detail::expects(t_left < t_right, "cell_minimum: empty cell");
  const double width = t_right - t_left;
  const double a = 0.5 * d3;
  const double b = d2;
  const double c = d1;

  double s = 0.0;
  const double scale = std::abs(b) + std::abs(c) / width;
  if (std::abs(a) * width <= 1e-14 * scale || a == 0.0) {
    // mu' is linear (or constant); a minimum needs an upward crossing.
    if (b <= 0.0) return std::nullopt;
    s = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) return std::nullopt;  // no crossing with mu'' > 0
    const double root = std::sqrt(disc);
    // Root with mu''(s) = b + 2 a s = +sqrt(disc), in cancellation-free form.
    s = b >= 0.0 ? -2.0 * c / (b + root) : (root - b) / (2.0 * a);
  }
  if (!(s > kEdgeTolerance && s <= width + kEdgeTolerance)) return std::nullopt;
  return t_left + std::min(s, width);
}

// Local minimizers of the posterior mean over [0, t_max] plus the node
// t_max + alpha_ext. Minimizers that coincide with an evaluated location or
// sit at t <= kEdgeTolerance are dropped.
inline CandidateList generate_candidates(const SurrogatePosterior& posterior,
                                         double alpha_ext) {
  detail::expects(!posterior.empty(), "generate_candidates: empty posterior");
  detail::expects(alpha_ext > 0.0, "generate_candidates: alpha_ext must be > 0");
  CandidateList out;
  out.alpha_ext = alpha_ext;
  out.extrapolation_point = posterior.t_max() + alpha_ext;

  const auto obs = posterior.observations();
  for (std::size_t i = 1; i < obs.size(); ++i) {
    const double left = obs[i - 1].t;
    const double right = obs[i].t;
    const MeanDerivatives md = posterior.mean_derivatives(left);
    const auto t = cell_minimum(md.d1, md.d2, md.d3, left, right);
    if (!t || *t <= kEdgeTolerance) continue;
    bool duplicate = false;
    for (const auto& o : obs) {
      if (std::abs(o.t - *t) <= kDuplicateTolerance) duplicate = true;
    }
    if (!duplicate) out.points.push_back(*t);
  }
  return out;
}

}  // namespace probls
