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

// Expected improvement weighted by the Wolfe probability.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "probls/bvn.hpp"
#include "probls/candidates.hpp"
#include "probls/errors.hpp"
#include "probls/gp_surrogate.hpp"
#include "probls/wolfe.hpp"

namespace probls {

// E[max(0, eta - f)] for f ~ N(mu, var).
inline double expected_improvement(double mu, double var, double eta) {
  detail::expects(var >= 0.0, "expected_improvement: var must be >= 0");
  const double gap = eta - mu;
  if (var == 0.0) return std::max(0.0, gap);
  const double sd = std::sqrt(var);
  const double z = gap / sd;
  return std::max(0.0, gap * phi(z) + sd * normal_pdf(z));
}

// Lowest posterior mean over the evaluated locations, t = 0 included.
inline double incumbent(const SurrogatePosterior& gp) {
  double eta = std::numeric_limits<double>::infinity();
  for (const auto& o : gp.observations()) eta = std::min(eta, gp.mean(o.t));
  return eta;
}

inline double acquisition_score(const SurrogatePosterior& gp, double t, double eta,
                                const WolfeParams& params) {
  const double var = std::max(gp.variance(t), 0.0);
  return expected_improvement(gp.mean(t), var, eta) * p_wolfe(gp, t, params);
}

// Candidate with the largest EI * p_wolfe; ties go to the smaller t.
inline double select_next(const CandidateList& candidates, const SurrogatePosterior& gp,
                          const WolfeParams& params) {
  const std::vector<double> ts = candidates.all();
  const double eta = incumbent(gp);
  double best_t = ts.front();
  double best_score = -1.0;
  for (const double t : ts) {
    const double score = acquisition_score(gp, t, eta, params);
    if (score > best_score || (score == best_score && t < best_t)) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace probls
