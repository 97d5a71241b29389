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

// Standard normal and bivariate normal probabilities.
//
// The upper orthant probability follows the Drezner-Wesolowsky scheme as
// refined by Genz: Gauss-Legendre quadrature of Plackett's identity for
// |rho| < 0.925, and an asymptotic expansion plus quadrature of the
// remainder close to |rho| = 1. The quadrature order grows with |rho|
// (6, 12 or 20 nodes), giving roughly double precision throughout.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <initializer_list>
#include <span>

#include "probls/errors.hpp"

namespace probls {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Standard normal CDF.
inline double phi(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

struct BvnQuery {
  double a_low = -std::numeric_limits<double>::infinity();
  double a_high = std::numeric_limits<double>::infinity();
  double b_low = -std::numeric_limits<double>::infinity();
  double b_high = std::numeric_limits<double>::infinity();
  double rho = 0.0;
};

namespace detail {

struct GaussLegendreHalf {
  std::span<const double> nodes;
  std::span<const double> weights;
};

inline constexpr std::array<double, 3> kGl6Nodes{0.9324695142031521, 0.6612093864662645,
                                                 0.2386191860831969};
inline constexpr std::array<double, 3> kGl6Weights{0.1713244923791697, 0.3607615730481389,
                                                   0.4679139345726914};
inline constexpr std::array<double, 6> kGl12Nodes{0.9815606342467192, 0.9041172563704748,
                                                  0.7699026741943047, 0.5873179542866175,
                                                  0.3678314989981802, 0.1252334085114689};
inline constexpr std::array<double, 6> kGl12Weights{0.04717533638651202, 0.1069393259953189,
                                                    0.1600783285433461, 0.2031674267230656,
                                                    0.2334925365383546, 0.2491470458134027};
inline constexpr std::array<double, 10> kGl20Nodes{
    0.9931285991850949, 0.9639719272779138, 0.9122344282513258, 0.8391169718222188,
    0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154195,
    0.2277858511416451, 0.07652652113349734};
inline constexpr std::array<double, 10> kGl20Weights{
    0.01761400713915327, 0.04060142980038622, 0.06267204833410944, 0.08327674157670467,
    0.1019301198172403,  0.1181945319615182,  0.1316886384491765,  0.1420961093183819,
    0.1491729864726037,  0.1527533871307258};

inline GaussLegendreHalf quadrature_for(double abs_rho) {
  if (abs_rho < 0.3) return {kGl6Nodes, kGl6Weights};
  if (abs_rho < 0.75) return {kGl12Nodes, kGl12Weights};
  return {kGl20Nodes, kGl20Weights};
}

// P(X > h, Y > k) for the standard bivariate normal with |r| < 1.
inline double bvn_upper_interior(double h, double k, double r) {
  const auto [nodes, weights] = quadrature_for(std::abs(r));
  const double two_pi = 2.0 * std::numbers::pi;
  double hk = h * k;
  double sum = 0.0;

  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double sn = std::sin(asr * (1.0 - nodes[i]) / 2.0);
      sum += weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (1.0 + nodes[i]) / 2.0);
      sum += weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    return sum * asr / (2.0 * two_pi) + phi(-h) * phi(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  const double as = (1.0 - r) * (1.0 + r);
  double a = std::sqrt(as);
  const double bs = (h - k) * (h - k);
  const double c = (4.0 - hk) / 8.0;
  const double d = (12.0 - hk) / 16.0;
  double asr = -(bs / as + hk) / 2.0;
  if (asr > -100.0) {
    sum = a * std::exp(asr) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
  }
  if (hk > -100.0) {
    const double b = std::sqrt(bs);
    const double sp = std::sqrt(two_pi) * phi(-b / a);
    sum -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
  }
  a /= 2.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const double sign : {-1.0, 1.0}) {
      const double xs = (a + sign * a * nodes[i]) * (a + sign * a * nodes[i]);
      const double rs = std::sqrt(1.0 - xs);
      asr = -(bs / xs + hk) / 2.0;
      if (asr > -100.0) {
        const double sp = 1.0 + c * xs * (1.0 + d * xs);
        const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
        sum += a * weights[i] * std::exp(asr) * (ep - sp);
      }
    }
  }
  sum = -sum / two_pi;

  if (r > 0.0) return sum + phi(-std::max(h, k));
  if (h >= k) return -sum;
  const double l = h < 0.0 ? phi(k) - phi(h) : phi(-h) - phi(-k);
  return l - sum;
}

// Neumaier-compensated sum of a few terms.
inline double compensated_sum(std::initializer_list<double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (const double v : terms) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

// P(X > h, Y > k) for the standard bivariate normal with correlation rho.
// Infinite limits and |rho| = 1 are handled exactly.
inline double bvn_upper(double h, double k, double rho) {
  detail::expects(std::abs(rho) <= 1.0, "bvn: |rho| must be <= 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (h == inf || k == inf) return 0.0;
  if (h == -inf) return k == -inf ? 1.0 : phi(-k);
  if (k == -inf) return phi(-h);
  if (rho == 1.0) return phi(-std::max(h, k));
  if (rho == -1.0) return std::max(0.0, phi(-h) - phi(k));
  return std::clamp(detail::bvn_upper_interior(h, k, rho), 0.0, 1.0);
}

// Probability of the rectangle [a_low, a_high] x [b_low, b_high].
inline double bvn_prob(const BvnQuery& q) {
  detail::expects(std::abs(q.rho) <= 1.0, "bvn: |rho| must be <= 1");
  detail::expects(q.a_low <= q.a_high && q.b_low <= q.b_high,
                  "bvn: lower limits must not exceed upper limits");
  if (std::abs(q.rho) == 1.0) {
    // Degenerate: B = +-A, so the event is an interval for A.
    const double lo = q.rho > 0 ? std::max(q.a_low, q.b_low) : std::max(q.a_low, -q.b_high);
    const double hi = q.rho > 0 ? std::min(q.a_high, q.b_high) : std::min(q.a_high, -q.b_low);
    if (!(lo < hi)) return 0.0;
    if (lo > 0.0) return std::max(0.0, phi(-lo) - phi(-hi));
    return std::max(0.0, phi(hi) - phi(lo));
  }
  const double p = detail::compensated_sum({
      bvn_upper(q.a_low, q.b_low, q.rho),
      -bvn_upper(q.a_high, q.b_low, q.rho),
      -bvn_upper(q.a_low, q.b_high, q.rho),
      bvn_upper(q.a_high, q.b_high, q.rho),
  });
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace probls
