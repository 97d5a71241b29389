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

// Gaussian process surrogate for a univariate line-search objective.
//
// The prior is a once-integrated Wiener process started at t = -tau:
//
//   k(t, u) = theta2 * [ min(a, b)^3 / 3 + |a - b| min(a, b)^2 / 2 ],
//   a = t + tau,  b = u + tau.
//
// Under this prior (f, f') is jointly Gaussian and the posterior mean given
// noisy observations of f and f' is a cubic spline with knots at the
// observed locations. Inference is dense: the line search rarely holds more
// than a handful of observations, so a 2N x 2N Cholesky is the cheap option.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "probls/errors.hpp"

namespace probls {

struct KernelParams {
  double theta2 = 1.0;
  double tau = 10.0;
};

// One scaled (t, y, y') evaluation with its Gaussian noise variances.
struct Observation {
  double t = 0.0;
  double y = 0.0;
  double dy = 0.0;
  double var_f = 0.0;
  double var_df = 0.0;
};

// Minimum noise variance, in units of theta2.
inline constexpr double kNoiseFloor = 1e-12;
inline constexpr double kDuplicateTolerance = 1e-10;

// Partial derivative d^{i+j} k / dt^i du^j of the integrated Wiener kernel,
// for i in [0, 3] and j in [0, 1]. Orders >= 2 in t jump at t == u; the
// right-sided value (the t >= u branch) is returned there.
inline double kernel(int order_left, int order_right, double t, double u,
                     const KernelParams& params = {}) {
  detail::expects(order_left >= 0 && order_left <= 3 && order_right >= 0 &&
                      order_right <= 1,
                  "kernel: unsupported derivative order pair");
  const double a = t + params.tau;
  const double b = u + params.tau;
  double value = 0.0;
  if (t < u) {
    switch (order_left * 2 + order_right) {
      case 0: value = a * a * b / 2.0 - a * a * a / 6.0; break;
      case 1: value = a * a / 2.0; break;
      case 2: value = a * b - a * a / 2.0; break;
      case 3: value = a; break;
      case 4: value = b - a; break;
      case 5: value = 1.0; break;
      case 6: value = -1.0; break;
      case 7: value = 0.0; break;
    }
  } else {
    switch (order_left * 2 + order_right) {
      case 0: value = b * b * a / 2.0 - b * b * b / 6.0; break;
      case 1: value = a * b - b * b / 2.0; break;
      case 2: value = b * b / 2.0; break;
      case 3: value = b; break;
      default: value = 0.0; break;
    }
  }
  return params.theta2 * value;
}

// Value and the first three derivatives of the posterior mean at one point.
struct MeanDerivatives {
  double mu = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

class SurrogatePosterior {
 public:
  explicit SurrogatePosterior(KernelParams params = {}) : params_(params) {
    detail::expects(params.theta2 > 0.0 && params.tau > 0.0,
                    "KernelParams: theta2 and tau must be positive");
  }

  SurrogatePosterior(const Observation& first, KernelParams params)
      : SurrogatePosterior(params) {
    add(first);
  }

  // Conditions on one more observation. Throws ContractViolation for
  // negative t, negative noise or a duplicate location, and
  // DegenerateSurrogate if the Gram matrix cannot be factorized.
  void add(const Observation& obs) {
    detail::expects(obs.t >= 0.0 && std::isfinite(obs.t),
                    "Observation: t must be finite and >= 0");
    detail::expects(obs.var_f >= 0.0 && obs.var_df >= 0.0,
                    "Observation: noise variances must be >= 0");
    for (const auto& o : obs_) {
      if (std::abs(o.t - obs.t) <= kDuplicateTolerance) {
        throw ContractViolation("Observation: duplicate location");
      }
    }
    std::vector<Observation> next = obs_;
    auto pos = std::lower_bound(
        next.begin(), next.end(), obs.t,
        [](const Observation& o, double t) { return o.t < t; });
    next.insert(pos, obs);
    refactor(next);
    obs_ = std::move(next);
  }

  [[nodiscard]] SurrogatePosterior updated(const Observation& obs) const {
    SurrogatePosterior copy = *this;
    copy.add(obs);
    return copy;
  }

  const KernelParams& params() const noexcept { return params_; }
  std::span<const Observation> observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  double t_max() const noexcept { return obs_.empty() ? 0.0 : obs_.back().t; }

  // mu and its derivatives at t. Second and third derivatives are the
  // right-sided ones, i.e. those of the cubic piece on [t_i, t_{i+1}) that
  // contains t.
  MeanDerivatives mean_derivatives(double t) const {
    MeanDerivatives out;
    const std::size_t n = obs_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = obs_[i].t;
      const double wf = weights_[static_cast<Eigen::Index>(i)];
      const double wd = weights_[static_cast<Eigen::Index>(n + i)];
      out.mu += wf * kernel(0, 0, t, ti, params_) + wd * kernel(0, 1, t, ti, params_);
      out.d1 += wf * kernel(1, 0, t, ti, params_) + wd * kernel(1, 1, t, ti, params_);
      out.d2 += wf * kernel(2, 0, t, ti, params_) + wd * kernel(2, 1, t, ti, params_);
      out.d3 += wf * kernel(3, 0, t, ti, params_) + wd * kernel(3, 1, t, ti, params_);
    }
    return out;
  }

  double mean(double t) const { return mean_of_order(0, t); }
  double mean_d1(double t) const { return mean_of_order(1, t); }

  // Posterior covariance between f^(order_left)(t) and f^(order_right)(u),
  // orders in {0, 1}.
  double covariance(int order_left, int order_right, double t, double u) const {
    detail::expects(order_left >= 0 && order_left <= 1 && order_right >= 0 &&
                        order_right <= 1,
                    "covariance: orders must be 0 or 1");
    const double prior = kernel(order_left, order_right, t, u, params_);
    if (obs_.empty()) return prior;
    const Eigen::VectorXd left = cross_left(order_left, t);
    const Eigen::VectorXd right = cross_right(order_right, u);
    const Eigen::VectorXd wl = chol_.matrixL().solve(left);
    const Eigen::VectorXd wr = chol_.matrixL().solve(right);
    return prior - wl.dot(wr);
  }

  double variance(double t) const { return covariance(0, 0, t, t); }

 private:
  double mean_of_order(int order, double t) const {
    double out = 0.0;
    const std::size_t n = obs_.size();
    for (std::size_t i = 0; i < n; ++i) {
      out += weights_[static_cast<Eigen::Index>(i)] * kernel(order, 0, t, obs_[i].t, params_) +
             weights_[static_cast<Eigen::Index>(n + i)] * kernel(order, 1, t, obs_[i].t, params_);
    }
    return out;
  }

  // Cov(f^(order)(t), [y; y']).
  Eigen::VectorXd cross_left(int order, double t) const {
    const auto n = static_cast<Eigen::Index>(obs_.size());
    Eigen::VectorXd v(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ti = obs_[static_cast<std::size_t>(i)].t;
      v[i] = kernel(order, 0, t, ti, params_);
      v[n + i] = kernel(order, 1, t, ti, params_);
    }
    return v;
  }

  // Cov([y; y'], f^(order)(u)).
  Eigen::VectorXd cross_right(int order, double u) const {
    const auto n = static_cast<Eigen::Index>(obs_.size());
    Eigen::VectorXd v(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ti = obs_[static_cast<std::size_t>(i)].t;
      v[i] = kernel(0, order, ti, u, params_);
      v[n + i] = kernel(1, order, ti, u, params_);
    }
    return v;
  }

  void refactor(const std::vector<Observation>& obs) {
    const auto n = static_cast<Eigen::Index>(obs.size());
    const double floor = kNoiseFloor * params_.theta2;
    Eigen::MatrixXd gram(2 * n, 2 * n);
    Eigen::VectorXd targets(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& oi = obs[static_cast<std::size_t>(i)];
      targets[i] = oi.y;
      targets[n + i] = oi.dy;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double tj = obs[static_cast<std::size_t>(j)].t;
        gram(i, j) = kernel(0, 0, oi.t, tj, params_);
        gram(i, n + j) = kernel(0, 1, oi.t, tj, params_);
        gram(n + i, j) = kernel(1, 0, oi.t, tj, params_);
        gram(n + i, n + j) = kernel(1, 1, oi.t, tj, params_);
      }
      gram(i, i) += std::max(oi.var_f, floor);
      gram(n + i, n + i) += std::max(oi.var_df, floor);
    }

    Eigen::LLT<Eigen::MatrixXd> chol(gram);
    if (chol.info() != Eigen::Success) {
      double jitter = 1e-10 * gram.trace() / static_cast<double>(2 * n);
      bool ok = false;
      for (int attempt = 0; attempt < 3 && !ok; ++attempt, jitter *= 10.0) {
        Eigen::MatrixXd jittered = gram;
        jittered.diagonal().array() += jitter;
        chol.compute(jittered);
        ok = chol.info() == Eigen::Success;
      }
      if (!ok) throw DegenerateSurrogate("Gram matrix is not positive definite");
    }
    Eigen::VectorXd weights = chol.solve(targets);
    if (!weights.allFinite()) throw DegenerateSurrogate("posterior weights are not finite");
    weights_ = std::move(weights);
    chol_ = std::move(chol);
  }

  KernelParams params_;
  std::vector<Observation> obs_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd weights_;
};

// Value-returning form of SurrogatePosterior::add.
[[nodiscard]] inline SurrogatePosterior update(const SurrogatePosterior& posterior,
                                               const Observation& obs) {
  return posterior.updated(obs);
}

}  // namespace probls
