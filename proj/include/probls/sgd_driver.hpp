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

// Outer stochastic gradient loop with optional line-search step control.
//
// In line-search mode every outer step is one probabilistic line search
// along s = -alpha * g, where g is the minibatch gradient at the current
// point and alpha the propagated step scale. The anchor batch at the start of
// a step and every evaluation inside the search each draw a fresh minibatch.
// With reuse_accepted_batch the accepted node's batch becomes the next anchor
// instead, which saves one evaluation per step but biases the next search
// towards batches that happened to look good.

#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "probls/controller.hpp"
#include "probls/errors.hpp"
#include "probls/wolfe.hpp"

namespace probls {

template <class O>
concept SampleObjective = requires(const O& o, const Eigen::VectorXd& x, std::size_t i,
                                   Eigen::VectorXd& grad) {
  { o.dimension() } -> std::convertible_to<std::size_t>;
  { o.num_samples() } -> std::convertible_to<std::size_t>;
  { o.sample_loss(x, i, grad) } -> std::convertible_to<double>;
};

struct BatchStats {
  double loss_mean = 0.0;
  Eigen::VectorXd grad_mean;
  double loss_sq_mean = 0.0;
  Eigen::VectorXd grad_sq_mean;
  std::size_t m = 0;
};

namespace detail {

// Neumaier summation for a scalar and for a vector, element-wise.
struct CompensatedScalar {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct CompensatedVector {
  Eigen::ArrayXd sum;
  Eigen::ArrayXd comp;
  explicit CompensatedVector(Eigen::Index n) : sum(Eigen::ArrayXd::Zero(n)), comp(Eigen::ArrayXd::Zero(n)) {}
  void add(const Eigen::ArrayXd& v) {
    const Eigen::ArrayXd t = sum + v;
    comp += (sum.abs() >= v.abs()).select((sum - t) + v, (v - t) + sum);
    sum = t;
  }
  Eigen::VectorXd value() const { return (sum + comp).matrix(); }
};

}  // namespace detail

// Mean loss, mean gradient and their second moments over one minibatch, in a
// single pass with a fixed reduction order.
template <SampleObjective O>
BatchStats batch_stats(const O& objective, const Eigen::VectorXd& x,
                       std::span<const std::size_t> batch) {
  detail::expects(!batch.empty(), "batch_stats: empty batch");
  const auto dim = static_cast<Eigen::Index>(objective.dimension());
  detail::CompensatedScalar loss, loss_sq;
  detail::CompensatedVector grad(dim), grad_sq(dim);
  Eigen::VectorXd g(dim);
  for (const std::size_t i : batch) {
    const double l = objective.sample_loss(x, i, g);
    loss.add(l);
    loss_sq.add(l * l);
    grad.add(g.array());
    grad_sq.add(g.array().square());
  }
  const auto m = static_cast<double>(batch.size());
  BatchStats out;
  out.m = batch.size();
  out.loss_mean = loss.value() / m;
  out.loss_sq_mean = loss_sq.value() / m;
  out.grad_mean = grad.value() / m;
  out.grad_sq_mean = grad_sq.value() / m;
  return out;
}

struct NoiseEstimate {
  double var_f = 0.0;
  double var_df = 0.0;
};

// Variance of the batch-mean loss and of the batch-mean gradient projected
// on `direction`, treating gradient elements as independent.
inline NoiseEstimate noise_estimates(const BatchStats& stats, const Eigen::VectorXd& direction) {
  detail::expects(stats.m >= 2, "noise_estimates: need a batch of at least two samples");
  const double denom = static_cast<double>(stats.m - 1);
  NoiseEstimate out;
  out.var_f = std::max(0.0, (stats.loss_sq_mean - stats.loss_mean * stats.loss_mean) / denom);
  const Eigen::ArrayXd per_dim =
      ((stats.grad_sq_mean.array() - stats.grad_mean.array().square()) / denom).max(0.0);
  out.var_df = std::max(0.0, (direction.array().square() * per_dim).sum());
  return out;
}

enum class OptimizerMode { linesearch, sgd_fixed, sgd_decay };

inline std::string to_string(OptimizerMode mode) {
  switch (mode) {
    case OptimizerMode::linesearch: return "linesearch";
    case OptimizerMode::sgd_fixed: return "sgd-fixed";
    case OptimizerMode::sgd_decay: return "sgd-decay";
  }
  return "?";
}

inline std::optional<OptimizerMode> parse_optimizer_mode(std::string_view name) {
  if (name == "linesearch") return OptimizerMode::linesearch;
  if (name == "sgd-fixed") return OptimizerMode::sgd_fixed;
  if (name == "sgd-decay") return OptimizerMode::sgd_decay;
  return std::nullopt;
}

struct DriverConfig {
  OptimizerMode mode = OptimizerMode::linesearch;
  double alpha0 = 0.1;
  std::size_t batch_size = 10;
  std::size_t max_steps = 0;  // outer steps; 0 = unlimited
  std::size_t max_evals = 0;  // minibatch evaluations; 0 = unlimited
  std::uint64_t seed = 1;
  int search_budget = kDefaultSearchBudget;
  WolfeParams wolfe{};
  double alpha_min_factor = 1e-10;
  double alpha_max_factor = 1e10;
  bool fixed_batch_per_search = false;  // test-only: one batch for a whole search
  bool record_proposals = false;
  bool reuse_accepted_batch = false;  // start the next search from the accepted node's batch
  std::optional<Eigen::VectorXd> x0;  // defaults to objective.initial_point(seed)
};

struct TraceRow {
  std::size_t step = 0;
  double loss = 0.0;        // minibatch loss at the start of the step
  double t_accepted = 1.0;  // scaled step; 1 for plain SGD
  double step_size = 0.0;   // effective learning rate t * alpha
  int evals = 1;        // line-search evaluations (1 for plain SGD, 0 on fallback)
  int batch_evals = 1;  // all minibatch evaluations charged to this step
  double sigma_f = 0.0;
  double sigma_df = 0.0;
  double p_wolfe = 0.0;
  bool forced = false;
  bool fallback = false;  // non-descent direction, fixed step taken
  double wall_time = 0.0;  // seconds since the run started
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<std::vector<double>> proposals;  // per search, when recorded
  Eigen::VectorXd x_final;
  std::size_t total_evals = 0;
  bool diverged = false;
};

namespace detail {

template <SampleObjective O>
class DriverState {
 public:
  DriverState(const O& objective, const DriverConfig& config)
      : objective_(objective),
        config_(config),
        rng_(config.seed),
        pick_(0, objective.num_samples() - 1),
        batch_(config.batch_size),
        start_(std::chrono::steady_clock::now()) {}

  std::span<const std::size_t> draw() {
    for (auto& i : batch_) i = pick_(rng_);
    return batch_;
  }

  BatchStats evaluate(const Eigen::VectorXd& x, std::span<const std::size_t> batch) {
    ++trace.total_evals;
    return batch_stats(objective_, x, batch);
  }

  BatchStats evaluate_fresh(const Eigen::VectorXd& x) { return evaluate(x, draw()); }

  bool budget_left() const {
    if (config_.max_steps && trace.rows.size() >= config_.max_steps) return false;
    if (config_.max_evals && trace.total_evals >= config_.max_evals) return false;
    return true;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  RunTrace trace;

 private:
  const O& objective_;
  const DriverConfig& config_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::size_t> pick_;
  std::vector<std::size_t> batch_;
  std::chrono::steady_clock::time_point start_;
};

inline bool finite(const BatchStats& s) {
  return std::isfinite(s.loss_mean) && s.grad_mean.allFinite();
}

}  // namespace detail

template <SampleObjective O>
RunTrace run(const O& objective, const DriverConfig& config) {
  detail::expects(config.alpha0 > 0.0, "run: alpha0 must be > 0");
  detail::expects(config.batch_size >= 1, "run: batch size must be >= 1");
  detail::expects(config.mode != OptimizerMode::linesearch || config.batch_size >= 2,
                  "run: line search needs batches of at least two samples");
  detail::expects(config.max_steps > 0 || config.max_evals > 0,
                  "run: set max_steps or max_evals");
  detail::expects(objective.num_samples() >= 1, "run: objective has no samples");

  detail::DriverState<O> state(objective, config);
  Eigen::VectorXd x = config.x0 ? *config.x0 : objective.initial_point(config.seed);
  detail::expects(static_cast<std::size_t>(x.size()) == objective.dimension(),
                  "run: x0 has the wrong dimension");

  if (config.mode != OptimizerMode::linesearch) {
    while (state.budget_left()) {
      const BatchStats stats = state.evaluate_fresh(x);
      if (!detail::finite(stats)) {
        state.trace.diverged = true;
        break;
      }
      const std::size_t step = state.trace.rows.size() + 1;
      const double lr = config.mode == OptimizerMode::sgd_fixed
                            ? config.alpha0
                            : config.alpha0 / static_cast<double>(step);
      const Eigen::VectorXd direction = -lr * stats.grad_mean;
      TraceRow row;
      row.step = step;
      row.loss = stats.loss_mean;
      row.step_size = lr;
      if (stats.m >= 2) {
        const NoiseEstimate noise = noise_estimates(stats, direction);
        row.sigma_f = std::sqrt(noise.var_f);
        row.sigma_df = std::sqrt(noise.var_df);
      }
      x += direction;
      row.wall_time = state.elapsed();
      state.trace.rows.push_back(row);
    }
    state.trace.diverged = state.trace.diverged || !x.allFinite();
    state.trace.x_final = std::move(x);
    return state.trace;
  }

  const StepSizeBounds bounds = StepSizeBounds::relative_to(
      config.alpha0, config.alpha_min_factor, config.alpha_max_factor);
  double alpha = config.alpha0;
  std::optional<BatchStats> carried;

  while (state.budget_left()) {
    const std::size_t evals_before = state.trace.total_evals;
    std::vector<std::size_t> fixed_batch;
    BatchStats stats;
    if (config.fixed_batch_per_search) {
      const auto b = state.draw();
      fixed_batch.assign(b.begin(), b.end());
      stats = state.evaluate(x, fixed_batch);
    } else if (carried) {
      stats = std::move(*carried);
    } else {
      stats = state.evaluate_fresh(x);
    }
    carried.reset();
    if (!detail::finite(stats)) {
      state.trace.diverged = true;
      break;
    }

    const Eigen::VectorXd direction = -alpha * stats.grad_mean;
    const double f0 = stats.loss_mean;
    const double df0 = direction.dot(stats.grad_mean);
    const NoiseEstimate noise = noise_estimates(stats, direction);

    TraceRow row;
    row.step = state.trace.rows.size() + 1;
    row.loss = f0;
    row.sigma_f = std::sqrt(noise.var_f);
    row.sigma_df = std::sqrt(noise.var_df);

    std::optional<LineSearch> search;
    if (df0 < 0.0) {
      try {
        search.emplace(f0, df0, row.sigma_f, row.sigma_df, config.wolfe, config.search_budget);
      } catch (const NotDescentDirection&) {
      }
    }
    if (!search) {
      x += direction;
      row.step_size = alpha;
      row.evals = 0;
      row.fallback = true;
      row.batch_evals = static_cast<int>(state.trace.total_evals - evals_before);
      row.wall_time = state.elapsed();
      state.trace.rows.push_back(row);
      continue;
    }

    std::vector<std::pair<double, BatchStats>> evaluated;
    SearchOutcome outcome;
    double t = search->pending();
    for (;;) {
      const Eigen::VectorXd xt = x + t * direction;
      BatchStats st = config.fixed_batch_per_search ? state.evaluate(xt, fixed_batch)
                                                    : state.evaluate_fresh(xt);
      const double y = st.loss_mean;
      const double dy = direction.dot(st.grad_mean);
      evaluated.emplace_back(t, std::move(st));
      SearchDecision decision = search->step(t, y, dy);
      if (auto* out = std::get_if<SearchOutcome>(&decision)) {
        outcome = *out;
        break;
      }
      t = std::get<Evaluate>(decision).t;
    }
    if (config.record_proposals) state.trace.proposals.push_back(search->proposals());

    x += outcome.t_accepted * direction;
    if (config.reuse_accepted_batch && !config.fixed_batch_per_search) {
      for (auto& [te, st] : evaluated) {
        if (te == outcome.t_accepted) carried = std::move(st);
      }
    }
    outcome.next_alpha0 = propagate(outcome.t_accepted, alpha, bounds);

    row.t_accepted = outcome.t_accepted;
    row.step_size = outcome.t_accepted * alpha;
    row.evals = outcome.evals;
    row.batch_evals = static_cast<int>(state.trace.total_evals - evals_before);
    row.p_wolfe = outcome.p_wolfe;
    row.forced = outcome.forced;
    row.wall_time = state.elapsed();
    state.trace.rows.push_back(row);
    alpha = outcome.next_alpha0;
  }

  state.trace.diverged = state.trace.diverged || !x.allFinite();
  state.trace.x_final = std::move(x);
  return state.trace;
}

}  // namespace probls
