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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "probls.hpp"
#include "probls/bench.hpp"
#include "test_util.hpp"

namespace {

using namespace probls;
namespace fs = std::filesystem;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Noiseless searches accept only deterministic weak-Wolfe points.

struct Objective1D {
  std::function<double(double)> f;
  std::function<double(double)> df;
  double x0;
  std::string kind;
};

Objective1D make_objective(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double m = 4.0 * u(rng) - 2.0;
  const double c = std::exp(4.0 * u(rng) - 2.0);
  const double q = std::exp(4.0 * u(rng) - 3.0);
  const double x0 = m + (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 3.0 * u(rng));
  switch (k % 3) {
    case 0:
      return {[=](double x) { return c * (x - m) * (x - m); },
              [=](double x) { return 2.0 * c * (x - m); }, x0, "quadratic"};
    case 1:
      return {[=](double x) { const double d = x - m; return q * d * d * d * d + 0.1 * c * d * d; },
              [=](double x) { const double d = x - m; return 4.0 * q * d * d * d + 0.2 * c * d; },
              x0, "quartic"};
    default: {
      const double lambda = std::exp(13.8 * u(rng) - 6.9);  // 1e-3 .. 1e3
      const double s = std::exp(2.0 * u(rng) - 1.0);
      const double shift = 100.0 * (u(rng) - 0.5);
      return {[=](double x) { const double d = s * (x - m); return lambda * (d * d * d * d + d * d) + shift; },
              [=](double x) { const double d = s * (x - m); return lambda * s * (4.0 * d * d * d + 2.0 * d); },
              x0, "scaled"};
    }
  }
}

Verdict criterion1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const WolfeParams wolfe;
  int accepted = 0, violations = 0, forced = 0, forced_violations = 0, blown_up = 0;
  for (int k = 0; k < 50; ++k) {
    const Objective1D obj = make_objective(k, rng);
    double x = obj.x0;
    double alpha = std::exp(9.2 * u(rng) - 6.9);  // 1e-3 .. 1e1
    const double g_start = std::abs(obj.df(x));
    for (int step = 0; step < 30; ++step) {
      const double g = obj.df(x);
      if (!std::isfinite(obj.f(x)) || !std::isfinite(g)) {
        ++blown_up;
        break;
      }
      if (std::abs(g) < 1e-6 * g_start) break;
      const double s = -alpha * g;
      const double f0 = obj.f(x), df0 = s * g;
      auto eval = [&](double t) { return std::make_pair(obj.f(x + t * s), s * obj.df(x + t * s)); };
      const SearchOutcome out = run_line_search(eval, f0, df0, 0.0, 0.0, wolfe);
      const auto [y, dy] = eval(out.t_accepted);
      // Round-off allowance at the scale of the values involved.
      const double tol = 1e-12 * (std::abs(f0) + std::abs(y) + std::abs(df0) * out.t_accepted);
      const bool decrease = y <= f0 + wolfe.c1 * out.t_accepted * df0 + tol;
      const bool curvature = dy >= wolfe.c2 * df0 - 1e-12 * std::abs(df0);
      const bool ok = decrease && curvature;
      if (out.forced) {
        ++forced;
        forced_violations += ok ? 0 : 1;
      } else {
        ++accepted;
        violations += ok ? 0 : 1;
      }
      x += out.t_accepted * s;
      alpha = propagate(out.t_accepted, alpha);
    }
  }
  return {violations == 0 && accepted >= 50,
          fmt("%d Wolfe-accepted points on 50 objectives, %d violate weak Wolfe; "
              "%d budget-exhausted forced accepts (%d not Wolfe points), %d sequences blew up",
              accepted, violations, forced, forced_violations, blown_up)};
}

// ---------------------------------------------------------------------------
// 2. Bivariate normal probabilities against Monte Carlo and exact identities.

Verdict criterion2() {
  constexpr std::size_t kSamples = 10000000;
  std::mt19937_64 rng(202);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z1(kSamples), z2(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    z1[i] = normal(rng);
    z2[i] = normal(rng);
  }
  std::uniform_real_distribution<double> lim(-2.5, 2.5), width(0.2, 3.0), corr(-0.995, 0.995);
  std::uniform_int_distribution<int> shape(0, 3);
  int outside = 0;
  double worst_z = 0.0;
  for (int c = 0; c < 200; ++c) {
    BvnQuery q{lim(rng), kInf, lim(rng), kInf, corr(rng)};
    switch (shape(rng)) {
      case 0: break;  // upper orthant
      case 1: q.a_high = q.a_low + width(rng); q.b_high = q.b_low + width(rng); break;
      case 2: q.a_high = q.a_low + width(rng); break;
      default: q.b_low = -kInf; q.b_high = lim(rng); break;
    }
    const double s = std::sqrt(1.0 - q.rho * q.rho);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double x = z1[i];
      const double y = q.rho * z1[i] + s * z2[i];
      hits += (x >= q.a_low && x <= q.a_high && y >= q.b_low && y <= q.b_high) ? 1 : 0;
    }
    const double p = bvn_prob(q);
    const double freq = static_cast<double>(hits) / kSamples;
    const double se = std::sqrt(p * (1.0 - p) / kSamples);
    const double z = se > 0.0 ? std::abs(freq - p) / se : (freq == p ? 0.0 : kInf);
    worst_z = std::max(worst_z, z);
    outside += z > 3.0 ? 1 : 0;
  }

  double identity_err = 0.0;
  auto check = [&](double got, double want) { identity_err = std::max(identity_err, std::abs(got - want)); };
  check(bvn_prob({0.0, kInf, 0.0, kInf, 0.0}), 0.25);
  check(bvn_prob({0.0, kInf, 0.0, kInf, 0.5}), 1.0 / 3.0);
  check(bvn_prob({0.0, kInf, 0.0, kInf, -0.5}), 1.0 / 6.0);
  check(bvn_prob({0.0, kInf, 0.0, kInf, 1.0}), 0.5);
  check(bvn_prob({0.0, kInf, 0.0, kInf, -1.0}), 0.0);
  for (double h : {-1.3, 0.0, 0.7}) {
    for (double k : {-0.4, 0.9}) {
      check(bvn_prob({h, kInf, k, kInf, 0.0}), phi(-h) * phi(-k));
      check(bvn_prob({h, kInf, k, kInf, 1.0}), phi(-std::max(h, k)));
      check(bvn_prob({h, kInf, k, kInf, -1.0}), std::max(0.0, phi(-h) - phi(k)));
    }
  }
  for (double r : {-0.9, -0.3, 0.2, 0.8}) {
    check(bvn_prob({0.0, kInf, 0.0, kInf, r}), 0.25 + std::asin(r) / (2.0 * std::numbers::pi));
  }
  return {outside == 0 && identity_err <= 1e-6,
          fmt("200 queries vs 1e7 samples: %d outside 3 SE (max %.2f SE); identity error %.1e",
              outside, worst_z, identity_err)};
}

// ---------------------------------------------------------------------------
// 3. Candidate minima against a dense grid.

Verdict criterion3() {
  std::mt19937_64 rng(303);
  int mismatched_counts = 0, far = 0, compared = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const SurrogatePosterior gp = testing::mixed_posterior(rng);
    const CandidateList c = generate_candidates(gp, 1.0);
    const std::vector<double> grid = testing::grid_minima(gp, 1e-4);
    if (c.points.size() != grid.size()) {
      ++mismatched_counts;
      continue;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double err = std::abs(c.points[i] - grid[i]);
      worst = std::max(worst, err);
      far += err > 1e-3 ? 1 : 0;
      ++compared;
    }
  }
  return {mismatched_counts == 0 && far == 0,
          fmt("1000 posteriors, %d minima compared, max location error %.1e, %d missed/spurious",
              compared, worst, mismatched_counts)};
}

// ---------------------------------------------------------------------------
// 4. Kernel, posterior and objective calculus.

double gradient_error(const Objective& obj, const Eigen::VectorXd& x, std::size_t i) {
  Eigen::VectorXd g, scratch;
  obj.sample_loss(x, i, g);
  const double h = 1e-6;
  double worst = 0.0;
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-3);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double fd = (obj.sample_loss(xp, i, scratch) - obj.sample_loss(xm, i, scratch)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[k]) / scale);
  }
  return worst;
}

Verdict criterion4() {
  // Kernel derivative table.
  const int pairs[][5] = {{0, 0, 1, 0, 1}, {0, 0, 0, 1, 0}, {1, 0, 1, 1, 0}, {0, 1, 1, 1, 1},
                          {1, 0, 2, 0, 1}, {2, 0, 2, 1, 0}, {1, 1, 2, 1, 1}, {2, 0, 3, 0, 1},
                          {2, 1, 3, 1, 1}, {3, 0, 3, 1, 0}};
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> pos(0.0, 5.0);
  const KernelParams kp{1.0, 10.0};
  const double h = 1e-4;
  double kernel_err = 0.0;
  for (int n = 0; n < 100;) {
    const double t = pos(rng), u = pos(rng);
    if (std::abs(t - u) < 10 * h) continue;
    ++n;
    for (const auto& p : pairs) {
      const double fd = p[4] ? (kernel(p[0], p[1], t + h, u, kp) - kernel(p[0], p[1], t - h, u, kp)) / (2 * h)
                             : (kernel(p[0], p[1], t, u + h, kp) - kernel(p[0], p[1], t, u - h, kp)) / (2 * h);
      const double exact = kernel(p[2], p[3], t, u, kp);
      kernel_err = std::max(kernel_err, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }

  // Noiseless interpolation.
  double interp_err = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const SurrogatePosterior gp = testing::random_posterior(rng, 2 + rep % 6, 0.0);
    for (const Observation& o : gp.observations()) {
      interp_err = std::max(interp_err, std::abs(gp.mean(o.t) - o.y));
      interp_err = std::max(interp_err, std::abs(gp.mean_d1(o.t) - o.dy));
    }
  }

  // Objective gradients.
  double logistic_err = 0.0, mlp_err = 0.0, synth_err = 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int classes : {2, 3}) {
    LogisticRegression lr(gen_synth(classes, 60, 6, 2.0, 41), std::nullopt);
    lr.set_l2(1e-3);
    for (std::size_t i = 0; i < 20; ++i) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(lr.dimension()));
      for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = 0.5 * normal(rng);
      logistic_err = std::max(logistic_err, gradient_error(lr, x, i));
    }
  }
  Mlp2 mlp(gen_synth(3, 60, 5, 2.0, 42), std::nullopt, 8);
  mlp.set_l2(1e-3);
  for (std::size_t i = 0; i < 20; ++i) {
    Eigen::VectorXd x = mlp.initial_point(i);
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] += 0.3 * normal(rng);
    mlp_err = std::max(mlp_err, gradient_error(mlp, x, i));
  }
  const NoisyQuadratic quad(NoisyQuadratic::log_spaced_curvature(5, 100.0), Eigen::VectorXd::Ones(5), 0.5, 40, 43);
  const NoisyRosenbrock rosen(5, 0.5, 40, 44);
  for (std::size_t i = 0; i < 10; ++i) {
    synth_err = std::max(synth_err, gradient_error(quad, quad.initial_point(i), i));
    synth_err = std::max(synth_err, gradient_error(rosen, rosen.initial_point(i), i));
  }

  const bool pass = kernel_err <= 1e-5 && interp_err <= 1e-6 && logistic_err <= 1e-5 &&
                    mlp_err <= 1e-4 && synth_err <= 1e-5;
  return {pass, fmt("kernel FD %.1e, interpolation %.1e, logistic %.1e, mlp2 %.1e, synthetic %.1e",
                    kernel_err, interp_err, logistic_err, mlp_err, synth_err)};
}

// ---------------------------------------------------------------------------
// 5. Weak Wolfe probability against joint GP sampling.

Verdict criterion5() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  WolfeParams weak;
  weak.strong = false;
  constexpr int kSamples = 100000;
  int outside = 0;
  double worst_z = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const SurrogatePosterior gp = testing::mixed_posterior(rng);
    const double t = u(rng) * (gp.t_max() + 1.0);
    const double p = p_wolfe(gp, t, weak);
    const testing::JointAtT joint(gp, t);
    int hits = 0;
    for (int i = 0; i < kSamples; ++i) {
      const auto [a, b] = testing::wolfe_ab(joint.sample(rng), t, weak.c1, weak.c2);
      hits += (a > 0.0 && b > 0.0) ? 1 : 0;
    }
    const double freq = static_cast<double>(hits) / kSamples;
    const double se = std::sqrt(p * (1.0 - p) / kSamples);
    const double z = se > 0.0 ? std::abs(freq - p) / se : (std::abs(freq - p) < 1.0 / kSamples ? 0.0 : kInf);
    worst_z = std::max(worst_z, z);
    outside += z > 3.0 ? 1 : 0;
  }
  return {outside == 0, fmt("50 posteriors x 1e5 samples: %d outside 3 SE (max %.2f SE)", outside, worst_z)};
}

// ---------------------------------------------------------------------------
// 6 and 7. Learning-rate insensitivity and search length on logistic regression.

struct SweepResult {
  std::map<double, double> ls_err, sgd_err;
  std::map<double, int> sgd_diverged, ls_diverged;
  std::map<double, double> evals_per_search, single_frac;
  int reps = 0;
};

SweepResult run_logistic_sweep() {
  BenchConfig c = parse_config(nlohmann::json::parse(R"({
    "problem": {"kind": "logistic-regression", "dimension": 20, "samples": 6250,
                "test_fraction": 0.2, "classes": 2, "separation": 3, "anisotropy": 2,
                "feature_scale": 0.2, "l2": 1e-3, "seed": 11},
    "optimizer": {"batch_size": 10, "epochs": 10},
    "seed": 100, "replications": 10, "warmup_steps": 100
  })"));
  const auto objective = build_problem(c.problem);
  SweepResult r;
  r.reps = static_cast<int>(c.replications);
  for (double alpha0 : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    for (OptimizerMode mode : {OptimizerMode::linesearch, OptimizerMode::sgd_fixed}) {
      double err = 0.0;
      int ok = 0, diverged = 0;
      std::size_t searches = 0, evals = 0, single = 0;
      for (std::size_t rep = 0; rep < c.replications; ++rep) {
        const RunArtifacts a = execute(*objective, c, mode, alpha0, c.driver.seed + rep);
        diverged += a.summary.diverged ? 1 : 0;
        if (!a.summary.final_test_error) continue;
        err += *a.summary.final_test_error;
        ++ok;
        if (mode != OptimizerMode::linesearch) continue;
        for (std::size_t i = c.warmup_steps; i < a.trace.rows.size(); ++i) {
          const TraceRow& row = a.trace.rows[i];
          if (row.fallback) continue;
          ++searches;
          evals += static_cast<std::size_t>(row.evals);
          single += row.evals == 1 ? 1 : 0;
        }
      }
      const double mean_err = ok ? err / ok : std::nan("");
      if (mode == OptimizerMode::linesearch) {
        r.ls_err[alpha0] = mean_err;
        r.ls_diverged[alpha0] = diverged;
        r.evals_per_search[alpha0] = static_cast<double>(evals) / static_cast<double>(searches);
        r.single_frac[alpha0] = static_cast<double>(single) / static_cast<double>(searches);
      } else {
        r.sgd_err[alpha0] = mean_err;
        r.sgd_diverged[alpha0] = diverged;
      }
    }
  }
  return r;
}

Verdict criterion6(const SweepResult& r) {
  double lo = kInf, hi = -kInf;
  int ls_diverged = 0;
  for (const auto& [a, e] : r.ls_err) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    ls_diverged += r.ls_diverged.at(a);
  }
  const double spread = hi - lo;
  double best = kInf;
  for (const auto& [a, e] : r.sgd_err) {
    if (std::isfinite(e)) best = std::min(best, e);
  }
  auto extreme_ok = [&](double a) {
    if (r.sgd_diverged.at(a) == r.reps) return true;
    return r.sgd_err.at(a) - best > 0.05;
  };
  std::string ls = "linesearch test error";
  for (const auto& [a, e] : r.ls_err) ls += fmt(" %g:%.4f(div %d)", a, e, r.ls_diverged.at(a));
  std::string sgd = "sgd-fixed";
  for (const auto& [a, e] : r.sgd_err) sgd += fmt(" %g:%.4f(div %d)", a, e, r.sgd_diverged.at(a));
  const bool pass = std::isfinite(spread) && spread <= 0.03 &&
                    extreme_ok(1e-3) && extreme_ok(10.0);
  return {pass, fmt("linesearch spread %.4f (<= 0.03); sgd-fixed extremes trail best %.4f by %.4f and %.4f (> 0.05 or diverged); ",
                    spread, best, r.sgd_err.at(1e-3) - best, r.sgd_err.at(10.0) - best) +
                    fmt("%d of %d linesearch runs diverged; ", ls_diverged, 5 * r.reps) + ls + "; " + sgd};
}

Verdict criterion7(const SweepResult& r) {
  double worst_evals = 0.0, worst_single = 1.0;
  std::string cells;
  for (const auto& [a, e] : r.evals_per_search) {
    worst_evals = std::max(worst_evals, e);
    worst_single = std::min(worst_single, r.single_frac.at(a));
    cells += fmt(" %g:%.2f/%.3f", a, e, r.single_frac.at(a));
  }
  return {worst_evals <= 2.5 && worst_single >= 0.6,
          fmt("after 100 warm-up steps, worst alpha0 cell: %.2f evals/search (<= 2.5), single-eval fraction %.3f (>= 0.6); per alpha0 evals/single:",
              worst_evals, worst_single) + cells};
}

// ---------------------------------------------------------------------------
// 8. Scale equivariance.

// lambda * L, with per-sample losses and gradients scaled.
struct ScaledObjective {
  const Objective& base;
  double lambda;
  std::size_t dimension() const { return base.dimension(); }
  std::size_t num_samples() const { return base.num_samples(); }
  Eigen::VectorXd initial_point(std::uint64_t seed) const { return base.initial_point(seed); }
  double sample_loss(const Eigen::VectorXd& x, std::size_t i, Eigen::VectorXd& g) const {
    const double l = base.sample_loss(x, i, g);
    g *= lambda;
    return lambda * l;
  }
};

Verdict criterion8() {
  const double lambda = 1e3;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Paired single searches on noisy 1-D parabolas sharing noise draws.
  double search_err = 0.0;
  int mismatched = 0, multi = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double c = std::exp(4.0 * u(rng) - 2.0), m = 3.0 * u(rng) + 0.05;
    const double sf = 0.3 * u(rng), sdf = 0.3 * u(rng);
    std::vector<std::pair<double, double>> noise(kDefaultSearchBudget);
    for (auto& n : noise) n = {normal(rng), normal(rng)};
    auto search = [&](double scale, std::vector<double>& proposals) {
      std::size_t k = 0;
      auto f = [&](double t) {
        const double y = c * (t - m) * (t - m) + sf * noise[k].first;
        const double dy = 2.0 * c * (t - m) + sdf * noise[k].second;
        ++k;
        return std::make_pair(scale * y, scale * dy);
      };
      return run_line_search(f, scale * c * m * m, -scale * 2.0 * c * m, scale * sf, scale * sdf,
                             WolfeParams{}, kDefaultSearchBudget, &proposals);
    };
    std::vector<double> p1, p2;
    const SearchOutcome a = search(1.0, p1);
    const SearchOutcome b = search(lambda, p2);
    if (p1.size() != p2.size()) {
      ++mismatched;
      continue;
    }
    multi += p1.size() > 1 ? 1 : 0;
    for (std::size_t i = 0; i < p1.size(); ++i) search_err = std::max(search_err, std::abs(p1[i] - p2[i]) / p1[i]);
    search_err = std::max(search_err, std::abs(a.t_accepted - b.t_accepted) / a.t_accepted);
  }

  // Paired SGD runs: lambda * L with alpha0 / lambda sees the same search frames.
  ProblemSpec spec;
  spec.kind = ProblemKind::logistic_regression;
  spec.dimension = 10;
  spec.samples = 1000;
  spec.l2 = 1e-3;
  spec.seed = 5;
  const auto base = make_problem(spec);
  const ScaledObjective plain{*base, 1.0}, scaled{*base, lambda};
  DriverConfig d;
  d.max_steps = 100;
  d.seed = 9;
  d.record_proposals = true;
  d.x0 = base->initial_point(9);
  d.alpha0 = 0.1;
  const RunTrace ta = run(plain, d);
  d.alpha0 = 0.1 / lambda;
  const RunTrace tb = run(scaled, d);
  double run_err = 0.0;
  std::size_t run_proposals = 0;
  bool same_shape = ta.proposals.size() == tb.proposals.size();
  for (std::size_t s = 0; same_shape && s < ta.proposals.size(); ++s) {
    if (ta.proposals[s].size() != tb.proposals[s].size()) {
      same_shape = false;
      break;
    }
    for (std::size_t i = 0; i < ta.proposals[s].size(); ++i) {
      run_err = std::max(run_err, std::abs(ta.proposals[s][i] - tb.proposals[s][i]) / ta.proposals[s][i]);
      ++run_proposals;
    }
    run_err = std::max(run_err, std::abs(ta.rows[s].t_accepted - tb.rows[s].t_accepted) / ta.rows[s].t_accepted);
  }
  const bool pass = mismatched == 0 && search_err <= 1e-9 && same_shape && run_err <= 1e-9;
  return {pass, fmt("lambda = 1e3: 200 paired searches (%d multi-step), max relative deviation %.1e; "
                    "paired 100-step SGD runs (%zu proposals), max relative deviation %.1e%s",
                    multi, search_err, run_proposals, run_err,
                    same_shape ? "" : ", proposal sequences differ in length")};
}

// ---------------------------------------------------------------------------
// 9. CLI determinism.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(PROBLS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict criterion9() {
  const fs::path dir = fs::temp_directory_path() / "probls_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"problem": {"kind": "logistic-regression", "dimension": 10, "samples": 1000,
                          "l2": 1e-3, "seed": 3},
               "optimizer": {"batch_size": 10, "epochs": 2}, "seed": 17})";
  }
  const std::string cfg = (dir / "cfg.json").string();
  int compared = 0, differing = 0, failures = 0;
  for (const char* mode : {"linesearch", "sgd-fixed", "sgd-decay"}) {
    for (const char* run : {"a", "b"}) {
      const fs::path out = dir / (std::string(mode) + "_" + run);
      failures += cli("run --config " + cfg + " --mode " + mode + " --out " + out.string()) != 0;
    }
    const std::string a = slurp(dir / (std::string(mode) + "_a") / "trace.csv");
    const std::string b = slurp(dir / (std::string(mode) + "_b") / "trace.csv");
    ++compared;
    differing += (a.empty() || a != b) ? 1 : 0;
  }
  for (const char* run : {"sa", "sb"}) {
    failures += cli("sweep --config " + cfg + " --alphas 0.01,1 --reps 2 --out " + (dir / run).string()) != 0;
  }
  for (const auto& e : fs::directory_iterator(dir / "sa")) {
    if (!e.path().filename().string().starts_with("trace_")) continue;
    ++compared;
    differing += slurp(e.path()) != slurp(dir / "sb" / e.path().filename()) ? 1 : 0;
  }
  fs::remove_all(dir);
  return {failures == 0 && differing == 0 && compared == 7,
          fmt("%d trace files compared across two invocations, %d differ, %d CLI failures", compared,
              differing, failures)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %-34s %s  [%.1fs] %s\n", id, name, v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  };
  report(1, "noiseless-limit equivalence", criterion1);
  report(2, "bivariate normal accuracy", criterion2);
  report(3, "candidate correctness", criterion3);
  report(4, "kernel/posterior calculus", criterion4);
  report(5, "Wolfe belief Monte Carlo", criterion5);
  SweepResult sweep;
  bool swept = false;
  auto ensure_sweep = [&] {
    if (!swept) sweep = run_logistic_sweep();
    swept = true;
  };
  report(6, "learning-rate insensitivity", [&] { ensure_sweep(); return criterion6(sweep); });
  report(7, "search efficiency", [&] { ensure_sweep(); return criterion7(sweep); });
  report(8, "scale equivariance", criterion8);
  report(9, "CLI determinism", criterion9);
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
