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

// Experiment harness: JSON configs, trace/summary artifacts, learning-rate
// sweeps with aggregation over replications.
//
// Config layout (all keys optional unless noted):
//
//   {
//     "problem":   { "kind": "logistic-regression", "dimension": 20,
//                    "samples": 6250, "classes": 2, "separation": 3,
//                    "anisotropy": 2, "feature_scale": 0.2, "l2": 1e-3,
//                    "test_fraction": 0.2, "standardize": false,
//                    "data": "train.csv", "noise": 1, "condition": 10,
//                    "hidden": 32, "seed": 11 },
//     "optimizer": { "mode": "linesearch", "modes": ["linesearch"],
//                    "alpha0": 0.1, "batch_size": 10, "steps": 0,
//                    "epochs": 10, "evals": 0, "search_budget": 7,
//                    "c1": 0.05, "c2": 0.8, "wolfe_threshold": 0.3,
//                    "strong_wolfe": true, "reuse_accepted_batch": false },
//     "seed": 1, "replications": 1, "warmup_steps": 100,
//     "output": { "dir": "out", "timing": false }
//   }
//
// At least one of steps, epochs, evals must be positive. One epoch is
// num_samples / batch_size minibatch evaluations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "probls/errors.hpp"
#include "probls/objectives.hpp"
#include "probls/sgd_driver.hpp"

namespace probls {

struct BenchConfig {
  ProblemSpec problem;
  DriverConfig driver;
  std::vector<OptimizerMode> modes;  // sweep modes; defaults to {driver.mode}
  double epochs = 0.0;
  std::size_t replications = 1;
  std::size_t warmup_steps = 100;
  std::filesystem::path out_dir = "out";
  bool timing = false;
};

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown(const Json& obj, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return key == k; });
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

inline bool non_negative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline void read_count(const Json& obj, const char* key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!non_negative_integer(v)) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

inline void read_seed(const Json& obj, std::uint64_t& out) {
  if (!obj.contains("seed")) return;
  const Json& v = obj.at("seed");
  if (!non_negative_integer(v)) throw ConfigError("'seed' must be a non-negative integer");
  out = v.get<std::uint64_t>();
}

inline OptimizerMode mode_from(const Json& v) {
  if (!v.is_string()) throw ConfigError("optimizer mode must be a string");
  const auto mode = parse_optimizer_mode(v.get<std::string>());
  if (!mode) throw ConfigError("unknown optimizer mode '" + v.get<std::string>() + "'");
  return *mode;
}

inline double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace detail

// Validates cross-field constraints; throws ConfigError.
inline void validate(const BenchConfig& c) {
  const auto& d = c.driver;
  if (!(d.alpha0 > 0.0) || !std::isfinite(d.alpha0)) throw ConfigError("alpha0 must be > 0");
  if (d.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  for (OptimizerMode m : c.modes) {
    if (m == OptimizerMode::linesearch && d.batch_size < 2) {
      throw ConfigError("linesearch mode needs batch_size >= 2");
    }
  }
  if (d.max_steps == 0 && d.max_evals == 0 && !(c.epochs > 0.0)) {
    throw ConfigError("set one of optimizer.steps, optimizer.epochs, optimizer.evals");
  }
  if (c.epochs < 0.0 || !std::isfinite(c.epochs)) throw ConfigError("epochs must be >= 0");
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  if (d.search_budget < 1) throw ConfigError("search_budget must be >= 1");
  try {
    d.wolfe.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  const auto& p = c.problem;
  if (p.dimension < 1 || p.samples < 1) throw ConfigError("problem dimension/samples must be >= 1");
  if (!(p.test_fraction >= 0.0 && p.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must be in [0, 1)");
  }
  if (!(p.l2 >= 0.0) || !std::isfinite(p.l2)) throw ConfigError("l2 must be >= 0");
  if (!(p.separation >= 0.0) || !(p.shape.anisotropy >= 0.0) || !(p.shape.scale > 0.0)) {
    throw ConfigError("separation, anisotropy must be >= 0 and feature_scale > 0");
  }
  if (p.classes < 2) throw ConfigError("classes must be >= 2");
  if (p.hidden < 1) throw ConfigError("hidden must be >= 1");
}

// Parses a config document. Relative dataset paths resolve against base_dir.
inline BenchConfig parse_config(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir = {}) {
  using detail::read;
  using detail::read_seed;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(doc, {"problem", "optimizer", "seed", "replications", "warmup_steps",
                               "output"},
                         "config");
  BenchConfig c;

  if (doc.contains("problem")) {
    const auto& p = doc.at("problem");
    if (!p.is_object()) throw ConfigError("'problem' must be an object");
    detail::reject_unknown(p, {"kind", "dimension", "samples", "classes", "separation",
                               "anisotropy", "feature_scale", "l2", "test_fraction",
                               "standardize", "data", "noise", "condition", "hidden", "seed"},
                           "problem");
    if (p.contains("kind")) {
      std::string kind;
      read(p, "kind", kind);
      const auto k = parse_problem_kind(kind);
      if (!k) throw ConfigError("unknown problem kind '" + kind + "'");
      c.problem.kind = *k;
    }
    detail::read_count(p, "dimension", c.problem.dimension);
    detail::read_count(p, "samples", c.problem.samples);
    read(p, "classes", c.problem.classes);
    read(p, "separation", c.problem.separation);
    read(p, "anisotropy", c.problem.shape.anisotropy);
    read(p, "feature_scale", c.problem.shape.scale);
    read(p, "l2", c.problem.l2);
    read(p, "test_fraction", c.problem.test_fraction);
    read(p, "standardize", c.problem.standardize);
    read(p, "noise", c.problem.noise);
    read(p, "condition", c.problem.condition);
    detail::read_count(p, "hidden", c.problem.hidden);
    read_seed(p, c.problem.seed);
    if (p.contains("data")) {
      std::string data;
      read(p, "data", data);
      std::filesystem::path path(data);
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      c.problem.data_path = path.string();
    }
  }

  if (doc.contains("optimizer")) {
    const auto& o = doc.at("optimizer");
    if (!o.is_object()) throw ConfigError("'optimizer' must be an object");
    detail::reject_unknown(o, {"mode", "modes", "alpha0", "batch_size", "steps", "epochs",
                               "evals", "search_budget", "c1", "c2", "wolfe_threshold",
                               "strong_wolfe", "reuse_accepted_batch"},
                           "optimizer");
    if (o.contains("mode")) c.driver.mode = detail::mode_from(o.at("mode"));
    if (o.contains("modes")) {
      if (!o.at("modes").is_array() || o.at("modes").empty()) {
        throw ConfigError("'modes' must be a non-empty array");
      }
      for (const auto& m : o.at("modes")) c.modes.push_back(detail::mode_from(m));
    }
    read(o, "alpha0", c.driver.alpha0);
    detail::read_count(o, "batch_size", c.driver.batch_size);
    detail::read_count(o, "steps", c.driver.max_steps);
    read(o, "epochs", c.epochs);
    detail::read_count(o, "evals", c.driver.max_evals);
    read(o, "search_budget", c.driver.search_budget);
    read(o, "c1", c.driver.wolfe.c1);
    read(o, "c2", c.driver.wolfe.c2);
    read(o, "wolfe_threshold", c.driver.wolfe.threshold);
    read(o, "strong_wolfe", c.driver.wolfe.strong);
    read(o, "reuse_accepted_batch", c.driver.reuse_accepted_batch);
  }
  if (c.modes.empty()) c.modes.push_back(c.driver.mode);

  detail::read_seed(doc, c.driver.seed);
  detail::read_count(doc, "replications", c.replications);
  detail::read_count(doc, "warmup_steps", c.warmup_steps);

  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    if (!out.is_object()) throw ConfigError("'output' must be an object");
    detail::reject_unknown(out, {"dir", "timing"}, "output");
    if (out.contains("dir")) {
      std::string dir;
      read(out, "dir", dir);
      c.out_dir = dir;
    }
    read(out, "timing", c.timing);
  }
  validate(c);
  return c;
}

inline BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

inline std::unique_ptr<Objective> build_problem(const ProblemSpec& spec) {
  try {
    return make_problem(spec);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  } catch (const ParseError& e) {
    throw ConfigError("dataset " + spec.data_path + ": " + e.what());
  }
}

// Driver settings for one run, with the epoch budget resolved.
inline DriverConfig resolve_driver(const BenchConfig& c, const Objective& objective,
                                   OptimizerMode mode, double alpha0, std::uint64_t seed) {
  DriverConfig d = c.driver;
  d.mode = mode;
  d.alpha0 = alpha0;
  d.seed = seed;
  if (c.epochs > 0.0) {
    const double evals = std::ceil(c.epochs * static_cast<double>(objective.num_samples()) /
                                   static_cast<double>(d.batch_size));
    const auto n = static_cast<std::size_t>(std::max(1.0, evals));
    d.max_evals = d.max_evals ? std::min(d.max_evals, n) : n;
  }
  return d;
}

struct RunSummary {
  OptimizerMode mode = OptimizerMode::linesearch;
  double alpha0 = 0.0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t total_evals = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool nonfinite = false;
  bool diverged = false;  // non-finite, or final loss above 10x the initial loss
  std::optional<double> final_train_error;
  std::optional<double> final_test_error;
  // Line-search statistics over non-fallback steps; empty for SGD modes.
  std::optional<double> mean_evals_per_search;
  std::optional<double> frac_single_eval;
  std::optional<double> frac_forced;
  std::optional<double> frac_fallback;
  std::size_t warmup_steps = 0;
  std::optional<double> mean_evals_per_search_after_warmup;
  std::optional<double> frac_single_eval_after_warmup;
  double mean_batch_evals_per_step = 0.0;
};

inline RunSummary summarize(const Objective& objective, const RunTrace& trace,
                            const DriverConfig& driver, double initial_loss,
                            std::size_t warmup_steps) {
  RunSummary s;
  s.mode = driver.mode;
  s.alpha0 = driver.alpha0;
  s.seed = driver.seed;
  s.steps = trace.rows.size();
  s.total_evals = trace.total_evals;
  s.initial_loss = initial_loss;
  s.nonfinite = trace.diverged || !trace.x_final.allFinite();
  s.final_loss = s.nonfinite ? std::numeric_limits<double>::infinity()
                             : objective.full_loss(trace.x_final);
  if (!std::isfinite(s.final_loss)) s.nonfinite = true;
  s.diverged = s.nonfinite || s.final_loss > 10.0 * initial_loss;
  if (!s.nonfinite) {
    s.final_train_error = objective.train_error(trace.x_final);
    s.final_test_error = objective.test_error(trace.x_final);
  }
  s.warmup_steps = warmup_steps;
  if (!trace.rows.empty()) {
    double batch = 0.0;
    for (const auto& r : trace.rows) batch += r.batch_evals;
    s.mean_batch_evals_per_step = batch / static_cast<double>(trace.rows.size());
  }
  if (driver.mode != OptimizerMode::linesearch) return s;

  struct Tally {
    std::size_t searches = 0, single = 0, forced = 0, evals = 0;
  };
  auto tally = [&](std::size_t from) {
    Tally t;
    for (std::size_t i = from; i < trace.rows.size(); ++i) {
      const auto& r = trace.rows[i];
      if (r.fallback) continue;
      ++t.searches;
      t.evals += static_cast<std::size_t>(r.evals);
      if (r.evals == 1) ++t.single;
      if (r.forced) ++t.forced;
    }
    return t;
  };
  const Tally all = tally(0);
  std::size_t fallbacks = 0;
  for (const auto& r : trace.rows) fallbacks += r.fallback ? 1 : 0;
  if (!trace.rows.empty()) {
    s.frac_fallback = static_cast<double>(fallbacks) / static_cast<double>(trace.rows.size());
  }
  if (all.searches > 0) {
    const auto n = static_cast<double>(all.searches);
    s.mean_evals_per_search = static_cast<double>(all.evals) / n;
    s.frac_single_eval = static_cast<double>(all.single) / n;
    s.frac_forced = static_cast<double>(all.forced) / n;
  }
  const Tally late = tally(warmup_steps);
  if (late.searches > 0) {
    const auto n = static_cast<double>(late.searches);
    s.mean_evals_per_search_after_warmup = static_cast<double>(late.evals) / n;
    s.frac_single_eval_after_warmup = static_cast<double>(late.single) / n;
  }
  return s;
}

inline nlohmann::json to_json(const RunSummary& s) {
  using detail::number_or_null;
  nlohmann::json j;
  j["mode"] = to_string(s.mode);
  j["alpha0"] = s.alpha0;
  j["seed"] = s.seed;
  j["steps"] = s.steps;
  j["total_evals"] = s.total_evals;
  j["initial_loss"] = number_or_null(s.initial_loss);
  j["final_loss"] = number_or_null(s.final_loss);
  j["nonfinite"] = s.nonfinite;
  j["diverged"] = s.diverged;
  j["final_train_error"] = number_or_null(s.final_train_error);
  j["final_test_error"] = number_or_null(s.final_test_error);
  j["mean_evals_per_search"] = number_or_null(s.mean_evals_per_search);
  j["frac_single_eval"] = number_or_null(s.frac_single_eval);
  j["frac_forced"] = number_or_null(s.frac_forced);
  j["frac_fallback"] = number_or_null(s.frac_fallback);
  j["warmup_steps"] = s.warmup_steps;
  j["mean_evals_per_search_after_warmup"] = number_or_null(s.mean_evals_per_search_after_warmup);
  j["frac_single_eval_after_warmup"] = number_or_null(s.frac_single_eval_after_warmup);
  j["mean_batch_evals_per_step"] = number_or_null(s.mean_batch_evals_per_step);
  return j;
}

// Trace CSV. Columns: step, loss, t_accepted, step_size, evals, batch_evals,
// sigma_f, sigma_df, p_wolfe, forced, fallback, and wall_time when timing
// is on. Without timing the bytes depend only on the config and seed.
inline std::string trace_csv(const RunTrace& trace, bool timing) {
  using detail::format_double;
  std::string out =
      "step,loss,t_accepted,step_size,evals,batch_evals,sigma_f,sigma_df,p_wolfe,forced,"
      "fallback";
  out += timing ? ",wall_time\n" : "\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.step);
    out += ',' + format_double(r.loss);
    out += ',' + format_double(r.t_accepted);
    out += ',' + format_double(r.step_size);
    out += ',' + std::to_string(r.evals);
    out += ',' + std::to_string(r.batch_evals);
    out += ',' + format_double(r.sigma_f);
    out += ',' + format_double(r.sigma_df);
    out += ',' + format_double(r.p_wolfe);
    out += r.forced ? ",1" : ",0";
    out += r.fallback ? ",1" : ",0";
    if (timing) out += ',' + format_double(r.wall_time);
    out += '\n';
  }
  return out;
}

struct RunArtifacts {
  RunTrace trace;
  RunSummary summary;
};

inline RunArtifacts execute(const Objective& objective, const BenchConfig& c, OptimizerMode mode,
                            double alpha0, std::uint64_t seed) {
  const DriverConfig d = resolve_driver(c, objective, mode, alpha0, seed);
  const double initial_loss = objective.full_loss(objective.initial_point(seed));
  RunArtifacts a;
  a.trace = run(objective, d);
  a.summary = summarize(objective, a.trace, d, initial_loss, c.warmup_steps);
  return a;
}

inline void write_run(const RunArtifacts& a, const std::filesystem::path& trace_path,
                      const std::filesystem::path& summary_path, bool timing) {
  detail::write_file_atomically(trace_path, trace_csv(a.trace, timing));
  detail::write_file_atomically(summary_path, to_json(a.summary).dump(2) + "\n");
}

// Single run; writes <out>/trace.csv and <out>/summary.json.
inline RunSummary cmd_run(const BenchConfig& c) {
  validate(c);
  const auto objective = build_problem(c.problem);
  detail::ensure_directory(c.out_dir);
  const RunArtifacts a = execute(*objective, c, c.driver.mode, c.driver.alpha0, c.driver.seed);
  write_run(a, c.out_dir / "trace.csv", c.out_dir / "summary.json", c.timing);
  return a.summary;
}

struct AggregateRow {
  OptimizerMode mode = OptimizerMode::linesearch;
  double alpha0 = 0.0;
  std::size_t reps = 0;
  std::size_t diverged = 0;
  double final_loss_mean = 0.0, final_loss_2sd = 0.0;
  double test_error_mean = 0.0, test_error_2sd = 0.0;
  double train_error_mean = 0.0, train_error_2sd = 0.0;
  double evals_per_search_mean = 0.0;  // after warm-up; NaN for SGD modes
  double frac_single_eval_mean = 0.0;
};

inline AggregateRow aggregate(const std::vector<RunSummary>& runs) {
  detail::expects(!runs.empty(), "aggregate: no runs");
  AggregateRow row;
  row.mode = runs.front().mode;
  row.alpha0 = runs.front().alpha0;
  row.reps = runs.size();
  std::vector<double> loss, test, train, evals, single;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : runs) {
    row.diverged += r.diverged ? 1 : 0;
    loss.push_back(r.final_loss);
    test.push_back(r.final_test_error.value_or(nan));
    train.push_back(r.final_train_error.value_or(nan));
    evals.push_back(r.mean_evals_per_search_after_warmup.value_or(nan));
    single.push_back(r.frac_single_eval_after_warmup.value_or(nan));
  }
  row.final_loss_mean = detail::mean_of(loss);
  row.final_loss_2sd = 2.0 * detail::sample_sd(loss, row.final_loss_mean);
  row.test_error_mean = detail::mean_of(test);
  row.test_error_2sd = 2.0 * detail::sample_sd(test, row.test_error_mean);
  row.train_error_mean = detail::mean_of(train);
  row.train_error_2sd = 2.0 * detail::sample_sd(train, row.train_error_mean);
  row.evals_per_search_mean = detail::mean_of(evals);
  row.frac_single_eval_mean = detail::mean_of(single);
  return row;
}

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  using detail::format_double;
  std::string out =
      "mode,alpha0,reps,diverged,final_loss_mean,final_loss_2sd,test_error_mean,"
      "test_error_2sd,train_error_mean,train_error_2sd,evals_per_search_mean,"
      "frac_single_eval_mean\n";
  for (const auto& r : rows) {
    out += to_string(r.mode) + ',' + format_double(r.alpha0) + ',' + std::to_string(r.reps) +
           ',' + std::to_string(r.diverged);
    for (double v : {r.final_loss_mean, r.final_loss_2sd, r.test_error_mean, r.test_error_2sd,
                     r.train_error_mean, r.train_error_2sd, r.evals_per_search_mean,
                     r.frac_single_eval_mean}) {
      out += ',' + format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline std::string run_stem(OptimizerMode mode, double alpha0, std::size_t rep) {
  return to_string(mode) + "_alpha" + detail::format_double(alpha0) + "_rep" + std::to_string(rep);
}

// Every (mode, alpha0) cell runs `replications` seeds: seed, seed + 1, ...
// Writes trace_<stem>.csv and summary_<stem>.json per run and aggregate.csv.
inline std::vector<AggregateRow> cmd_sweep(const BenchConfig& c, const std::vector<double>& alphas) {
  validate(c);
  if (alphas.empty()) throw ConfigError("sweep needs at least one alpha0");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("sweep alphas must be > 0");
  }
  const auto objective = build_problem(c.problem);
  detail::ensure_directory(c.out_dir);
  std::vector<AggregateRow> rows;
  for (OptimizerMode mode : c.modes) {
    for (double alpha0 : alphas) {
      std::vector<RunSummary> runs;
      for (std::size_t rep = 0; rep < c.replications; ++rep) {
        const RunArtifacts a = execute(*objective, c, mode, alpha0, c.driver.seed + rep);
        const std::string stem = run_stem(mode, alpha0, rep);
        write_run(a, c.out_dir / ("trace_" + stem + ".csv"),
                  c.out_dir / ("summary_" + stem + ".json"), c.timing);
        runs.push_back(a.summary);
      }
      rows.push_back(aggregate(runs));
    }
  }
  detail::write_file_atomically(c.out_dir / "aggregate.csv", aggregate_csv(rows));
  return rows;
}

struct GenDataArgs {
  int classes = 2;
  std::size_t rows = 1000;
  std::size_t dims = 20;
  double separation = 3.0;
  SynthShape shape;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

inline Dataset cmd_gen_data(const GenDataArgs& args) {
  if (args.classes < 2 || args.rows < 1 || args.dims < 1) {
    throw ConfigError("gen-data needs classes >= 2, rows >= 1, dims >= 1");
  }
  if (!(args.separation >= 0.0) || !(args.shape.anisotropy >= 0.0) || !(args.shape.scale > 0.0)) {
    throw ConfigError("gen-data: separation, anisotropy must be >= 0 and scale > 0");
  }
  if (args.out.empty()) throw ConfigError("gen-data needs --out");
  Dataset data = gen_synth(args.classes, args.rows, args.dims, args.separation, args.seed,
                           args.shape);
  if (args.out.has_parent_path()) detail::ensure_directory(args.out.parent_path());
  write_csv(args.out, data);
  return data;
}

// Parses "1e-3,0.01, 1". Throws ConfigError on malformed entries.
inline std::vector<double> parse_alpha_list(std::string_view list) {
  std::vector<double> out;
  for (auto field : detail::split_commas(list)) {
    double v = 0.0;
    if (!detail::parse_double(field, v)) {
      throw ConfigError("bad alpha list entry '" + std::string(field) + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace probls
