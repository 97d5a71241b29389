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

// probls command-line harness.
//
//   probls run --config cfg.json [--alpha0 A] [--mode M] [--seed N] [--out DIR]
//   probls sweep --config cfg.json --alphas 1e-3,1e-2 --reps N [--out DIR]
//   probls gen-data --classes C --rows R --dims D --seed N --out FILE
//
// Exit codes: 0 ok, 2 config or usage error, 3 I/O error, 4 numerical failure.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "probls/bench.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kIoError = 3;
constexpr int kNumericalFailure = 4;

struct RunFlags {
  std::string config;
  std::optional<double> alpha0;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool timing = false;
};

struct SweepFlags {
  std::string config;
  std::string alphas;
  std::size_t reps = 1;
  std::optional<std::string> modes;
  std::optional<std::string> out;
  bool timing = false;
};

probls::BenchConfig load(const std::string& path, const std::optional<std::string>& out,
                         bool timing) {
  probls::BenchConfig c = probls::load_config(path);
  if (out) c.out_dir = *out;
  c.timing = c.timing || timing;
  return c;
}

int do_run(const RunFlags& f) {
  probls::BenchConfig c = load(f.config, f.out, f.timing);
  if (f.alpha0) c.driver.alpha0 = *f.alpha0;
  if (f.seed) c.driver.seed = *f.seed;
  if (f.mode) {
    const auto mode = probls::parse_optimizer_mode(*f.mode);
    if (!mode) throw probls::ConfigError("unknown mode '" + *f.mode + "'");
    c.driver.mode = *mode;
  }
  c.modes = {c.driver.mode};
  const probls::RunSummary s = probls::cmd_run(c);
  std::cout << probls::to_json(s).dump() << "\n";
  if (s.nonfinite) {
    std::cerr << "probls: run produced non-finite values\n";
    return kNumericalFailure;
  }
  return kOk;
}

int do_sweep(const SweepFlags& f) {
  probls::BenchConfig c = load(f.config, f.out, f.timing);
  c.replications = f.reps;
  if (f.modes) {
    c.modes.clear();
    for (auto name : probls::detail::split_commas(*f.modes)) {
      const auto mode = probls::parse_optimizer_mode(name);
      if (!mode) throw probls::ConfigError("unknown mode '" + std::string(name) + "'");
      c.modes.push_back(*mode);
    }
  }
  const auto rows = probls::cmd_sweep(c, probls::parse_alpha_list(f.alphas));
  std::cout << probls::aggregate_csv(rows);
  return kOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const probls::ConfigError& e) {
    std::cerr << "probls: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const probls::IoError& e) {
    std::cerr << "probls: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const probls::DegenerateSurrogate& e) {
    std::cerr << "probls: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const probls::NotDescentDirection& e) {
    std::cerr << "probls: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const probls::ContractViolation& e) {
    std::cerr << "probls: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "probls: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic line search for stochastic optimization"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run one optimization and write trace + summary");
  run_cmd->add_option("--config", run.config, "JSON config file")->required();
  run_cmd->add_option("--alpha0", run.alpha0, "Initial learning rate");
  run_cmd->add_option("--mode", run.mode, "linesearch | sgd-fixed | sgd-decay");
  run_cmd->add_option("--seed", run.seed, "Run seed");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--timing", run.timing, "Add a wall_time column to the trace");

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep alpha0 over modes and replications");
  sweep_cmd->add_option("--config", sweep.config, "JSON config file")->required();
  sweep_cmd->add_option("--alphas", sweep.alphas, "Comma-separated alpha0 values")->required();
  sweep_cmd->add_option("--reps", sweep.reps, "Replications per cell")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--modes", sweep.modes, "Comma-separated modes (default: from config)");
  sweep_cmd->add_option("--out", sweep.out, "Output directory");
  sweep_cmd->add_flag("--timing", sweep.timing, "Add a wall_time column to traces");

  probls::GenDataArgs gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic classification CSV");
  gen_cmd->add_option("--classes", gen.classes, "Number of classes")->required();
  gen_cmd->add_option("--rows", gen.rows, "Number of rows")->required();
  gen_cmd->add_option("--dims", gen.dims, "Feature dimension")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output CSV path")->required();
  gen_cmd->add_option("--separation", gen.separation, "Mahalanobis distance of class means");
  gen_cmd->add_option("--anisotropy", gen.shape.anisotropy, "Log-spread of axis scales");
  gen_cmd->add_option("--scale", gen.shape.scale, "Global feature scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run_cmd) return guarded([&] { return do_run(run); });
  if (*sweep_cmd) return guarded([&] { return do_sweep(sweep); });
  return guarded([&] {
    gen.out = gen_out;
    const auto data = probls::cmd_gen_data(gen);
    std::cout << "wrote " << data.rows() << " rows to " << gen.out.string() << "\n";
    return kOk;
  });
}
