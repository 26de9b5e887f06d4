// Copyright 2026 The femda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// femda: benchmark runner.
//
//   femda synthetic [--config f.yaml] [--seed S] [--out DIR] [--methods a,b] [--contamination 0,0.1]
//   femda real --dataset glass.csv [--pca-dim D] [...]
//   femda validate
//   femda selftest
//
// Exit status: 0 success, 1 config/usage error, 2 runtime error (or a failed check).

#include "femda/config.hpp"
#include "femda/femda.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string methods;
  std::string contamination;
  std::string dataset;
  std::optional<int> pca_dim;
  std::optional<int> repetitions;
  bool no_timing = false;
  bool quiet = false;
};

void add_run_flags(CLI::App & cmd, Overrides & o)
{
  cmd.add_option("--config", o.config, "YAML config file");
  cmd.add_option("--seed", o.seed, "base seed (repetition r uses seed + r)");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--methods", o.methods, "comma-separated subset of qda,rqda,femda,t-qda,knn");
  cmd.add_option("--contamination", o.contamination, "comma-separated contamination fractions");
  cmd.add_option("--repetitions", o.repetitions, "number of repetitions");
  cmd.add_flag("--no-timing", o.no_timing, "zero the time columns and disable the budget rule");
  cmd.add_flag("--quiet", o.quiet, "no progress output");
}

femda::ExperimentConfig build_config(femda::Mode mode, const Overrides & o)
{
  femda::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = femda::load_config(o.config, cfg);
  cfg.mode = mode;
  if (o.seed) cfg.base_seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.methods.empty()) cfg.methods = femda::parse_method_list(o.methods);
  if (!o.contamination.empty()) cfg.contamination_grid = femda::parse_fraction_list(o.contamination);
  if (o.repetitions) cfg.repetitions = *o.repetitions;
  if (!o.dataset.empty()) cfg.dataset_path = o.dataset;
  if (o.pca_dim) cfg.pca_dim = *o.pca_dim;
  if (o.no_timing) cfg.record_timing = false;
  if (mode == femda::Mode::Real && cfg.dataset_path.empty()) {
    femda::fail(femda::Errc::ConfigError, "real mode needs --dataset <path> (or 'dataset' in the config)");
  }
  cfg.validate();
  return cfg;
}

int run_pipeline(femda::Mode mode, const Overrides & o)
{
  femda::ExperimentConfig cfg;
  try {
    cfg = build_config(mode, o);
  } catch (const femda::Error & e) {
    std::cerr << "femda: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    std::optional<femda::Dataset> dataset;
    if (mode == femda::Mode::Real) {
      dataset = femda::load_csv(cfg.dataset_path, cfg.label_column, cfg.has_header);
    }
    auto progress = [&](const femda::RunRecord & r) {
      if (o.quiet) return;
      if (r.ok()) {
        std::fprintf(stderr, "rep %d  f=%.2f  %-6s acc=%.4f  train=%.4gs  data=%.3f%s\n", r.repetition,
                     r.contamination_fraction, std::string(femda::method_name(r.method)).c_str(), r.accuracy,
                     r.train_time_s, r.data_fraction_used, r.budget_floor ? "  (floor)" : "");
      } else {
        std::fprintf(stderr, "rep %d  f=%.2f  %-6s error: %s\n", r.repetition, r.contamination_fraction,
                     std::string(femda::method_name(r.method)).c_str(), r.error.c_str());
      }
    };
    const auto records = femda::run_experiment(cfg, dataset ? &*dataset : nullptr, progress);
    const auto files = femda::emit_csv(records, cfg.output_dir);
    if (dataset) femda::emit_label_map(*dataset, cfg.output_dir);
    if (!o.quiet) {
      for (const auto & f : files) std::fprintf(stderr, "wrote %s\n", f.string().c_str());
    }
  } catch (const femda::Error & e) {
    std::cerr << "femda: " << femda::errc_name(e.code()) << ": " << e.what() << '\n';
    return e.code() == femda::Errc::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception & e) {
    std::cerr << "femda: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int report(const std::vector<femda::CheckResult> & checks, bool quiet)
{
  bool all = true;
  for (const auto & c : checks) {
    all = all && c.passed;
    if (!quiet || !c.passed) {
      std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
  }
  return all ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Robust discriminant analysis benchmarks"};
  app.require_subcommand(1);

  Overrides synth;
  auto * synthetic = app.add_subcommand("synthetic", "simulated mixtures: accuracy, estimation error, contamination");
  add_run_flags(*synthetic, synth);

  Overrides real_o;
  auto * real = app.add_subcommand("real", "CSV dataset with optional PCA");
  add_run_flags(*real, real_o);
  real->add_option("--dataset", real_o.dataset, "CSV file, label in the last column");
  real->add_option("--pca-dim", real_o.pca_dim, "PCA output dimension (0 keeps all)");

  bool validate_quiet = false;
  auto * validate = app.add_subcommand("validate", "oracle checks");
  validate->add_flag("--quiet", validate_quiet, "print failures only");

  bool selftest_quiet = false;
  auto * selftest = app.add_subcommand("selftest", "invariant checks");
  selftest->add_flag("--quiet", selftest_quiet, "print failures only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (synthetic->parsed()) return run_pipeline(femda::Mode::Synthetic, synth);
  if (real->parsed()) return run_pipeline(femda::Mode::Real, real_o);
  if (validate->parsed()) return report(femda::run_validation_suite(), validate_quiet);
  if (selftest->parsed()) return report(femda::run_selftest_suite(), selftest_quiet);
  return kExitConfig;
}
