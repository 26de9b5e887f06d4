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

// Experiment runner: repeated train/test draws, the training-time budget rule and the
// contamination sweep, plus the CSV tables written from the resulting records.
//
// Per repetition r the seed is base_seed + r. Random streams are derived from that seed
// and a purpose tag so that, for instance, the contamination of one method's training set
// does not depend on how far the (timing-driven) budget loop shrank another method's:
//   data    generate_mixture(seed)             (synthetic mode)
//   split   derive_seed(seed, kSplitStream)
//   budget  derive_seed(seed, kBudgetStream, method, level, step)
//   noise   derive_seed(seed, kNoiseStream, method, level, step)

#ifndef FEMDA__HARNESS_HPP_
#define FEMDA__HARNESS_HPP_

#include "femda/classifiers.hpp"
#include "femda/dataio.hpp"
#include "femda/datagen.hpp"
#include "femda/error.hpp"
#include "femda/estimators.hpp"
#include "femda/metrics.hpp"
#include "femda/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>
#include <array>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace femda
{

enum class Mode
{
  Synthetic,
  Real,
};

inline std::vector<double> default_contamination_grid()
{
  std::vector<double> grid;
  for (int i = 0; i <= 7; ++i) grid.push_back(0.05 * i);
  return grid;
}

struct ExperimentConfig
{
  Mode mode = Mode::Synthetic;
  std::vector<Method> methods{all_methods.begin(), all_methods.end()};
  int repetitions = 5;
  double time_budget_factor = 30.0;
  /// Apply the training-time budget rule. Ignored (off) when record_timing is false.
  bool budget_enabled = true;
  /// With timing off every time column is 0 and the output is a pure function of the config.
  bool record_timing = true;
  /// Timed fits report the minimum over this many runs, after one discarded warm-up run.
  int timing_repeats = 3;
  double shrink_factor = 0.7;
  std::vector<double> contamination_grid = default_contamination_grid();

  SyntheticConfig synthetic;
  double train_fraction = 0.7;

  std::string dataset_path;
  LabelColumn label_column;
  bool has_header = false;
  /// 0 keeps the original dimension.
  int pca_dim = 0;

  FitConfig fit;
  ClassifierOptions classifier;
  std::uint64_t base_seed = 0;
  std::string output_dir = "results";

  bool budget_active() const { return budget_enabled && record_timing; }

  void validate() const
  {
    if (methods.empty()) fail(Errc::ConfigError, "method list is empty");
    if (repetitions < 1) fail(Errc::ConfigError, "repetitions must be >= 1");
    if (!(time_budget_factor >= 1.0)) fail(Errc::ConfigError, "time_budget_factor must be >= 1");
    if (timing_repeats < 1) fail(Errc::ConfigError, "timing_repeats must be >= 1");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) fail(Errc::ConfigError, "shrink_factor must lie in (0, 1)");
    if (contamination_grid.empty()) fail(Errc::ConfigError, "contamination grid is empty");
    for (std::size_t i = 0; i < contamination_grid.size(); ++i) {
      const double f = contamination_grid[i];
      if (!(f >= 0.0 && f <= 1.0)) fail(Errc::ConfigError, "contamination fractions must lie in [0, 1]");
      if (i > 0 && !(f > contamination_grid[i - 1])) {
        fail(Errc::ConfigError, "contamination grid must be strictly ascending");
      }
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail(Errc::ConfigError, "train_fraction must lie in (0, 1)");
    if (mode == Mode::Real && dataset_path.empty()) fail(Errc::ConfigError, "real mode needs a dataset path (--dataset)");
    if (pca_dim < 0) fail(Errc::ConfigError, "pca_dim must be >= 0");
    try {
      fit.validate();
      if (mode == Mode::Synthetic) synthetic.validate();
    } catch (const Error & e) {
      fail(Errc::ConfigError, e.what());
    }
    if (classifier.knn_k < 1) fail(Errc::ConfigError, "knn_k must be >= 1");
  }
};

/// One row of runs.csv: a (method, repetition, contamination level) evaluation.
struct RunRecord
{
  Method method = Method::QDA;
  int repetition = 0;
  std::uint64_t seed = 0;
  double contamination_fraction = 0.0;
  double data_fraction_used = 1.0;
  /// The budget loop hit its floor of K (m + 1) rows while still over budget.
  bool budget_floor = false;
  double train_time_s = 0.0;
  double predict_time_s = 0.0;
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double mu_rmse_pct = std::numeric_limits<double>::quiet_NaN();
  double sigma_riem = std::numeric_limits<double>::quiet_NaN();
  double sigma_riem_scale_matched = std::numeric_limits<double>::quiet_NaN();
  int converged_clusters = 0;
  /// Empty on success; otherwise the error that stopped this method.
  std::string error;

  bool ok() const { return error.empty(); }
};

inline constexpr std::uint64_t kSplitStream = 1;
inline constexpr std::uint64_t kBudgetStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

inline std::uint64_t derive_seed(
  std::uint64_t seed, std::uint64_t stream, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(stream),
    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Train/test material for one repetition. `truth` is empty in real mode.
struct PreparedData
{
  DataMatrix train;
  Labels train_labels;
  DataMatrix test;
  Labels test_labels;
  std::vector<ClusterSpec> truth;
  int class_count = 0;
  std::optional<PcaTransform> pca;
};

inline PreparedData prepare_repetition(const ExperimentConfig & cfg, int rep, const Dataset * real)
{
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
  PreparedData out;
  Dataset all;
  if (cfg.mode == Mode::Synthetic) {
    SyntheticConfig sc = cfg.synthetic;
    sc.seed = seed;
    MixtureSample mix = generate_mixture(sc);
    all.name = "synthetic";
    all.data = std::move(mix.data);
    all.labels = std::move(mix.labels);
    all.class_count = sc.k;
    out.truth = std::move(mix.truth);
  } else {
    if (!real) fail(Errc::InvalidArgument, "real mode needs a loaded dataset");
    all = *real;
  }
  auto parts = split(all, cfg.train_fraction, derive_seed(seed, kSplitStream));
  out.class_count = all.class_count;
  if (cfg.mode == Mode::Real && cfg.pca_dim > 0) {
    out.pca = fit_pca(parts.train.data, cfg.pca_dim);
    out.train = apply_pca(*out.pca, parts.train.data);
    out.test = apply_pca(*out.pca, parts.test.data);
  } else {
    out.train = std::move(parts.train.data);
    out.test = std::move(parts.test.data);
  }
  out.train_labels = std::move(parts.train.labels);
  out.test_labels = std::move(parts.test.labels);
  return out;
}

namespace detail
{

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TimedFit
{
  FittedClassifier clf;
  double seconds = 0.0;
};

inline TimedFit timed_fit(
  const ExperimentConfig & cfg, Method method, const DataMatrix & x, const Labels & y, bool warm_up)
{
  TimedFit out;
  if (!cfg.record_timing) {
    out.clf = fit(method, x, y, cfg.fit, cfg.classifier);
    return out;
  }
  if (warm_up) (void)fit(method, x, y, cfg.fit, cfg.classifier);
  out.seconds = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.timing_repeats; ++r) {
    const auto start = Clock::now();
    out.clf = fit(method, x, y, cfg.fit, cfg.classifier);
    out.seconds = std::min(out.seconds, seconds_since(start));
  }
  return out;
}

inline bool every_class_has(const Labels & labels, const std::vector<Index> & rows, int k_count, int min_rows)
{
  std::vector<int> counts(static_cast<std::size_t>(k_count), 0);
  for (const auto r : rows) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  return std::all_of(counts.begin(), counts.end(), [&](int c) { return c >= min_rows; });
}

/// Uniform subset of `rows` of size `target` (sorted), redrawn until every class keeps
/// two rows. Empty when no such draw is found.
inline std::vector<Index> shrink_rows(
  const std::vector<Index> & rows, std::size_t target, const Labels & labels, int k_count, Rng & rng)
{
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Index> pick = rows;
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(target);
    std::sort(pick.begin(), pick.end());
    if (every_class_has(labels, pick, k_count, 2)) return pick;
  }
  return {};
}

struct LevelState
{
  std::vector<Index> rows;  // into PreparedData::train
  std::optional<TimedFit> fitted;
  std::string error;
  std::uint64_t step = 0;
};

inline std::string describe(const std::exception & e) { return e.what(); }

}  // namespace detail

/// Runs every (repetition, contamination level, method) evaluation.
///
/// Within a repetition the levels are visited in grid order. At each level every method is
/// fitted on its current row subset with floor(f n_sub) rows replaced by bounding-box noise,
/// and timed. When the budget is active, any method slower than T times the fastest fit of
/// the repetition has its subset shrunk (uniformly, factor shrink_factor, never below
/// K (m + 1) rows) and is refitted until it fits. A level starts from the subset the previous
/// level ended with. Because the fastest fit of the repetition is only known at the end, a
/// final pass re-settles any level that a later, faster fit put over budget. Test sets are
/// never touched.
inline std::vector<RunRecord> run_experiment(
  const ExperimentConfig & cfg, const Dataset * real = nullptr,
  const std::function<void(const RunRecord &)> & on_record = {})
{
  cfg.validate();
  std::vector<RunRecord> records;
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_levels = cfg.contamination_grid.size();

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
    const PreparedData prep = prepare_repetition(cfg, rep, real);
    const Index n_train = prep.train.rows();
    const auto floor_rows = static_cast<std::size_t>(
      std::min<Index>(n_train, static_cast<Index>(prep.class_count) * (prep.train.cols() + 1)));

    std::vector<std::vector<detail::LevelState>> state(n_levels, std::vector<detail::LevelState>(n_methods));

    auto fit_on_rows = [&](std::size_t level, std::size_t j, bool warm_up) {
      auto & s = state[level][j];
      Rng noise_rng(derive_seed(seed, kNoiseStream, j, level, s.step));
      const DataMatrix x = contaminate(select_rows(prep.train, s.rows), cfg.contamination_grid[level], noise_rng);
      const Labels y = select_labels(prep.train_labels, s.rows);
      try {
        s.fitted = detail::timed_fit(cfg, cfg.methods[j], x, y, warm_up);
        s.error.clear();
      } catch (const std::exception & e) {
        s.fitted.reset();
        s.error = detail::describe(e);
      }
    };

    double fastest = std::numeric_limits<double>::infinity();
    auto note_fastest = [&](const detail::LevelState & s) {
      if (s.fitted) fastest = std::min(fastest, s.fitted->seconds);
    };

    // Shrinks every over-budget method at one level; true if anything was refitted.
    auto settle = [&](std::size_t level) {
      bool changed = false;
      for (std::size_t j = 0; j < n_methods; ++j) {
        auto & s = state[level][j];
        while (s.fitted && s.fitted->seconds > cfg.time_budget_factor * fastest) {
          const auto target = std::max(
            floor_rows, static_cast<std::size_t>(std::floor(cfg.shrink_factor * static_cast<double>(s.rows.size()))));
          if (target >= s.rows.size()) break;
          ++s.step;
          Rng budget_rng(derive_seed(seed, kBudgetStream, j, level, s.step));
          auto smaller = detail::shrink_rows(s.rows, target, prep.train_labels, prep.class_count, budget_rng);
          if (smaller.empty()) break;
          s.rows = std::move(smaller);
          fit_on_rows(level, j, false);
          note_fastest(s);
          changed = true;
        }
      }
      return changed;
    };

    for (std::size_t level = 0; level < n_levels; ++level) {
      for (std::size_t j = 0; j < n_methods; ++j) {
        auto & s = state[level][j];
        if (level == 0) {
          s.rows.resize(static_cast<std::size_t>(n_train));
          std::iota(s.rows.begin(), s.rows.end(), Index{0});
        } else {
          s.rows = state[level - 1][j].rows;
        }
        fit_on_rows(level, j, true);
        note_fastest(s);
      }
      if (cfg.budget_active()) settle(level);
    }
    if (cfg.budget_active()) {
      for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (std::size_t level = 0; level < n_levels; ++level) changed = settle(level) || changed;
        if (!changed) break;
      }
    }

    for (std::size_t level = 0; level < n_levels; ++level) {
      for (std::size_t j = 0; j < n_methods; ++j) {
        const auto & s = state[level][j];
        RunRecord rec;
        rec.method = cfg.methods[j];
        rec.repetition = rep;
        rec.seed = seed;
        rec.contamination_fraction = cfg.contamination_grid[level];
        rec.data_fraction_used = static_cast<double>(s.rows.size()) / static_cast<double>(n_train);
        rec.budget_floor =
          cfg.budget_active() && s.fitted && s.fitted->seconds > cfg.time_budget_factor * fastest;
        if (!s.fitted) {
          rec.error = s.error.empty() ? "fit failed" : s.error;
        } else {
          try {
            const auto & clf = s.fitted->clf;
            rec.train_time_s = s.fitted->seconds;
            const auto start = detail::Clock::now();
            const Labels pred = predict(clf, prep.test);
            rec.predict_time_s = cfg.record_timing ? detail::seconds_since(start) : 0.0;
            rec.accuracy = accuracy(pred, prep.test_labels);
            for (const auto & model : clf.models) rec.converged_clusters += model.converged ? 1 : 0;
            if (!prep.truth.empty() && !clf.models.empty()) {
              const auto report = cluster_matched_report(clf.models, prep.truth, pred, prep.test_labels, {});
              rec.mu_rmse_pct = report.mu_rmse_pct;
              rec.sigma_riem = report.sigma_riem;
              rec.sigma_riem_scale_matched = report.sigma_riem_scale_matched;
            }
          } catch (const std::exception & e) {
            rec.error = detail::describe(e);
          }
        }
        if (on_record) on_record(rec);
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

/// Budgeted comparison over the whole grid; with the default grid this is the full protocol.
inline std::vector<RunRecord> run_budgeted(const ExperimentConfig & cfg, const Dataset * real = nullptr)
{
  return run_experiment(cfg, real);
}

/// Same protocol; every grid level is evaluated against the clean test set.
inline std::vector<RunRecord> run_contamination_sweep(const ExperimentConfig & cfg, const Dataset * real = nullptr)
{
  return run_experiment(cfg, real);
}

// ---------------------------------------------------------------------------
// CSV output.

namespace detail
{

inline std::string format_real(double v)
{
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_field(const std::string & text)
{
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    out += c == '"' ? "\"\"" : std::string(1, c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

inline const char * runs_header()
{
  return "method,repetition,seed,contamination_fraction,data_fraction_used,budget_floor,train_time_s,"
         "predict_time_s,accuracy,mu_rmse_pct,sigma_riem,sigma_riem_scale_matched,converged_clusters,error";
}

}  // namespace detail

/// Output tables, in this order: runs.csv, accuracy_by_method.csv, timing_by_method.csv,
/// estimation_errors.csv, contamination_curve.csv. See README for the column layout.
inline std::vector<std::pair<std::string, std::string>> render_csv(const std::vector<RunRecord> & records)
{
  if (records.empty()) fail(Errc::InvalidArgument, "no records to write");
  using detail::format_real;

  std::vector<Method> methods;
  std::set<int> reps;
  std::set<double> fractions;
  for (const auto & r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    reps.insert(r.repetition);
    fractions.insert(r.contamination_fraction);
  }
  const double clean = *fractions.begin();

  std::map<std::tuple<Method, int, double>, const RunRecord *> at;
  for (const auto & r : records) at[{r.method, r.repetition, r.contamination_fraction}] = &r;
  auto lookup = [&](Method m, int rep, double f) -> const RunRecord * {
    const auto it = at.find({m, rep, f});
    return it == at.end() || !it->second->ok() ? nullptr : it->second;
  };

  std::ostringstream runs;
  runs << detail::runs_header() << '\n';
  for (const auto & r : records) {
    runs << method_name(r.method) << ',' << r.repetition << ',' << r.seed << ',' << format_real(r.contamination_fraction)
         << ',' << format_real(r.data_fraction_used) << ',' << (r.budget_floor ? 1 : 0) << ','
         << format_real(r.train_time_s) << ',' << format_real(r.predict_time_s) << ',' << format_real(r.accuracy)
         << ',' << format_real(r.mu_rmse_pct) << ',' << format_real(r.sigma_riem) << ','
         << format_real(r.sigma_riem_scale_matched) << ',' << r.converged_clusters << ','
         << detail::csv_field(r.error) << '\n';
  }

  auto rep_header = [&](std::ostringstream & os, const char * lead) {
    os << lead;
    for (const int rep : reps) os << ",rep_" << rep;
    os << '\n';
  };
  auto rep_row = [&](std::ostringstream & os, Method m, const std::function<double(const RunRecord &)> & get) {
    for (const int rep : reps) {
      const auto * r = lookup(m, rep, clean);
      os << ',' << (r ? format_real(get(*r)) : "");
    }
    os << '\n';
  };

  std::ostringstream acc;
  rep_header(acc, "method");
  for (const auto m : methods) {
    acc << method_name(m);
    rep_row(acc, m, [](const RunRecord & r) { return r.accuracy; });
  }

  const std::vector<std::pair<const char *, std::function<double(const RunRecord &)>>> timing_rows{
    {"train_time_s", [](const RunRecord & r) { return r.train_time_s; }},
    {"predict_time_s", [](const RunRecord & r) { return r.predict_time_s; }},
    {"total_time_s", [](const RunRecord & r) { return r.train_time_s + r.predict_time_s; }},
    {"data_fraction_used", [](const RunRecord & r) { return r.data_fraction_used; }},
  };
  std::ostringstream timing;
  rep_header(timing, "method,quantity");
  for (const auto m : methods) {
    for (const auto & [name, get] : timing_rows) {
      timing << method_name(m) << ',' << name;
      rep_row(timing, m, get);
    }
  }

  const std::vector<std::pair<const char *, std::function<double(const RunRecord &)>>> error_rows{
    {"mu_rmse_pct", [](const RunRecord & r) { return r.mu_rmse_pct; }},
    {"sigma_riem", [](const RunRecord & r) { return r.sigma_riem; }},
    {"sigma_riem_scale_matched", [](const RunRecord & r) { return r.sigma_riem_scale_matched; }},
  };
  std::ostringstream errors;
  rep_header(errors, "method,quantity");
  for (const auto m : methods) {
    for (const auto & [name, get] : error_rows) {
      errors << method_name(m) << ',' << name;
      rep_row(errors, m, get);
    }
  }

  std::ostringstream curve;
  curve << "fraction";
  for (const auto m : methods) curve << ',' << method_name(m);
  curve << '\n';
  for (const double f : fractions) {
    curve << format_real(f);
    for (const auto m : methods) {
      double sum = 0.0;
      int count = 0;
      for (const int rep : reps) {
        if (const auto * r = lookup(m, rep, f)) {
          sum += r->accuracy;
          ++count;
        }
      }
      curve << ',' << (count > 0 ? format_real(sum / count) : "");
    }
    curve << '\n';
  }

  return {
    {"runs.csv", runs.str()},
    {"accuracy_by_method.csv", acc.str()},
    {"timing_by_method.csv", timing.str()},
    {"estimation_errors.csv", errors.str()},
    {"contamination_curve.csv", curve.str()},
  };
}

/// Renders every table before touching the filesystem, so a failure leaves no partial output.
inline std::vector<std::filesystem::path> emit_csv(
  const std::vector<RunRecord> & records, const std::filesystem::path & output_dir)
{
  const auto tables = render_csv(records);
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) fail(Errc::IoError, "cannot create " + output_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto & [name, body] : tables) {
    const auto path = output_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) fail(Errc::IoError, "cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

/// label_map.csv for a real dataset: dense id and original label text.
inline std::filesystem::path emit_label_map(const Dataset & ds, const std::filesystem::path & output_dir)
{
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) fail(Errc::IoError, "cannot create " + output_dir.string() + ": " + ec.message());
  const auto path = output_dir / "label_map.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "label_id,label\n";
  for (std::size_t k = 0; k < ds.label_names.size(); ++k) out << k << ',' << detail::csv_field(ds.label_names[k]) << '\n';
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  return path;
}

}  // namespace femda

#endif  // FEMDA__HARNESS_HPP_
