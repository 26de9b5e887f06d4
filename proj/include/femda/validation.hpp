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

// Self-checks behind `femda validate` (independent oracles) and `femda selftest`
// (invariants). Each check is seeded and returns one pass/fail line.

#ifndef FEMDA__VALIDATION_HPP_
#define FEMDA__VALIDATION_HPP_

#include "femda/classifiers.hpp"
#include "femda/dataio.hpp"
#include "femda/datagen.hpp"
#include "femda/estimators.hpp"
#include "femda/harness.hpp"
#include "femda/oracles.hpp"
#include "femda/spd.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace femda
{

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail
{

inline std::string fmt(const char * pattern, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

/// Runs `body`; an exception turns into a failed check carrying its message.
inline CheckResult guarded(const std::string & name, const std::function<CheckResult()> & body)
{
  try {
    CheckResult r = body();
    r.name = name;
    return r;
  } catch (const std::exception & e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

inline double seconds_of(const std::function<void()> & body)
{
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline double relative_frobenius(const Matrix & est, const Matrix & truth)
{
  return (est - truth).norm() / truth.norm();
}

inline Matrix sample_covariance(const DataMatrix & x)
{
  const DataMatrix c = x.rowwise() - x.colwise().mean();
  return (c.transpose() * c) / static_cast<double>(x.rows() - 1);
}

}  // namespace detail

/// Closed-form t-QDA MMLE weight against the quadrature oracle on
/// nu in {2,5,10,50} x m in {4,10,20} x d in {0.1,1,10,100}; worst relative error <= 1e-6
/// within 30 s.
inline CheckResult check_weight_oracle_grid()
{
  return detail::guarded("weight oracle grid", [] {
    double worst = 0.0;
    const double secs = detail::seconds_of([&] {
      for (const double nu : {2.0, 5.0, 10.0, 50.0}) {
        for (const int m : {4, 10, 20}) {
          for (const double d : {0.1, 1.0, 10.0, 100.0}) {
            const double closed = tqda_weight_mmle(nu, m, d);
            const double numeric = numeric_weight_oracle(nu, m, d);
            worst = std::max(worst, std::abs(closed - numeric) / std::abs(numeric));
          }
        }
      }
    });
    return CheckResult{"", worst <= 1e-6 && secs < 30.0,
                       detail::fmt("48 points, max rel err %.3g (<= 1e-6), %.3g s (< 30 s)", worst, secs)};
  });
}

/// Monte-Carlo Fisher information of the Gaussian scale family at m = 10, tau = 1,
/// 1e6 draws; must land in [4.75, 5.25] (closed form m/2) within 60 s.
inline CheckResult check_jeffreys_fisher_info(std::uint64_t seed = 20260101)
{
  return detail::guarded("Jeffreys Fisher information", [seed] {
    double value = 0.0;
    const double secs = detail::seconds_of([&] { value = jeffreys_fisher_info_mc(10, 1.0, 1000000, seed); });
    return CheckResult{"", value >= 4.75 && value <= 5.25 && secs < 60.0,
                       detail::fmt("I(1) = %.6g in [4.75, 5.25], %.3g s (< 60 s)", value, secs)};
  });
}

/// Scatter used by the moment checks: one seeded draw of the experiment's generator.
inline SpdMatrix moment_check_scatter(std::uint64_t seed)
{
  Rng rng(seed);
  return random_spd(10, 1.0, 1.0, 20.0, rng);
}

/// Student t(10) sample covariance vs (10/8) Sigma at 1e5 draws, within 5% relative Frobenius.
inline CheckResult check_student_t_moments(std::uint64_t seed = 7)
{
  return detail::guarded("Student-t covariance moment", [seed] {
    const SpdMatrix sigma = moment_check_scatter(seed);
    ClusterSpec spec{1.0, ClusterFamily::student_t(10.0), Vector::Zero(10), sigma};
    Rng rng(seed + 1);
    const DataMatrix x = sample_cluster(spec, 100000, rng);
    const double err = detail::relative_frobenius(detail::sample_covariance(x), (10.0 / 8.0) * sigma.matrix());
    return CheckResult{"", err <= 0.05, detail::fmt("rel Frobenius %.4g (<= 0.05)", err)};
  });
}

/// Generalized Gaussian with beta = 1 is Gaussian: sample covariance within 5% of Sigma.
inline CheckResult check_gg_beta_one_moments(std::uint64_t seed = 11)
{
  return detail::guarded("GG(beta=1) covariance moment", [seed] {
    const SpdMatrix sigma = moment_check_scatter(seed);
    ClusterSpec spec{1.0, ClusterFamily::generalized_gaussian(1.0), Vector::Zero(10), sigma};
    Rng rng(seed + 1);
    const DataMatrix x = sample_cluster(spec, 100000, rng);
    const double err = detail::relative_frobenius(detail::sample_covariance(x), sigma.matrix());
    return CheckResult{"", err <= 0.05, detail::fmt("rel Frobenius %.4g (<= 0.05)", err)};
  });
}

inline std::vector<CheckResult> run_validation_suite()
{
  return {check_weight_oracle_grid(), check_jeffreys_fisher_info(), check_student_t_moments(),
          check_gg_beta_one_moments()};
}

/// Seeded 3-cluster FEMDA fit; scores under Sigma_k -> c Sigma_k, c in {1e-3, 1, 1e3},
/// all within 1e-10 of the unscaled ones, and identical labels.
inline CheckResult check_femda_scale_invariance(std::uint64_t seed = 3)
{
  return detail::guarded("FEMDA score scale invariance", [seed] {
    SyntheticConfig sc;
    sc.n = 900;
    sc.seed = seed;
    const auto mix = generate_mixture(sc);
    Dataset ds{"synthetic", mix.data, mix.labels, sc.k, {}};
    const auto parts = split(ds, 0.7, seed);
    const auto clf = fit(Method::FEMDA, parts.train.data, parts.train.labels);
    const Labels base_labels = predict(clf, parts.test.data);

    double worst = 0.0;
    bool same_labels = true;
    for (const double c : {1e-3, 1.0, 1e3}) {
      FittedClassifier scaled = clf;
      for (auto & model : scaled.models) model.sigma = model.sigma.scaled(c);
      for (Index i = 0; i < parts.test.data.rows(); ++i) {
        const Vector x = parts.test.data.row(i).transpose();
        worst = std::max(worst, (score(clf, x) - score(scaled, x)).cwiseAbs().maxCoeff());
      }
      same_labels = same_labels && predict(scaled, parts.test.data) == base_labels;
    }
    return CheckResult{"", worst <= 1e-10 && same_labels,
                       detail::fmt("max |score diff| %.3g (<= 1e-10), labels identical: %g", worst,
                                   same_labels ? 1.0 : 0.0)};
  });
}

/// Budget invariant on a small mixed-method run: every record is within T times the
/// repetition's fastest train time or carries the floor flag.
inline CheckResult check_budget_rule(const std::vector<RunRecord> & records, double factor)
{
  std::map<int, double> fastest;
  for (const auto & r : records) {
    if (!r.ok()) continue;
    auto [it, fresh] = fastest.emplace(r.repetition, r.train_time_s);
    if (!fresh) it->second = std::min(it->second, r.train_time_s);
  }
  int violations = 0;
  int floors = 0;
  for (const auto & r : records) {
    if (!r.ok()) continue;
    if (r.budget_floor) {
      ++floors;
    } else if (r.train_time_s > factor * fastest[r.repetition]) {
      ++violations;
    }
  }
  return CheckResult{"budget rule", violations == 0,
                     detail::fmt("%g records, %g over budget without floor flag, %g at floor",
                                 static_cast<double>(records.size()), violations, floors)};
}

inline std::vector<CheckResult> run_selftest_suite()
{
  std::vector<CheckResult> out;

  out.push_back(detail::guarded("Cholesky round trip", [] {
    Rng rng(1);
    const SpdMatrix s = random_spd(8, 1.0, 1.0, 20.0, rng);
    const double err = detail::relative_frobenius(s.chol() * s.chol().transpose(), s.matrix());
    return CheckResult{"", err < 1e-12, detail::fmt("rel err %.3g (< 1e-12)", err)};
  }));

  out.push_back(detail::guarded("Mahalanobis inverse scaling", [] {
    Rng rng(2);
    const SpdMatrix s = random_spd(6, 1.0, 1.0, 20.0, rng);
    const Vector x = standard_normal_vector(6, rng);
    const Vector mu = standard_normal_vector(6, rng);
    const double d = mahalanobis_sq(x, mu, s);
    const double err = std::abs(mahalanobis_sq(x, mu, s.scaled(4.0)) * 4.0 - d) / d;
    return CheckResult{"", err < 1e-12, detail::fmt("rel err %.3g (< 1e-12)", err)};
  }));

  out.push_back(detail::guarded("geodesic distance affine invariance", [] {
    Rng rng(3);
    const SpdMatrix a = random_spd(5, 1.0, 1.0, 20.0, rng);
    const SpdMatrix b = random_spd(5, 1.0, 1.0, 20.0, rng);
    Matrix g(5, 5);
    for (Index j = 0; j < 5; ++j) g.col(j) = standard_normal_vector(5, rng);
    g += 3.0 * Matrix::Identity(5, 5);
    const double d0 = spd_geodesic_distance(a, b);
    const double d1 = spd_geodesic_distance(
      SpdMatrix(g * a.matrix() * g.transpose()), SpdMatrix(g * b.matrix() * g.transpose()));
    const double sm = spd_geodesic_distance_scale_matched(a, b);
    return CheckResult{"", std::abs(d0 - d1) < 1e-9 * d0 && sm <= d0 + 1e-12,
                       detail::fmt("|d - d(GAG', GBG')| = %.3g, scale-matched %.4g <= plain %.4g",
                                   std::abs(d0 - d1), sm, d0)};
  }));

  out.push_back(check_femda_scale_invariance());

  out.push_back(detail::guarded("trimming caps", [] {
    bool ok = true;
    for (const double d : {1e-12, 0.01, 0.5, 1.0, 2.0, 100.0}) {
      ok = ok && femda_weight(d, 0.5) <= 0.5 && tyler_scatter_weight(d, 0.5) <= 0.5 &&
           tyler_location_weight(d, 0.5) <= 0.5;
    }
    return CheckResult{"", ok, "every FEMDA/Tyler weight <= 0.5"};
  }));

  out.push_back(detail::guarded("generator determinism and SPD range", [] {
    SyntheticConfig sc;
    sc.n = 500;
    sc.seed = 99;
    const auto a = generate_mixture(sc);
    const auto b = generate_mixture(sc);
    bool in_range = true;
    for (const auto & spec : a.truth) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(spec.sigma.matrix(), Eigen::EigenvaluesOnly);
      in_range = in_range && eig.eigenvalues().minCoeff() >= 1.0 - 1e-9 && eig.eigenvalues().maxCoeff() <= 20.0 + 1e-9;
    }
    const bool same = a.data == b.data && a.labels == b.labels;
    return CheckResult{"", same && in_range, same ? "identical draws, eigenvalues in range" : "draws differ"};
  }));

  out.push_back(detail::guarded("contamination stays in the bounding box", [] {
    Rng rng(5);
    SyntheticConfig sc;
    sc.n = 400;
    const auto mix = generate_mixture(sc);
    std::vector<Index> replaced;
    const DataMatrix c = contaminate(mix.data, 0.35, rng, &replaced);
    const bool inside = (c.colwise().minCoeff().array() >= mix.data.colwise().minCoeff().array()).all() &&
                        (c.colwise().maxCoeff().array() <= mix.data.colwise().maxCoeff().array()).all();
    const bool count = replaced.size() == static_cast<std::size_t>(std::floor(0.35 * 400));
    return CheckResult{"", inside && count, detail::fmt("%g rows replaced", static_cast<double>(replaced.size()))};
  }));

  out.push_back(detail::guarded("PCA fit on training rows only", [] {
    Rng rng(8);
    Dataset ds;
    ds.data.resize(300, 6);
    for (Index i = 0; i < 300; ++i) ds.data.row(i) = standard_normal_vector(6, rng).transpose();
    ds.labels.resize(300);
    for (std::size_t i = 0; i < 300; ++i) ds.labels[i] = static_cast<int>(i % 3);
    ds.class_count = 3;
    ExperimentConfig cfg;
    cfg.mode = Mode::Real;
    cfg.dataset_path = "in-memory";
    cfg.pca_dim = 3;
    const auto prep = prepare_repetition(cfg, 0, &ds);
    const auto parts = split(ds, cfg.train_fraction, derive_seed(cfg.base_seed, kSplitStream));
    const auto expect = fit_pca(parts.train.data, 3);
    const double err = (prep.pca->components - expect.components).norm() + (prep.pca->mean - expect.mean).norm();
    const double ortho = (expect.components * expect.components.transpose() - Matrix::Identity(3, 3)).norm();
    return CheckResult{"", err < 1e-12 && ortho < 1e-10,
                       detail::fmt("transform matches train-only fit (%.3g), orthonormality %.3g", err, ortho)};
  }));

  out.push_back(detail::guarded("budget rule on a mixed-method run", [] {
    ExperimentConfig cfg;
    cfg.repetitions = 1;
    cfg.synthetic.n = 600;
    cfg.contamination_grid = {0.0, 0.2};
    cfg.timing_repeats = 1;
    const auto records = run_experiment(cfg);
    auto r = check_budget_rule(records, cfg.time_budget_factor);
    const bool count_ok = records.size() == cfg.methods.size() * cfg.contamination_grid.size();
    r.passed = r.passed && count_ok;
    return r;
  }));

  return out;
}

}  // namespace femda

#endif  // FEMDA__VALIDATION_HPP_
