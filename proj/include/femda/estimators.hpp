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

#ifndef FEMDA__ESTIMATORS_HPP_
#define FEMDA__ESTIMATORS_HPP_

#include "femda/error.hpp"
#include "femda/spd.hpp"
#include "femda/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>

namespace femda
{

/// Hyperparameters of the per-cluster fixed-point solvers.
struct FitConfig
{
  int n_iter_max = 10;
  double eps = 1e-5;
  double lambda_reg = 1e-5;
  /// Weight ceiling; +infinity disables trimming.
  double trim_cap = 0.5;
  double nu_search_lo = 0.1;
  double nu_search_hi = 100.0;
  /// Golden-section tolerance, in units of log(nu).
  double nu_tol = 1e-3;

  void validate() const
  {
    if (n_iter_max < 1) fail(Errc::InvalidArgument, "n_iter_max must be >= 1");
    if (!(eps > 0.0)) fail(Errc::InvalidArgument, "eps must be > 0");
    if (!(lambda_reg >= 0.0)) fail(Errc::InvalidArgument, "lambda_reg must be >= 0");
    if (!(trim_cap > 0.0)) fail(Errc::InvalidArgument, "trim_cap must be > 0");
    if (!(nu_search_lo > 0.0) || !(nu_search_lo < nu_search_hi)) {
      fail(Errc::InvalidArgument, "need 0 < nu_search_lo < nu_search_hi");
    }
    if (!(nu_tol > 0.0)) fail(Errc::InvalidArgument, "nu_tol must be > 0");
  }
};

/// Fitted location/scatter of one class plus the solver's loop state.
struct ClusterModel
{
  Vector mu;
  SpdMatrix sigma;
  /// Degrees of freedom; present only for t-QDA fits.
  std::optional<double> nu;
  bool converged = false;
  int iterations = 0;
  double final_step_norm = 0.0;
  Index sample_count = 0;
  /// n_k <= m: the sample scatter is rank deficient and only lambda_reg keeps sigma SPD.
  bool underdetermined = false;
  /// t-QDA only: the nu search ended on one of its bounds.
  bool nu_at_boundary = false;
  /// sigma = scale_normalization * (last fixed-point iterate); 1 except for Tyler.
  double scale_normalization = 1.0;
};

/// Iterative M-estimators sharing the fixed-point engine below.
enum class Estimator
{
  Femda,
  Tyler,
  TQda,
};

// ---------------------------------------------------------------------------
// Weight functions.

inline double femda_weight(double d, double trim_cap) { return std::min(trim_cap, 1.0 / d); }

inline double tyler_location_weight(double d, double trim_cap)
{
  return std::min(trim_cap, 1.0 / std::sqrt(d));
}

inline double tyler_scatter_weight(double d, double trim_cap) { return std::min(trim_cap, 1.0 / d); }

inline double tqda_weight(double nu, double d) { return 1.0 / (nu + d); }

/// Weight of the marginal-likelihood parameterization of t-QDA, (nu + m) / ((m - 2)(nu + d)).
/// Equals tqda_weight scaled by (nu + m) / (m - 2), so both give the same estimates.
inline double tqda_weight_mmle(double nu, int m, double d)
{
  if (m <= 2) {
    fail(Errc::InvalidDimension, "tqda_weight_mmle needs m > 2, got m = " + std::to_string(m));
  }
  return (nu + m) / ((m - 2) * (nu + d));
}

/// Negative profile log-likelihood of the degrees of freedom, up to constants:
/// (m/2) log nu + lgamma(nu/2) - lgamma((nu+m)/2) + (nu+m)/(2n) sum log(1 + d_i/nu).
inline double tqda_nu_objective(double nu, int m, std::span<const double> d)
{
  double acc = 0.0;
  for (const double di : d) {
    acc += std::log1p(di / nu);
  }
  const double n = static_cast<double>(d.size());
  return 0.5 * m * std::log(nu) + std::lgamma(0.5 * nu) - std::lgamma(0.5 * (nu + m)) +
         (nu + m) / (2.0 * n) * acc;
}

struct NuSearchResult
{
  double nu;
  bool at_boundary;
};

/// Golden-section search of tqda_nu_objective over log(nu) in [lo, hi].
inline NuSearchResult minimize_nu(int m, std::span<const double> d, const FitConfig & cfg)
{
  constexpr double inv_phi = 0.6180339887498948482;
  double a = std::log(cfg.nu_search_lo);
  double b = std::log(cfg.nu_search_hi);
  auto f = [&](double log_nu) { return tqda_nu_objective(std::exp(log_nu), m, d); };

  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = f(c);
  double fe = f(e);
  while (b - a > cfg.nu_tol) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
  const double log_nu = 0.5 * (a + b);
  const bool at_boundary = log_nu - std::log(cfg.nu_search_lo) <= cfg.nu_tol ||
                           std::log(cfg.nu_search_hi) - log_nu <= cfg.nu_tol;
  return {std::exp(log_nu), at_boundary};
}

// ---------------------------------------------------------------------------
// Closed-form Gaussian MLE.

namespace detail
{

inline void check_cluster_size(const DataMatrix & data)
{
  if (data.cols() < 1) {
    fail(Errc::InvalidDimension, "cluster data has zero columns");
  }
  if (data.rows() == 0) {
    fail(Errc::EmptyCluster, "cluster has no observations");
  }
  if (data.rows() == 1) {
    fail(Errc::SingletonCluster, "cluster has a single observation; covariance undefined");
  }
}

inline Matrix regularized(Matrix scatter, double lambda)
{
  scatter.diagonal().array() += lambda;
  return scatter;
}

/// Entrywise absolute-sum norm.
template <typename Derived>
double l1(const Eigen::MatrixBase<Derived> & a)
{
  return a.cwiseAbs().sum();
}

}  // namespace detail

inline ClusterModel fit_gaussian_mle(const DataMatrix & data, const FitConfig & cfg = {})
{
  cfg.validate();
  detail::check_cluster_size(data);
  const double n = static_cast<double>(data.rows());
  const Vector mu = data.colwise().mean().transpose();
  const DataMatrix centered = data.rowwise() - mu.transpose();
  const Matrix scatter = (centered.transpose() * centered) / n;
  ClusterModel model{
    mu, SpdMatrix(detail::regularized(scatter, cfg.lambda_reg)), std::nullopt, true, 0, 0.0,
    data.rows()};
  model.underdetermined = data.rows() <= data.cols();
  return model;
}

// ---------------------------------------------------------------------------
// Fixed-point engine shared by FEMDA, Tyler and t-QDA.

/// One update from the previous iterate (mu, sigma). Weights come from the previous
/// iterate and the scatter outer products are centered at the previous mu.
struct FixedPointStep
{
  Vector mu;
  Matrix sigma;  // regularized, not yet factored
  std::optional<double> nu;
  bool nu_at_boundary = false;
  double step_norm = 0.0;
};

inline FixedPointStep fixed_point_step(
  const DataMatrix & data, const Vector & mu, const SpdMatrix & sigma, Estimator estimator,
  const FitConfig & cfg)
{
  const Index n = data.rows();
  const Index m = data.cols();
  const Vector d = mahalanobis_sq_rows(data, mu, sigma);

  Vector w_loc(n);
  Vector w_scat(n);
  double factor = static_cast<double>(m) / static_cast<double>(n);
  FixedPointStep out;

  switch (estimator) {
    case Estimator::Femda:
      for (Index i = 0; i < n; ++i) {
        w_scat[i] = femda_weight(d[i], cfg.trim_cap);
      }
      w_loc = w_scat;
      break;
    case Estimator::Tyler:
      for (Index i = 0; i < n; ++i) {
        w_loc[i] = tyler_location_weight(d[i], cfg.trim_cap);
        w_scat[i] = tyler_scatter_weight(d[i], cfg.trim_cap);
      }
      break;
    case Estimator::TQda: {
      const auto search =
        minimize_nu(static_cast<int>(m), std::span<const double>(d.data(), d.size()), cfg);
      out.nu = search.nu;
      out.nu_at_boundary = search.at_boundary;
      for (Index i = 0; i < n; ++i) {
        w_scat[i] = tqda_weight(search.nu, d[i]);
      }
      w_loc = w_scat;
      factor = (search.nu + static_cast<double>(m)) / static_cast<double>(n);
      break;
    }
  }

  out.mu = (data.transpose() * w_loc) / w_loc.sum();
  const DataMatrix centered = data.rowwise() - mu.transpose();
  const Matrix weighted = centered.transpose() * w_scat.asDiagonal() * centered;
  out.sigma = detail::regularized(factor * weighted, cfg.lambda_reg);
  out.step_norm = detail::l1(out.sigma - sigma.matrix()) + detail::l1(out.mu - mu);
  return out;
}

namespace detail
{

inline ClusterModel run_fixed_point(const DataMatrix & data, Estimator estimator, const FitConfig & cfg)
{
  cfg.validate();
  check_cluster_size(data);
  ClusterModel model = fit_gaussian_mle(data, cfg);
  model.converged = false;

  Vector mu = model.mu;
  SpdMatrix sigma = model.sigma;
  int it = 0;
  bool converged = false;
  FixedPointStep step;
  while (!converged && it < cfg.n_iter_max) {
    step = fixed_point_step(data, mu, sigma, estimator, cfg);
    mu = step.mu;
    sigma = SpdMatrix(step.sigma);
    ++it;
    converged = step.step_norm < cfg.eps;
  }

  model.mu = std::move(mu);
  model.sigma = std::move(sigma);
  model.nu = step.nu;
  model.nu_at_boundary = step.nu_at_boundary;
  model.converged = converged;
  model.iterations = it;
  model.final_step_norm = step.step_norm;
  return model;
}

}  // namespace detail

/// FEMDA location/scatter: weights min(trim_cap, 1/d), scatter factor m/n_k.
inline ClusterModel fit_femda(const DataMatrix & data, const FitConfig & cfg = {})
{
  return detail::run_fixed_point(data, Estimator::Femda, cfg);
}

/// Tyler M-estimator: location weights 1/sqrt(d), scatter weights 1/d, both trimmed.
/// The returned scatter is rescaled to trace m since Tyler's scatter has no intrinsic scale.
inline ClusterModel fit_tyler(const DataMatrix & data, const FitConfig & cfg = {})
{
  ClusterModel model = detail::run_fixed_point(data, Estimator::Tyler, cfg);
  const double c = static_cast<double>(data.cols()) / model.sigma.trace();
  model.sigma = model.sigma.scaled(c);
  model.scale_normalization = c;
  return model;
}

/// Multivariate-t MLE with the degrees of freedom re-estimated at every iteration.
inline ClusterModel fit_tqda(const DataMatrix & data, const FitConfig & cfg = {})
{
  return detail::run_fixed_point(data, Estimator::TQda, cfg);
}

inline ClusterModel fit_estimator(const DataMatrix & data, Estimator estimator, const FitConfig & cfg)
{
  switch (estimator) {
    case Estimator::Femda: return fit_femda(data, cfg);
    case Estimator::Tyler: return fit_tyler(data, cfg);
    case Estimator::TQda: return fit_tqda(data, cfg);
  }
  fail(Errc::InvalidArgument, "unknown estimator");
}

/// Distance moved by one more update started at the fitted parameters, in the
/// convergence norm. Tyler's trace normalization is undone first so the update is applied
/// to the actual fixed-point iterate.
inline double fixed_point_residual(
  const DataMatrix & data, const ClusterModel & model, Estimator estimator, const FitConfig & cfg)
{
  const SpdMatrix sigma =
    model.scale_normalization == 1.0 ? model.sigma : model.sigma.scaled(1.0 / model.scale_normalization);
  return fixed_point_step(data, model.mu, sigma, estimator, cfg).step_norm;
}

}  // namespace femda

#endif  // FEMDA__ESTIMATORS_HPP_
