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

// Numerical cross-checks for closed forms used elsewhere in the library. None of this
// is on a production path; `femda validate` and the test suites call it.

#ifndef FEMDA__ORACLES_HPP_
#define FEMDA__ORACLES_HPP_

#include "femda/error.hpp"
#include "femda/types.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

namespace femda
{

/// Inverse-gamma prior on the texture tau that turns the compound-Gaussian model into a
/// multivariate t with nu degrees of freedom, evaluated in log space.
struct InverseGammaTexturePrior
{
  double nu;

  double log_h(double tau) const
  {
    const double half = 0.5 * nu;
    return half * std::log(half) - std::lgamma(half) - half / tau - (1.0 + half) * std::log(tau);
  }

  double h(double tau) const { return std::exp(log_h(tau)); }

  /// h'(tau) = h(tau) (nu - (nu + 2) tau) / (2 tau^2)
  double h_prime(double tau) const { return h(tau) * (nu - (nu + 2.0) * tau) / (2.0 * tau * tau); }
};

namespace detail
{

struct QuadratureResult
{
  double value;
  double error;
  double l1;
};

/// Adaptive Gauss-Kronrod over [0, inf), split at `pivot` so the peak of the integrand
/// sits at a panel boundary instead of inside the infinite-range mapping.
inline QuadratureResult integrate_half_line(
  const std::function<double(double)> & f, double pivot, double rel_tol)
{
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned max_depth = 25;
  double err_lo = 0.0;
  double err_hi = 0.0;
  double l1_lo = 0.0;
  double l1_hi = 0.0;
  const double lo = gauss_kronrod<double, 61>::integrate(f, 0.0, pivot, max_depth, rel_tol, &err_lo, &l1_lo);
  const double hi = gauss_kronrod<double, 61>::integrate(
    f, pivot, std::numeric_limits<double>::infinity(), max_depth, rel_tol, &err_hi, &l1_hi);
  return {lo + hi, err_lo + err_hi, l1_lo + l1_hi};
}

}  // namespace detail

/// w = 1/d - 2/(m-2) * int h'(d/t) t^{m/2-3} g(t) dt / int h(d/t) t^{m/2-2} g(t) dt
/// with Gaussian generator g(t) = exp(-t/2) and the inverse-gamma texture prior,
/// both integrals evaluated by quadrature to relative tolerance 1e-9.
inline double numeric_weight_oracle(double nu, int m, double d)
{
  if (m <= 2) {
    fail(Errc::InvalidDimension, "numeric_weight_oracle needs m > 2, got m = " + std::to_string(m));
  }
  if (!(nu > 0.0) || !(d > 0.0)) {
    fail(Errc::InvalidArgument, "numeric_weight_oracle needs nu > 0 and d > 0");
  }
  constexpr double rel_tol = 1e-9;
  const InverseGammaTexturePrior prior{nu};
  const double half_m = 0.5 * m;

  auto numerator = [&](double t) {
    if (t <= 0.0 || !std::isfinite(t)) return 0.0;
    return prior.h_prime(d / t) * std::pow(t, half_m - 3.0) * std::exp(-0.5 * t);
  };
  auto denominator = [&](double t) {
    if (t <= 0.0 || !std::isfinite(t)) return 0.0;
    return std::exp(prior.log_h(d / t) + (half_m - 2.0) * std::log(t) - 0.5 * t);
  };

  // The denominator integrand is a Gamma((nu+m)/2, rate (nu+d)/(2d)) kernel in t; splitting
  // at its mode keeps both panels smooth.
  const double pivot = std::max(1e-12, (0.5 * (nu + m) - 1.0) * 2.0 * d / (nu + d));
  const auto num = detail::integrate_half_line(numerator, pivot, rel_tol);
  const auto den = detail::integrate_half_line(denominator, pivot, rel_tol);
  if (!std::isfinite(num.value) || !std::isfinite(den.value) || den.value <= 0.0 ||
      num.error > 1e3 * rel_tol * num.l1 || den.error > 1e3 * rel_tol * den.l1) {
    fail(Errc::QuadratureFailure, "weight integrals did not converge at nu = " + std::to_string(nu) +
                                    ", m = " + std::to_string(m) + ", d = " + std::to_string(d));
  }
  return 1.0 / d - 2.0 / (m - 2) * (num.value / den.value);
}

/// Monte-Carlo Fisher information of the texture tau for an elliptical model with
/// Gaussian generator, using the score-squared form E[(d/dtau log p)^2].
///
/// Samples x = sqrt(tau) z with z ~ N(0, I_m), so d = x^T x; the score is
/// -m/(2 tau) - (d/tau^2) g'(q)/g(q) at q = d/tau, with g'/g = -1/2.
inline double jeffreys_fisher_info_mc(int m, double tau, long n_samples, std::uint64_t seed)
{
  if (m < 1) fail(Errc::InvalidDimension, "jeffreys_fisher_info_mc needs m >= 1");
  if (!(tau > 0.0)) fail(Errc::InvalidArgument, "jeffreys_fisher_info_mc needs tau > 0");
  if (n_samples < 10000) fail(Errc::InvalidArgument, "jeffreys_fisher_info_mc needs n_samples >= 1e4");

  constexpr double log_g_prime = -0.5;  // g(t) = exp(-t/2)
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_tau = std::sqrt(tau);
  double acc = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    double d = 0.0;
    for (int j = 0; j < m; ++j) {
      const double x = sqrt_tau * normal(rng);
      d += x * x;
    }
    const double score = -0.5 * m / tau - d / (tau * tau) * log_g_prime;
    acc += score * score;
  }
  return acc / static_cast<double>(n_samples);
}

}  // namespace femda

#endif  // FEMDA__ORACLES_HPP_
