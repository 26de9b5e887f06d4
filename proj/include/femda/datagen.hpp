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

// Seeded synthetic mixtures of elliptically symmetric clusters, and uniform-noise
// contamination of a training set.
//
// Draw order inside generate_mixture (one engine): all means, then all scatters (for each
// cluster: eigenvalues, then the rotation), then the point labels, then the samples
// cluster by cluster, then the final row shuffle.

#ifndef FEMDA__DATAGEN_HPP_
#define FEMDA__DATAGEN_HPP_

#include "femda/error.hpp"
#include "femda/spd.hpp"
#include "femda/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace femda
{

struct ClusterFamily
{
  enum class Kind
  {
    GeneralizedGaussian,
    StudentT,
  };

  Kind kind = Kind::GeneralizedGaussian;
  /// beta for the generalized Gaussian, nu for the Student t.
  double parameter = 1.0;

  static ClusterFamily generalized_gaussian(double beta) { return {Kind::GeneralizedGaussian, beta}; }
  static ClusterFamily student_t(double nu) { return {Kind::StudentT, nu}; }

  void validate() const
  {
    if (kind == Kind::GeneralizedGaussian && !(parameter > 0.0)) {
      fail(Errc::InvalidArgument, "generalized Gaussian needs beta > 0");
    }
    if (kind == Kind::StudentT && !(parameter > 2.0)) {
      fail(Errc::InvalidArgument, "Student t needs nu > 2 for a finite covariance");
    }
  }
};

struct ClusterSpec
{
  double prior;
  ClusterFamily family;
  Vector mu;
  SpdMatrix sigma;
};

struct ClusterChoice
{
  double prior;
  ClusterFamily family;
};

struct SyntheticConfig
{
  int k = 3;
  int m = 10;
  int n = 3000;
  double radius = 2.0;
  double xi = 1.0;
  double lambda_min = 1.0;
  double lambda_max = 20.0;
  std::uint64_t seed = 0;
  std::vector<ClusterChoice> cluster_families{
    {0.33, ClusterFamily::generalized_gaussian(0.8)},
    {0.33, ClusterFamily::generalized_gaussian(1.5)},
    {0.34, ClusterFamily::student_t(10.0)},
  };

  void validate() const
  {
    if (k < 1 || m < 1) fail(Errc::InvalidArgument, "synthetic config needs k >= 1 and m >= 1");
    if (n < k) fail(Errc::InvalidArgument, "synthetic config needs n >= k");
    if (!(radius > 0.0) || !(xi > 0.0)) fail(Errc::InvalidArgument, "radius and xi must be > 0");
    if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max)) {
      fail(Errc::InvalidArgument, "need 0 < lambda_min <= lambda_max");
    }
    if (static_cast<int>(cluster_families.size()) != k) {
      fail(Errc::InvalidArgument, "cluster_families has " + std::to_string(cluster_families.size()) +
                                    " entries for k = " + std::to_string(k));
    }
    double total = 0.0;
    for (const auto & c : cluster_families) {
      if (!(c.prior >= 0.0)) fail(Errc::InvalidArgument, "cluster priors must be >= 0");
      c.family.validate();
      total += c.prior;
    }
    if (std::abs(total - 1.0) > 1e-12) fail(Errc::InvalidArgument, "cluster priors must sum to 1");
  }
};

struct MixtureSample
{
  DataMatrix data;
  Labels labels;
  std::vector<ClusterSpec> truth;
};

inline Vector standard_normal_vector(Index m, Rng & rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(m);
  for (Index j = 0; j < m; ++j) z[j] = normal(rng);
  return z;
}

/// Uniform point on the radius-r sphere in R^m (normalized Gaussian draw).
inline Vector random_mean_on_sphere(int m, double r, Rng & rng)
{
  if (m < 1 || !(r > 0.0)) fail(Errc::InvalidArgument, "random_mean_on_sphere needs m >= 1, r > 0");
  Vector z;
  do {
    z = standard_normal_vector(m, rng);
  } while (z.squaredNorm() == 0.0);
  return r * z / z.norm();
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs of R's
/// diagonal folded into Q.
inline Matrix haar_orthogonal(int m, Rng & rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(m, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < m; ++r) z(r, c) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

/// One eigenvalue: chi-square with Poisson(xi) degrees of freedom, clamped to
/// [lambda_min, lambda_max]. Zero degrees of freedom gives 0, hence lambda_min.
inline double random_clamped_eigenvalue(double xi, double lambda_min, double lambda_max, Rng & rng)
{
  std::poisson_distribution<int> poisson(xi);
  const int dof = poisson(rng);
  double value = 0.0;
  if (dof > 0) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(dof));
    value = chi2(rng);
  }
  return std::clamp(value, lambda_min, lambda_max);
}

/// P diag(lambda) P^T with Haar P and clamped chi-square eigenvalues.
inline SpdMatrix random_spd(int m, double xi, double lambda_min, double lambda_max, Rng & rng)
{
  if (m < 1 || !(lambda_min > 0.0) || !(lambda_min <= lambda_max)) {
    fail(Errc::InvalidArgument, "random_spd needs m >= 1 and 0 < lambda_min <= lambda_max");
  }
  Vector lambda(m);
  for (Index j = 0; j < m; ++j) lambda[j] = random_clamped_eigenvalue(xi, lambda_min, lambda_max, rng);
  const Matrix p = haar_orthogonal(m, rng);
  return SpdMatrix(p * lambda.asDiagonal() * p.transpose());
}

/// i.i.d. draws from one cluster.
///   Student t:   x = mu + L z sqrt(nu / g),      z ~ N(0, I), g ~ chi2_nu
///   Gen. Gauss.: x = mu + G^{1/(2 beta)} L u,   u uniform on the sphere, G ~ Gamma(m/(2 beta), 2)
/// L is the Cholesky factor of sigma; any square root gives the same law.
inline DataMatrix sample_cluster(const ClusterSpec & spec, Index count, Rng & rng)
{
  spec.family.validate();
  if (count < 0) fail(Errc::InvalidArgument, "sample count must be >= 0");
  const Index m = spec.mu.size();
  if (spec.sigma.dim() != m) fail(Errc::DimensionMismatch, "cluster mu and sigma disagree in size");

  DataMatrix out(count, m);
  const Matrix & chol = spec.sigma.chol();
  if (spec.family.kind == ClusterFamily::Kind::StudentT) {
    const double nu = spec.family.parameter;
    std::chi_squared_distribution<double> chi2(nu);
    for (Index i = 0; i < count; ++i) {
      const Vector z = standard_normal_vector(m, rng);
      const double g = chi2(rng);
      out.row(i) = (spec.mu + chol * z * std::sqrt(nu / g)).transpose();
    }
  } else {
    const double beta = spec.family.parameter;
    std::gamma_distribution<double> gamma(static_cast<double>(m) / (2.0 * beta), 2.0);
    for (Index i = 0; i < count; ++i) {
      Vector z;
      do {
        z = standard_normal_vector(m, rng);
      } while (z.squaredNorm() == 0.0);
      const Vector u = z / z.norm();
      const double radius = std::pow(gamma(rng), 1.0 / (2.0 * beta));
      out.row(i) = (spec.mu + radius * (chol * u)).transpose();
    }
  }
  return out;
}

inline MixtureSample generate_mixture(const SyntheticConfig & cfg)
{
  cfg.validate();
  Rng rng(cfg.seed);

  std::vector<Vector> means;
  for (int k = 0; k < cfg.k; ++k) means.push_back(random_mean_on_sphere(cfg.m, cfg.radius, rng));

  MixtureSample out;
  for (int k = 0; k < cfg.k; ++k) {
    const auto & choice = cfg.cluster_families[static_cast<std::size_t>(k)];
    out.truth.push_back(ClusterSpec{
      choice.prior, choice.family, means[static_cast<std::size_t>(k)],
      random_spd(cfg.m, cfg.xi, cfg.lambda_min, cfg.lambda_max, rng)});
  }

  std::vector<double> priors;
  for (const auto & c : cfg.cluster_families) priors.push_back(c.prior);
  std::discrete_distribution<int> pick(priors.begin(), priors.end());
  Labels labels(static_cast<std::size_t>(cfg.n));
  for (auto & y : labels) y = pick(rng);

  DataMatrix data(cfg.n, cfg.m);
  for (int k = 0; k < cfg.k; ++k) {
    const auto count = static_cast<Index>(std::count(labels.begin(), labels.end(), k));
    const DataMatrix block = sample_cluster(out.truth[static_cast<std::size_t>(k)], count, rng);
    Index next = 0;
    for (Index i = 0; i < cfg.n; ++i) {
      if (labels[static_cast<std::size_t>(i)] == k) data.row(i) = block.row(next++);
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(cfg.n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  out.data = select_rows(data, order);
  out.labels = select_labels(labels, order);
  return out;
}

/// Replace floor(fraction * n) uniformly chosen rows by points drawn coordinate-wise
/// uniformly in the bounding box of the original data. Labels are not touched: a noise
/// row keeps the label of the row it replaced. `replaced`, when given, receives the
/// sorted row indices that were overwritten.
inline DataMatrix contaminate(
  const DataMatrix & data, double fraction, Rng & rng, std::vector<Index> * replaced = nullptr)
{
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    fail(Errc::InvalidArgument, "contamination fraction must lie in [0, 1]");
  }
  const Index n = data.rows();
  const auto count = static_cast<Index>(std::floor(fraction * static_cast<double>(n)));
  DataMatrix out = data;
  if (replaced) replaced->clear();
  if (count == 0) return out;

  const Eigen::RowVectorXd lo = data.colwise().minCoeff();
  const Eigen::RowVectorXd hi = data.colwise().maxCoeff();

  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(static_cast<std::size_t>(count));
  std::sort(rows.begin(), rows.end());

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto r : rows) {
    for (Index j = 0; j < data.cols(); ++j) {
      out(r, j) = std::min(hi[j], lo[j] + unit(rng) * (hi[j] - lo[j]));
    }
  }
  if (replaced) *replaced = std::move(rows);
  return out;
}

}  // namespace femda

#endif  // FEMDA__DATAGEN_HPP_
