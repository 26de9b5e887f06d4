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


#include "femda/datagen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace femda
{
namespace
{

Matrix sample_covariance(const DataMatrix & x)
{
  const DataMatrix c = x.rowwise() - x.colwise().mean();
  return (c.transpose() * c) / static_cast<double>(x.rows() - 1);
}

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b)
{
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return worst;
}

/// Energy distance statistic n m / (n + m) * (2 E|X-Y| - E|X-X'| - E|Y-Y'|) for the split of
/// `pooled` given by `in_first`. Pairs are recomputed rather than stored.
double energy_statistic(const DataMatrix & pooled, const std::vector<double> & in_first, double total)
{
  const Index n = pooled.rows();
  const Index m = pooled.cols();
  double s_first = 0.0;
  double s_second = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double ai = in_first[static_cast<std::size_t>(i)];
    double acc_first = 0.0;
    double acc_second = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (Index c = 0; c < m; ++c) {
        const double diff = pooled(i, c) - pooled(j, c);
        sq += diff * diff;
      }
      const double d = std::sqrt(sq);
      const double aj = in_first[static_cast<std::size_t>(j)];
      acc_first += aj * d;
      acc_second += (1.0 - aj) * d;
    }
    s_first += ai * acc_first;
    s_second += (1.0 - ai) * acc_second;
  }
  const double n1 = std::accumulate(in_first.begin(), in_first.end(), 0.0);
  const double n2 = static_cast<double>(n) - n1;
  const double s_cross = total - s_first - s_second;
  const double e = 2.0 * s_cross / (n1 * n2) - 2.0 * s_first / (n1 * n1) - 2.0 * s_second / (n2 * n2);
  return n1 * n2 / (n1 + n2) * e;
}

TEST(Sphere, NormAndOneDimensionalCase)
{
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(random_mean_on_sphere(7, 2.0, rng).norm(), 2.0, 1e-12);
  for (int i = 0; i < 20; ++i) EXPECT_DOUBLE_EQ(std::abs(random_mean_on_sphere(1, 3.0, rng)[0]), 3.0);
}

TEST(Sphere, CentredOnAverage)
{
  Rng rng(2);
  Vector sum = Vector::Zero(5);
  for (int i = 0; i < 100000; ++i) sum += random_mean_on_sphere(5, 2.0, rng);
  EXPECT_LT((sum / 100000.0).norm(), 0.02 * 2.0);
}

TEST(RandomSpd, EigenvaluesClampedAndRotationOrthogonal)
{
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Matrix p = haar_orthogonal(8, rng);
    EXPECT_LT((p.transpose() * p - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
    const SpdMatrix s = random_spd(8, 1.0, 1.0, 20.0, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.matrix(), Eigen::EigenvaluesOnly);
    EXPECT_GE(eig.eigenvalues().minCoeff(), 1.0 - 1e-10);
    EXPECT_LE(eig.eigenvalues().maxCoeff(), 20.0 + 1e-10);
  }
}

TEST(RandomSpd, EigenvalueLawMatchesScalarSimulation)
{
  // 10^4 eigenvalues of generated matrices vs a direct simulation of
  // clamp(chi2(Poisson(xi)), lo, hi) built from gamma draws on a separate engine.
  Rng rng(4);
  std::vector<double> generated;
  while (generated.size() < 10000) {
    const SpdMatrix s = random_spd(10, 1.0, 1.0, 20.0, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.matrix(), Eigen::EigenvaluesOnly);
    // Clamp atoms come back with rounding noise; snap them so the KS steps line up.
    for (Index j = 0; j < 10; ++j) generated.push_back(std::round(eig.eigenvalues()[j] * 1e8) / 1e8);
  }
  std::mt19937_64 oracle_rng(987654321);
  std::poisson_distribution<int> dof(1.0);
  std::vector<double> oracle;
  for (int i = 0; i < 100000; ++i) {
    const int k = dof(oracle_rng);
    double v = 0.0;
    if (k > 0) v = std::gamma_distribution<double>(0.5 * k, 2.0)(oracle_rng);
    oracle.push_back(std::clamp(v, 1.0, 20.0));
  }
  EXPECT_LT(ks_distance(generated, oracle), 0.02);
}

TEST(RandomSpd, ZeroDegreesOfFreedomMapToLowerBound)
{
  Rng rng(5);
  int at_floor = 0;
  for (int i = 0; i < 20000; ++i) at_floor += random_clamped_eigenvalue(1e-9, 2.0, 5.0, rng) == 2.0 ? 1 : 0;
  EXPECT_EQ(at_floor, 20000);
}

TEST(SampleCluster, StudentTCovariance)
{
  Rng rng(6);
  ClusterSpec spec{1.0, ClusterFamily::student_t(10.0), Vector::Zero(4), SpdMatrix::identity(4)};
  const Matrix cov = sample_covariance(sample_cluster(spec, 100000, rng));
  const Matrix expect = (10.0 / 8.0) * Matrix::Identity(4, 4);
  EXPECT_LT((cov - expect).norm() / expect.norm(), 0.05);
}

TEST(SampleCluster, GeneralizedGaussianBetaOneCovariance)
{
  Rng rng(7);
  const SpdMatrix sigma = random_spd(6, 1.0, 1.0, 20.0, rng);
  ClusterSpec spec{1.0, ClusterFamily::generalized_gaussian(1.0), Vector::Zero(6), sigma};
  const Matrix cov = sample_covariance(sample_cluster(spec, 100000, rng));
  EXPECT_LT((cov - sigma.matrix()).norm() / sigma.matrix().norm(), 0.05);
}

TEST(SampleCluster, GeneralizedGaussianRadialMoment)
{
  // R^(2 beta) of a whitened draw is G ~ Gamma(m/(2 beta), 2); compare with G simulated directly.
  const int m = 10;
  const double beta = 0.8;
  Rng rng(8);
  ClusterSpec spec{1.0, ClusterFamily::generalized_gaussian(beta), Vector::Zero(m), SpdMatrix::identity(m)};
  const DataMatrix x = sample_cluster(spec, 100000, rng);
  double mean_radial = 0.0;
  for (Index i = 0; i < x.rows(); ++i) mean_radial += std::pow(x.row(i).squaredNorm(), beta);
  mean_radial /= static_cast<double>(x.rows());

  std::mt19937_64 oracle_rng(2024);
  std::gamma_distribution<double> g(m / (2.0 * beta), 2.0);
  double mean_g = 0.0;
  for (int i = 0; i < 100000; ++i) mean_g += g(oracle_rng);
  mean_g /= 100000.0;
  EXPECT_NEAR(mean_radial / mean_g, 1.0, 0.02);
  EXPECT_NEAR(mean_g / (m / beta), 1.0, 0.02);
}

TEST(SampleCluster, ZeroCountAndValidation)
{
  Rng rng(9);
  ClusterSpec spec{1.0, ClusterFamily::student_t(5.0), Vector::Zero(3), SpdMatrix::identity(3)};
  EXPECT_EQ(sample_cluster(spec, 0, rng).rows(), 0);
  spec.family = ClusterFamily::student_t(2.0);
  EXPECT_THROW((void)sample_cluster(spec, 5, rng), Error);
  spec.family = ClusterFamily::generalized_gaussian(0.0);
  EXPECT_THROW((void)sample_cluster(spec, 5, rng), Error);
}

TEST(SampleCluster, BetaOneIsGaussianByEnergyTest)
{
  // Two-sample energy test, 5000 + 5000 points in R^3, 99 permutations, 1% level.
  const int m = 3;
  const Index n = 5000;
  Rng rng(10);
  Matrix a(m, m);
  a << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5;
  const SpdMatrix sigma(a);
  ClusterSpec spec{1.0, ClusterFamily::generalized_gaussian(1.0), Vector::Zero(m), sigma};
  DataMatrix pooled(2 * n, m);
  pooled.topRows(n) = sample_cluster(spec, n, rng);
  for (Index i = 0; i < n; ++i) pooled.row(n + i) = (sigma.chol() * standard_normal_vector(m, rng)).transpose();

  std::vector<double> labels(static_cast<std::size_t>(2 * n), 0.0);
  std::fill(labels.begin(), labels.begin() + n, 1.0);
  double pair_sum = 0.0;
  for (Index i = 0; i < 2 * n; ++i) {
    for (Index j = i + 1; j < 2 * n; ++j) pair_sum += (pooled.row(i) - pooled.row(j)).norm();
  }
  const double observed = energy_statistic(pooled, labels, pair_sum);
  int at_least = 0;
  std::mt19937_64 perm_rng(11);
  for (int p = 0; p < 99; ++p) {
    std::shuffle(labels.begin(), labels.end(), perm_rng);
    at_least += energy_statistic(pooled, labels, pair_sum) >= observed ? 1 : 0;
  }
  const double p_value = (1.0 + at_least) / 100.0;
  EXPECT_GT(p_value, 0.01);
}

TEST(Mixture, LabelHistogramFollowsPriors)
{
  SyntheticConfig sc;
  sc.n = 100000;
  sc.seed = 12;
  const auto mix = generate_mixture(sc);
  for (int k = 0; k < 3; ++k) {
    const double freq = static_cast<double>(std::count(mix.labels.begin(), mix.labels.end(), k)) / sc.n;
    EXPECT_NEAR(freq, sc.cluster_families[static_cast<std::size_t>(k)].prior, 0.01);
  }
}

TEST(Mixture, SameSeedSameOutput)
{
  SyntheticConfig sc;
  sc.n = 2000;
  sc.seed = 13;
  const auto a = generate_mixture(sc);
  const auto b = generate_mixture(sc);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.labels, b.labels);
  for (std::size_t k = 0; k < a.truth.size(); ++k) {
    EXPECT_EQ(a.truth[k].mu, b.truth[k].mu);
    EXPECT_EQ(a.truth[k].sigma.matrix(), b.truth[k].sigma.matrix());
  }
  sc.seed = 14;
  EXPECT_NE(generate_mixture(sc).data, a.data);
}

TEST(Mixture, ClusterMeansInsideEnvelope)
{
  SyntheticConfig sc;
  sc.seed = 15;
  const auto mix = generate_mixture(sc);
  for (int k = 0; k < sc.k; ++k) {
    const DataMatrix rows = rows_with_label(mix.data, mix.labels, k);
    const auto & truth = mix.truth[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Matrix> eig(truth.sigma.matrix(), Eigen::EigenvaluesOnly);
    const double envelope = 3.0 * std::sqrt(eig.eigenvalues().maxCoeff() / std::sqrt(static_cast<double>(rows.rows())));
    EXPECT_LT((rows.colwise().mean().transpose() - truth.mu).norm(), envelope);
    EXPECT_NEAR(truth.mu.norm(), sc.radius, 1e-12);
  }
}

TEST(Mixture, ConfigValidation)
{
  SyntheticConfig sc;
  sc.cluster_families[0].prior = 0.5;
  EXPECT_THROW((void)generate_mixture(sc), Error);
  sc = {};
  sc.n = 2;
  EXPECT_THROW((void)generate_mixture(sc), Error);
  sc = {};
  sc.lambda_min = 0.0;
  EXPECT_THROW((void)generate_mixture(sc), Error);
}

TEST(Contaminate, ZeroFractionIsIdentity)
{
  Rng rng(16);
  const DataMatrix x = DataMatrix::Random(50, 3);
  EXPECT_EQ(contaminate(x, 0.0, rng), x);
}

TEST(Contaminate, ReplacesFloorCountInsideBox)
{
  Rng rng(17);
  SyntheticConfig sc;
  sc.n = 997;
  const auto mix = generate_mixture(sc);
  const Eigen::RowVectorXd lo = mix.data.colwise().minCoeff();
  const Eigen::RowVectorXd hi = mix.data.colwise().maxCoeff();
  for (const double f : {0.05, 0.35, 1.0}) {
    std::vector<Index> replaced;
    const DataMatrix c = contaminate(mix.data, f, rng, &replaced);
    EXPECT_EQ(replaced.size(), static_cast<std::size_t>(std::floor(f * 997)));
    EXPECT_TRUE(std::is_sorted(replaced.begin(), replaced.end()));
    std::size_t changed = 0;
    for (Index i = 0; i < c.rows(); ++i) {
      EXPECT_TRUE((c.row(i).array() >= lo.array()).all() && (c.row(i).array() <= hi.array()).all());
      changed += c.row(i) != mix.data.row(i) ? 1 : 0;
    }
    EXPECT_EQ(changed, replaced.size());
  }
}

TEST(Contaminate, RejectsBadFraction)
{
  Rng rng(18);
  EXPECT_THROW((void)contaminate(DataMatrix::Zero(3, 2), 1.5, rng), Error);
  EXPECT_THROW((void)contaminate(DataMatrix::Zero(3, 2), -0.1, rng), Error);
}

}  // namespace
}  // namespace femda
