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
#include "femda/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace femda
{
namespace
{

std::vector<ClusterSpec> truth_pair(Rng & rng)
{
  return {ClusterSpec{0.5, ClusterFamily::student_t(5.0), random_mean_on_sphere(4, 2.0, rng), random_spd(4, 1.0, 1.0, 20.0, rng)},
          ClusterSpec{0.5, ClusterFamily::student_t(5.0), random_mean_on_sphere(4, 2.0, rng), random_spd(4, 1.0, 1.0, 20.0, rng)}};
}

ClusterModel model_of(const ClusterSpec & spec) { return ClusterModel{spec.mu, spec.sigma, std::nullopt}; }

TEST(Accuracy, BasicCases)
{
  EXPECT_EQ(accuracy({0, 1, 2}, {0, 1, 2}), 1.0);
  EXPECT_EQ(accuracy({1, 1}, {0, 0}), 0.0);
  EXPECT_EQ(accuracy({0, 1, 1, 0}, {0, 1, 1, 1}), 0.75);
}

TEST(Accuracy, Errors)
{
  try {
    (void)accuracy({0}, {0, 1});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
  try {
    (void)accuracy({}, {});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), Errc::EmptyInput);
  }
}

TEST(Accuracy, ConstantPredictorEqualsClassFrequency)
{
  const Labels truth{0, 1, 1, 2, 1, 0, 1};
  EXPECT_DOUBLE_EQ(accuracy(Labels(truth.size(), 1), truth), 4.0 / 7.0);
}

TEST(Accuracy, PermutationInvariant)
{
  Labels pred{0, 1, 2, 2, 1, 0, 0};
  Labels truth{0, 2, 2, 1, 1, 0, 1};
  const double base = accuracy(pred, truth);
  std::reverse(pred.begin(), pred.end());
  std::reverse(truth.begin(), truth.end());
  EXPECT_EQ(accuracy(pred, truth), base);
}

TEST(MuError, Cases)
{
  const Vector t = Eigen::Vector2d(2.0, 0.0);
  EXPECT_EQ(mu_relative_error(t, t), 0.0);
  EXPECT_DOUBLE_EQ(mu_relative_error(2.0 * t, t), 1.0);
  const Vector truth = Eigen::Vector3d(0.0, 2.0, 0.0);
  EXPECT_NEAR(mu_relative_error(truth + 0.06 * Vector::Unit(3, 0), truth), 0.03, 1e-15);
  try {
    (void)mu_relative_error(t, Vector::Zero(2));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), Errc::ZeroTruthNorm);
  }
}

TEST(Report, PerfectEstimates)
{
  Rng rng(1);
  const auto truth = truth_pair(rng);
  const std::vector<ClusterModel> models{model_of(truth[0]), model_of(truth[1])};
  const auto r = cluster_matched_report(models, truth, {0, 1}, {0, 1}, {0.5, 0.25, 0.8});
  EXPECT_EQ(r.mu_rmse_pct, 0.0);
  EXPECT_NEAR(r.sigma_riem, 0.0, 1e-12);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.train_time_s, 0.5);
  EXPECT_EQ(r.predict_time_s, 0.25);
  EXPECT_EQ(r.data_fraction, 0.8);
}

TEST(Report, ScaledScatterClosedForm)
{
  Rng rng(2);
  const auto truth = truth_pair(rng);
  const double c = 3.0;
  const std::vector<ClusterModel> models{
    ClusterModel{truth[0].mu, truth[0].sigma.scaled(c), std::nullopt}, ClusterModel{truth[1].mu, truth[1].sigma.scaled(c), std::nullopt}};
  const auto r = cluster_matched_report(models, truth, {0}, {0}, {});
  EXPECT_NEAR(r.sigma_riem_scale_matched, 0.0, 1e-10);
  EXPECT_NEAR(r.sigma_riem, std::sqrt(4.0) * std::log(c), 1e-10);
}

TEST(Report, AveragesOverClusters)
{
  Rng rng(3);
  const auto truth = truth_pair(rng);
  std::vector<ClusterModel> models{model_of(truth[0]), model_of(truth[1])};
  models[1].mu = truth[1].mu * 1.1;  // 10% error on one cluster
  const auto r = cluster_matched_report(models, truth, {0}, {0}, {});
  EXPECT_NEAR(r.mu_rmse_pct, 5.0, 1e-10);
}

TEST(Report, CountMismatch)
{
  Rng rng(4);
  const auto truth = truth_pair(rng);
  const std::vector<ClusterModel> models{model_of(truth[0])};
  try {
    (void)cluster_matched_report(models, truth, {0}, {0}, {});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), Errc::CountMismatch);
  }
}

TEST(Report, ScaleMatchedNeverExceedsPlain)
{
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto truth = truth_pair(rng);
    std::vector<ClusterModel> models{
      ClusterModel{truth[0].mu, random_spd(4, 1.0, 1.0, 20.0, rng), std::nullopt},
      ClusterModel{truth[1].mu, random_spd(4, 1.0, 1.0, 20.0, rng), std::nullopt}};
    const auto r = cluster_matched_report(models, truth, {0}, {0}, {});
    EXPECT_LE(r.sigma_riem_scale_matched, r.sigma_riem + 1e-12);
  }
}

}  // namespace
}  // namespace femda
