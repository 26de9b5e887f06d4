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

#ifndef FEMDA__METRICS_HPP_
#define FEMDA__METRICS_HPP_

#include "femda/datagen.hpp"
#include "femda/error.hpp"
#include "femda/estimators.hpp"
#include "femda/spd.hpp"
#include "femda/types.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace femda
{

inline double accuracy(const Labels & pred, const Labels & truth)
{
  if (pred.size() != truth.size()) {
    fail(Errc::LengthMismatch, "accuracy: " + std::to_string(pred.size()) + " predictions for " +
                                 std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) fail(Errc::EmptyInput, "accuracy of an empty prediction");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

/// ||truth - est|| / ||truth||, as a fraction.
inline double mu_relative_error(const Vector & est, const Vector & truth)
{
  if (est.size() != truth.size()) fail(Errc::DimensionMismatch, "mu_relative_error size mismatch");
  const double norm = truth.norm();
  if (norm == 0.0) fail(Errc::ZeroTruthNorm, "true mean has zero norm");
  return (truth - est).norm() / norm;
}

struct Timings
{
  double train_time_s = 0.0;
  double predict_time_s = 0.0;
  double data_fraction = 1.0;
};

struct EvalReport
{
  double accuracy = 0.0;
  double mu_rmse_pct = std::numeric_limits<double>::quiet_NaN();
  double sigma_riem = std::numeric_limits<double>::quiet_NaN();
  double sigma_riem_scale_matched = std::numeric_limits<double>::quiet_NaN();
  double train_time_s = 0.0;
  double predict_time_s = 0.0;
  double data_fraction = 1.0;
};

/// Cluster k of `models` is compared with cluster k of `truth` (labels are the cluster
/// identities, so no matching search is needed). Errors are averaged over clusters.
inline EvalReport cluster_matched_report(
  std::span<const ClusterModel> models, std::span<const ClusterSpec> truth, const Labels & pred,
  const Labels & truth_labels, const Timings & timings)
{
  if (models.size() != truth.size()) {
    fail(Errc::CountMismatch, std::to_string(models.size()) + " fitted models for " +
                                std::to_string(truth.size()) + " true clusters");
  }
  EvalReport report;
  report.accuracy = accuracy(pred, truth_labels);
  report.train_time_s = timings.train_time_s;
  report.predict_time_s = timings.predict_time_s;
  report.data_fraction = timings.data_fraction;
  if (models.empty()) return report;

  double mu_err = 0.0;
  double riem = 0.0;
  double riem_sm = 0.0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    mu_err += mu_relative_error(models[k].mu, truth[k].mu);
    riem += spd_geodesic_distance(truth[k].sigma, models[k].sigma);
    riem_sm += spd_geodesic_distance_scale_matched(truth[k].sigma, models[k].sigma);
  }
  const double count = static_cast<double>(models.size());
  report.mu_rmse_pct = 100.0 * mu_err / count;
  report.sigma_riem = riem / count;
  report.sigma_riem_scale_matched = riem_sm / count;
  return report;
}

}  // namespace femda

#endif  // FEMDA__METRICS_HPP_
