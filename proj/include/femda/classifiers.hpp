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

#ifndef FEMDA__CLASSIFIERS_HPP_
#define FEMDA__CLASSIFIERS_HPP_

#include "femda/error.hpp"
#include "femda/estimators.hpp"
#include "femda/spd.hpp"
#include "femda/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace femda
{

enum class Method
{
  QDA,
  RQDA,
  FEMDA,
  TQDA,
  KNN,
};

inline constexpr std::array<Method, 5> all_methods{
  Method::QDA, Method::RQDA, Method::FEMDA, Method::TQDA, Method::KNN};

inline constexpr std::string_view method_name(Method method) noexcept
{
  switch (method) {
    case Method::QDA: return "QDA";
    case Method::RQDA: return "RQDA";
    case Method::FEMDA: return "FEMDA";
    case Method::TQDA: return "t-QDA";
    case Method::KNN: return "KNN";
  }
  return "?";
}

/// Case-insensitive; accepts "tqda" and "t-qda".
inline Method parse_method(std::string_view text)
{
  std::string key;
  for (const char c : text) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "qda") return Method::QDA;
  if (key == "rqda") return Method::RQDA;
  if (key == "femda") return Method::FEMDA;
  if (key == "tqda") return Method::TQDA;
  if (key == "knn") return Method::KNN;
  fail(Errc::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

struct ClassifierOptions
{
  /// Add log|Sigma_k| to the QDA score (textbook QDA). Off gives the pure
  /// Mahalanobis rule.
  bool qda_logdet = true;
  int knn_k = 11;
};

/// Immutable result of fit(): per-class models, or the retained training set for KNN.
struct FittedClassifier
{
  Method method = Method::QDA;
  std::vector<ClusterModel> models;
  DataMatrix knn_data;
  Labels knn_labels;
  int knn_k = 0;
  int class_count = 0;
  ClassifierOptions options;

  Index dim() const { return method == Method::KNN ? knn_data.cols() : models.front().mu.size(); }
};

/// Per-class decision scores; lower is better for every method.
using ScoreRow = Vector;

namespace detail
{

inline void check_models(const Vector & x, std::span<const ClusterModel> models)
{
  for (const auto & model : models) {
    if (model.mu.size() != x.size()) {
      fail(Errc::DimensionMismatch, "observation has " + std::to_string(x.size()) +
                                      " entries, model dimension is " + std::to_string(model.mu.size()));
    }
  }
}

inline int class_count_of(const Labels & labels)
{
  if (labels.empty()) return 0;
  const int max_label = *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    fail(Errc::InvalidArgument, "labels must be non-negative");
  }
  return max_label + 1;
}

}  // namespace detail

/// log d_k + (1/m) log|Sigma_k|; invariant to a positive rescaling of any Sigma_k.
/// An observation sitting exactly on a class mean scores -inf for that class.
inline ScoreRow score_femda(const Vector & x, std::span<const ClusterModel> models)
{
  detail::check_models(x, models);
  const double m = static_cast<double>(x.size());
  ScoreRow scores(static_cast<Index>(models.size()));
  for (std::size_t k = 0; k < models.size(); ++k) {
    const double d = mahalanobis_sq(x, models[k].mu, models[k].sigma);
    scores[static_cast<Index>(k)] = std::log(d) + models[k].sigma.logdet() / m;
  }
  return scores;
}

inline ScoreRow score_qda(const Vector & x, std::span<const ClusterModel> models, bool with_logdet)
{
  detail::check_models(x, models);
  ScoreRow scores(static_cast<Index>(models.size()));
  for (std::size_t k = 0; k < models.size(); ++k) {
    const double d = mahalanobis_sq(x, models[k].mu, models[k].sigma);
    scores[static_cast<Index>(k)] = d + (with_logdet ? models[k].sigma.logdet() : 0.0);
  }
  return scores;
}

/// Gaussian quadratic score d_k + log|Sigma_k| on (trace-normalized) Tyler plug-ins.
inline ScoreRow score_rqda(const Vector & x, std::span<const ClusterModel> models)
{
  return score_qda(x, models, true);
}

/// (1 + nu/m) log(1 + d/nu) + log nu + (1/m) log|Sigma| + (2/m)(lgamma(nu/2) - lgamma((nu+m)/2))
inline ScoreRow score_tqda(const Vector & x, std::span<const ClusterModel> models)
{
  detail::check_models(x, models);
  const double m = static_cast<double>(x.size());
  ScoreRow scores(static_cast<Index>(models.size()));
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (!models[k].nu) {
      fail(Errc::MissingNu, "t-QDA scoring needs nu for class " + std::to_string(k));
    }
    const double nu = *models[k].nu;
    const double d = mahalanobis_sq(x, models[k].mu, models[k].sigma);
    scores[static_cast<Index>(k)] = (1.0 + nu / m) * std::log1p(d / nu) + std::log(nu) +
                                    models[k].sigma.logdet() / m +
                                    2.0 / m * (std::lgamma(0.5 * nu) - std::lgamma(0.5 * (nu + m)));
  }
  return scores;
}

/// Index of the smallest score; ties and NaN resolve to the lowest index.
inline int argmin_score(const ScoreRow & scores)
{
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  bool seen = false;
  for (Index k = 0; k < scores.size(); ++k) {
    const double v = scores[k];
    if (std::isnan(v)) continue;
    if (!seen || v < best_value) {
      best = static_cast<int>(k);
      best_value = v;
      seen = true;
    }
  }
  return best;
}

inline FittedClassifier fit(
  Method method, const DataMatrix & data, const Labels & labels, const FitConfig & cfg = {},
  const ClassifierOptions & options = {})
{
  if (static_cast<std::size_t>(data.rows()) != labels.size()) {
    fail(Errc::LengthMismatch, "data has " + std::to_string(data.rows()) + " rows but " +
                                 std::to_string(labels.size()) + " labels");
  }
  if (!data.allFinite()) {
    fail(Errc::InvalidArgument, "training data contains non-finite values");
  }
  const int k_count = detail::class_count_of(labels);
  if (k_count < 2) {
    fail(Errc::InvalidArgument, "need at least two classes");
  }
  std::vector<Index> counts(static_cast<std::size_t>(k_count), 0);
  for (const int y : labels) ++counts[static_cast<std::size_t>(y)];
  for (int k = 0; k < k_count; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      fail(Errc::EmptyCluster, "class " + std::to_string(k) + " has no training rows");
    }
  }

  FittedClassifier clf;
  clf.method = method;
  clf.class_count = k_count;
  clf.options = options;
  if (method == Method::KNN) {
    if (options.knn_k < 1) fail(Errc::InvalidArgument, "knn_k must be >= 1");
    clf.knn_data = data;
    clf.knn_labels = labels;
    clf.knn_k = options.knn_k;
    return clf;
  }

  clf.models.reserve(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    const DataMatrix cluster = rows_with_label(data, labels, k);
    switch (method) {
      case Method::QDA: clf.models.push_back(fit_gaussian_mle(cluster, cfg)); break;
      case Method::RQDA: clf.models.push_back(fit_tyler(cluster, cfg)); break;
      case Method::FEMDA: clf.models.push_back(fit_femda(cluster, cfg)); break;
      case Method::TQDA: clf.models.push_back(fit_tqda(cluster, cfg)); break;
      case Method::KNN: break;
    }
  }
  return clf;
}

/// Score row for one observation under the classifier's own rule (not defined for KNN).
inline ScoreRow score(const FittedClassifier & clf, const Vector & x)
{
  const std::span<const ClusterModel> models(clf.models);
  switch (clf.method) {
    case Method::QDA: return score_qda(x, models, clf.options.qda_logdet);
    case Method::RQDA: return score_rqda(x, models);
    case Method::FEMDA: return score_femda(x, models);
    case Method::TQDA: return score_tqda(x, models);
    case Method::KNN: break;
  }
  fail(Errc::InvalidArgument, "KNN has no score row");
}

namespace detail
{

inline int knn_vote(const FittedClassifier & clf, const Vector & x)
{
  const Index n = clf.knn_data.rows();
  const Index k = std::min<Index>(clf.knn_k, n);
  std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = {(clf.knn_data.row(i).transpose() - x).squaredNorm(), i};
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<int> votes(static_cast<std::size_t>(clf.class_count), 0);
  for (Index j = 0; j < k; ++j) {
    ++votes[static_cast<std::size_t>(clf.knn_labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(j)].second)])];
  }
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace detail

inline Labels predict(const FittedClassifier & clf, const DataMatrix & data)
{
  Labels out;
  out.reserve(static_cast<std::size_t>(data.rows()));
  if (data.rows() == 0) return out;
  if (data.cols() != clf.dim()) {
    fail(Errc::DimensionMismatch, "test data has " + std::to_string(data.cols()) +
                                    " columns, classifier expects " + std::to_string(clf.dim()));
  }
  for (Index i = 0; i < data.rows(); ++i) {
    const Vector x = data.row(i).transpose();
    out.push_back(clf.method == Method::KNN ? detail::knn_vote(clf, x) : argmin_score(score(clf, x)));
  }
  return out;
}

}  // namespace femda

#endif  // FEMDA__CLASSIFIERS_HPP_
