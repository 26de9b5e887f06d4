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

#ifndef FEMDA__TYPES_HPP_
#define FEMDA__TYPES_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace femda
{

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n observations stored row-wise: row i is x_i in R^m.
using DataMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense class labels 0..K-1, one per DataMatrix row.
using Labels = std::vector<int>;

/// Every stochastic routine takes this engine by reference; seeding is the caller's job.
using Rng = std::mt19937_64;

/// Copy the rows listed in `rows` (in that order).
inline DataMatrix select_rows(const DataMatrix & data, const std::vector<Index> & rows)
{
  DataMatrix out(static_cast<Index>(rows.size()), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = data.row(rows[i]);
  }
  return out;
}

inline Labels select_labels(const Labels & labels, const std::vector<Index> & rows)
{
  Labels out;
  out.reserve(rows.size());
  for (const auto r : rows) {
    out.push_back(labels[static_cast<std::size_t>(r)]);
  }
  return out;
}

/// Rows of `data` whose label equals `k`.
inline DataMatrix rows_with_label(const DataMatrix & data, const Labels & labels, int k)
{
  std::vector<Index> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == k) {
      rows.push_back(static_cast<Index>(i));
    }
  }
  return select_rows(data, rows);
}

}  // namespace femda

#endif  // FEMDA__TYPES_HPP_
