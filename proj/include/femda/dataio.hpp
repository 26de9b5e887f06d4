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

#ifndef FEMDA__DATAIO_HPP_
#define FEMDA__DATAIO_HPP_

#include "femda/error.hpp"
#include "femda/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace femda
{

struct Dataset
{
  std::string name;
  DataMatrix data;
  Labels labels;
  int class_count = 0;
  /// label_names[k] is the original text of dense label k.
  std::vector<std::string> label_names;
};

/// Which CSV column carries the label: the last one, or a zero-based index.
struct LabelColumn
{
  int index = -1;  // -1 means last

  static LabelColumn last() { return {}; }
  static LabelColumn at(int i) { return {i}; }
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view cell, double & out)
{
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace detail

/// Comma-separated numeric table with one label column. Labels are arbitrary strings,
/// mapped to dense integers in order of first appearance. Blank lines are skipped.
/// Row numbers in error messages are 1-based file lines.
inline Dataset load_csv(const std::filesystem::path & path, LabelColumn label_column = {}, bool has_header = false)
{
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());

  Dataset ds;
  ds.name = path.stem().string();
  std::vector<std::vector<double>> rows;
  std::map<std::string, int, std::less<>> label_ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = detail::split_commas(line);
    if (width == 0) {
      width = cells.size();
      if (width < 2) fail(Errc::ParseError, "row " + std::to_string(line_no) + ": need a feature and a label column");
    } else if (cells.size() != width) {
      fail(Errc::RaggedRows, "row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(width));
    }
    const std::size_t label_at = label_column.index < 0 ? width - 1 : static_cast<std::size_t>(label_column.index);
    if (label_at >= width) fail(Errc::ParseError, "label column " + std::to_string(label_at) + " out of range");

    std::vector<double> features;
    features.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_at) continue;
      double v = 0.0;
      if (!detail::parse_double(cells[c], v)) {
        fail(Errc::ParseError, "row " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                 ": '" + std::string(cells[c]) + "' is not a number");
      }
      features.push_back(v);
    }
    const std::string label(cells[label_at]);
    auto it = label_ids.find(label);
    if (it == label_ids.end()) {
      it = label_ids.emplace(label, static_cast<int>(ds.label_names.size())).first;
      ds.label_names.push_back(label);
    }
    ds.labels.push_back(it->second);
    rows.push_back(std::move(features));
  }
  if (rows.empty()) fail(Errc::EmptyFile, path.string() + " has no data rows");

  ds.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      ds.data(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  ds.class_count = static_cast<int>(ds.label_names.size());
  return ds;
}

/// Projection onto the top-d principal axes of a training set (no whitening).
struct PcaTransform
{
  Vector mean;
  /// d x m, rows orthonormal, ordered by decreasing variance.
  Matrix components;
  Vector explained_variance;

  Index dim_in() const { return components.cols(); }
  Index dim_out() const { return components.rows(); }
};

/// Each component's largest-magnitude entry is made positive so the fit is reproducible.
inline PcaTransform fit_pca(const DataMatrix & train, int d)
{
  const Index m = train.cols();
  if (d < 1 || d > m) fail(Errc::InvalidArgument, "PCA dimension must lie in [1, " + std::to_string(m) + "]");
  if (train.rows() < 2) fail(Errc::InvalidArgument, "PCA needs at least two training rows");

  PcaTransform t;
  t.mean = train.colwise().mean().transpose();
  const DataMatrix centered = train.rowwise() - t.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(train.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector values = eig.eigenvalues();  // ascending
  const double top = std::max(values[m - 1], 0.0);
  const double floor = 1e-12 * std::max(top, 1e-300);

  t.components.resize(d, m);
  t.explained_variance.resize(d);
  for (int c = 0; c < d; ++c) {
    const Index src = m - 1 - c;
    if (values[src] <= floor) {
      fail(Errc::RankDeficient, "PCA dimension " + std::to_string(d) + " exceeds the covariance rank");
    }
    Vector axis = eig.eigenvectors().col(src);
    Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis[arg] < 0.0) axis = -axis;
    t.components.row(c) = axis.transpose();
    t.explained_variance[c] = values[src];
  }
  return t;
}

inline DataMatrix apply_pca(const PcaTransform & t, const DataMatrix & data)
{
  if (data.cols() != t.dim_in()) {
    fail(Errc::DimensionMismatch, "PCA expects " + std::to_string(t.dim_in()) + " columns, got " +
                                    std::to_string(data.cols()));
  }
  if (data.rows() == 0) return DataMatrix(0, t.dim_out());
  return (data.rowwise() - t.mean.transpose()) * t.components.transpose();
}

inline Dataset subset(const Dataset & ds, const std::vector<Index> & rows, const std::string & suffix)
{
  Dataset out;
  out.name = ds.name + suffix;
  out.data = select_rows(ds.data, rows);
  out.labels = select_labels(ds.labels, rows);
  out.class_count = ds.class_count;
  out.label_names = ds.label_names;
  return out;
}

struct TrainTestSplit
{
  Dataset train;
  Dataset test;
};

/// Seeded shuffle then prefix split with round(fraction * n) training rows. The shuffle
/// is redrawn (up to 100 times) until every class appears in the training part.
inline TrainTestSplit split(const Dataset & ds, double train_fraction, std::uint64_t seed)
{
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(Errc::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  const Index n = ds.data.rows();
  if (n < 2) fail(Errc::InvalidArgument, "need at least two rows to split");
  const auto n_train = std::clamp<Index>(
    static_cast<Index>(std::llround(train_fraction * static_cast<double>(n))), 1, n - 1);
  const int k_count = std::max(ds.class_count,
                               ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1);

  Rng rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> present(static_cast<std::size_t>(k_count), 0);
    for (Index i = 0; i < n_train; ++i) present[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])] = 1;
    if (std::all_of(present.begin(), present.end(), [](char p) { return p != 0; })) {
      const std::vector<Index> train_rows(order.begin(), order.begin() + n_train);
      const std::vector<Index> test_rows(order.begin() + n_train, order.end());
      return {subset(ds, train_rows, "/train"), subset(ds, test_rows, "/test")};
    }
  }
  fail(Errc::ClassMissingFromTrain, "some class never reached the training part after 100 shuffles");
}

}  // namespace femda

#endif  // FEMDA__DATAIO_HPP_
