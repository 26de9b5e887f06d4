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
#include "femda/dataio.hpp"
#include "femda/harness.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>

namespace femda
{
namespace
{

class TempFile
{
public:
  explicit TempFile(const std::string & body)
  {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("femda_dataio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
    std::ofstream(path_, std::ios::binary) << body;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path & path() const { return path_; }

private:
  std::filesystem::path path_;
};

Errc code_of(const std::function<void()> & body)
{
  try {
    body();
  } catch (const Error & e) {
    return e.code();
  }
  ADD_FAILURE() << "no femda::Error thrown";
  return Errc::InvalidArgument;
}

Dataset gaussian_dataset(Index n, int m, int k, std::uint64_t seed)
{
  Rng rng(seed);
  Dataset ds;
  ds.data.resize(n, m);
  ds.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    ds.data.row(i) = standard_normal_vector(m, rng).transpose();
    ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
  }
  ds.class_count = k;
  return ds;
}

TEST(LoadCsv, TwoRows)
{
  TempFile f("1,2,a\n3,4,b\n");
  const auto ds = load_csv(f.path());
  ASSERT_EQ(ds.data.rows(), 2);
  ASSERT_EQ(ds.data.cols(), 2);
  EXPECT_EQ(ds.data(1, 0), 3.0);
  EXPECT_EQ(ds.labels, (Labels{0, 1}));
  EXPECT_EQ(ds.label_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.class_count, 2);
}

TEST(LoadCsv, HeaderSkippedAndLabelColumnByIndex)
{
  TempFile f("cls,x,y\r\nb,1.5,-2\r\na,3e2,4\r\n\r\nb,0,0\r\n");
  const auto ds = load_csv(f.path(), LabelColumn::at(0), true);
  ASSERT_EQ(ds.data.rows(), 3);
  EXPECT_EQ(ds.data(1, 0), 300.0);
  EXPECT_EQ(ds.labels, (Labels{0, 1, 0}));
  EXPECT_EQ(ds.label_names[0], "b");
}

TEST(LoadCsv, NonNumericCellNamesRowAndColumn)
{
  TempFile f("1,2,a\n3,x,b\n");
  try {
    (void)load_csv(f.path());
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("row 2, column 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, RaggedEmptyMissing)
{
  TempFile ragged("1,2,a\n3,b\n");
  EXPECT_EQ(code_of([&] { (void)load_csv(ragged.path()); }), Errc::RaggedRows);
  TempFile empty("\n\n");
  EXPECT_EQ(code_of([&] { (void)load_csv(empty.path()); }), Errc::EmptyFile);
  TempFile header_only("x,y,label\n");
  EXPECT_EQ(code_of([&] { (void)load_csv(header_only.path(), {}, true); }), Errc::EmptyFile);
  EXPECT_EQ(code_of([] { (void)load_csv("/nonexistent/femda.csv"); }), Errc::IoError);
}

TEST(Pca, LineInPlanePreservesDistances)
{
  DataMatrix x(20, 2);
  for (Index i = 0; i < 20; ++i) x.row(i) << 0.3 * i - 1.0, 0.6 * i + 2.0;
  const auto t = fit_pca(x, 1);
  const DataMatrix y = apply_pca(t, x);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) EXPECT_NEAR(std::abs(y(i, 0) - y(j, 0)), (x.row(i) - x.row(j)).norm(), 1e-10);
  }
  EXPECT_EQ(code_of([&] { (void)fit_pca(x, 2); }), Errc::RankDeficient);
}

TEST(Pca, FullDimensionIsOrthogonalChangeOfBasis)
{
  const auto ds = gaussian_dataset(200, 5, 2, 1);
  const auto t = fit_pca(ds.data, 5);
  EXPECT_LT((t.components * t.components.transpose() - Matrix::Identity(5, 5)).norm(), 1e-10);
  const DataMatrix y = apply_pca(t, ds.data);
  const DataMatrix back = (y * t.components).rowwise() + t.mean.transpose();
  EXPECT_LT((back - ds.data).norm(), 1e-10);
  for (Index c = 1; c < 5; ++c) EXPECT_GE(t.explained_variance[c - 1], t.explained_variance[c]);
}

TEST(Pca, SignConventionAndDeterminism)
{
  const auto ds = gaussian_dataset(300, 4, 2, 2);
  const auto a = fit_pca(ds.data, 3);
  const auto b = fit_pca(ds.data, 3);
  EXPECT_EQ(a.components, b.components);
  for (Index c = 0; c < 3; ++c) {
    Index arg = 0;
    a.components.row(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(a.components(c, arg), 0.0);
  }
}

TEST(Pca, IsotropicCloudCapturesItsShare)
{
  const int m = 8;
  const auto ds = gaussian_dataset(10000, m, 2, 3);
  const auto t = fit_pca(ds.data, 2);
  const DataMatrix centered = ds.data.rowwise() - ds.data.colwise().mean();
  const double total = centered.squaredNorm() / (ds.data.rows() - 1);
  EXPECT_NEAR(t.explained_variance.sum() / total, 2.0 / m, 0.1 * 2.0 / m);
}

TEST(Pca, ApplyEdgeCases)
{
  const auto ds = gaussian_dataset(50, 3, 2, 4);
  const auto t = fit_pca(ds.data, 2);
  EXPECT_EQ(apply_pca(t, DataMatrix(0, 3)).rows(), 0);
  EXPECT_EQ(code_of([&] { (void)apply_pca(t, DataMatrix::Zero(2, 4)); }), Errc::DimensionMismatch);
  const DataMatrix zero = apply_pca(t, DataMatrix::Zero(2, 3));
  EXPECT_LT((zero.row(0).transpose() + t.components * t.mean).norm(), 1e-12);
  EXPECT_EQ(zero.row(0), zero.row(1));
  EXPECT_EQ(code_of([&] { (void)fit_pca(ds.data, 0); }), Errc::InvalidArgument);
}

TEST(Pca, TrainOnlyFitIgnoresTestRows)
{
  auto ds = gaussian_dataset(300, 6, 3, 5);
  ExperimentConfig cfg;
  cfg.mode = Mode::Real;
  cfg.dataset_path = "mem";
  cfg.pca_dim = 3;
  const auto prep = prepare_repetition(cfg, 0, &ds);
  const auto parts = split(ds, cfg.train_fraction, derive_seed(cfg.base_seed, kSplitStream));
  const auto expect = fit_pca(parts.train.data, 3);
  EXPECT_EQ(prep.pca->components, expect.components);

  // Wildly moving only the test rows must not change the transform.
  std::set<Index> train_rows;
  for (Index i = 0; i < ds.data.rows(); ++i) {
    for (Index j = 0; j < parts.train.data.rows(); ++j) {
      if (ds.data.row(i) == parts.train.data.row(j)) train_rows.insert(i);
    }
  }
  for (Index i = 0; i < ds.data.rows(); ++i) {
    if (!train_rows.count(i)) ds.data.row(i) *= 1000.0;
  }
  const auto moved = prepare_repetition(cfg, 0, &ds);
  EXPECT_EQ(moved.pca->components, prep.pca->components);
  EXPECT_EQ(moved.train, prep.train);
}

TEST(Split, SizesAndPartition)
{
  auto ds = gaussian_dataset(10, 2, 2, 6);
  for (Index i = 0; i < 10; ++i) ds.data(i, 0) = static_cast<double>(i);
  const auto parts = split(ds, 0.7, 42);
  EXPECT_EQ(parts.train.data.rows(), 7);
  EXPECT_EQ(parts.test.data.rows(), 3);
  std::set<double> ids;
  for (Index i = 0; i < 7; ++i) ids.insert(parts.train.data(i, 0));
  for (Index i = 0; i < 3; ++i) ids.insert(parts.test.data(i, 0));
  EXPECT_EQ(ids.size(), 10u);
  const auto again = split(ds, 0.7, 42);
  EXPECT_EQ(again.train.data, parts.train.data);
  EXPECT_EQ(again.test.labels, parts.test.labels);
}

TEST(Split, EveryClassReachesTrain)
{
  auto ds = gaussian_dataset(40, 2, 2, 7);
  std::fill(ds.labels.begin(), ds.labels.end(), 0);
  ds.labels[17] = 1;  // one rare class member
  ds.class_count = 2;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto parts = split(ds, 0.7, seed);
    EXPECT_NE(std::find(parts.train.labels.begin(), parts.train.labels.end(), 1), parts.train.labels.end());
  }
}

TEST(Split, ImpossibleClassLayoutFails)
{
  auto ds = gaussian_dataset(4, 2, 4, 8);  // 4 classes, 1 row each: a 3-row train part misses one
  EXPECT_EQ(code_of([&] { (void)split(ds, 0.7, 1); }), Errc::ClassMissingFromTrain);
  EXPECT_EQ(code_of([&] { (void)split(ds, 1.0, 1); }), Errc::InvalidArgument);
}

TEST(LoadSplit, RoundTripDeterministic)
{
  TempFile f("1,2,a\n3,4,b\n5,6,a\n7,8,b\n9,10,a\n11,12,b\n");
  const auto a = split(load_csv(f.path()), 0.5, 3);
  const auto b = split(load_csv(f.path()), 0.5, 3);
  EXPECT_EQ(a.train.data, b.train.data);
  EXPECT_EQ(a.test.labels, b.test.labels);
}

}  // namespace
}  // namespace femda
