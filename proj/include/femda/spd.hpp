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

#ifndef FEMDA__SPD_HPP_
#define FEMDA__SPD_HPP_

#include "femda/error.hpp"
#include "femda/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace femda
{

/// Symmetric positive-definite matrix with its Cholesky factor and log-determinant
/// computed once at construction.
///
/// The input is symmetrized as (a + a^T) / 2 before factorization, which absorbs the
/// rounding asymmetry that accumulates in fixed-point updates. Inputs that are far from
/// symmetric (relative Frobenius asymmetry above 1e-8) are rejected instead.
class SpdMatrix
{
public:
  explicit SpdMatrix(const Matrix & a)
  {
    if (a.rows() != a.cols() || a.rows() < 1) {
      fail(Errc::DimensionMismatch, "SpdMatrix needs a non-empty square matrix, got " +
                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.allFinite()) {
      fail(Errc::NotPositiveDefinite, "matrix has non-finite entries");
    }
    const double scale = a.norm();
    if (scale > 0.0 && (a - a.transpose()).norm() > 1e-8 * scale) {
      fail(Errc::NotSymmetric, "matrix is not symmetric");
    }
    entries_ = 0.5 * (a + a.transpose());

    Eigen::LLT<Matrix> llt(entries_);
    if (llt.info() != Eigen::Success) {
      fail(Errc::NotPositiveDefinite, "Cholesky pivot <= 0; scatter needs regularization");
    }
    chol_ = llt.matrixL();
    logdet_ = 2.0 * chol_.diagonal().array().log().sum();
  }

  static SpdMatrix identity(Index m) { return SpdMatrix(Matrix::Identity(m, m)); }

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix & matrix() const noexcept { return entries_; }
  /// Lower-triangular L with L L^T = matrix().
  const Matrix & chol() const noexcept { return chol_; }
  double logdet() const noexcept { return logdet_; }
  double trace() const { return entries_.trace(); }

  /// Solve L y = v.
  template <typename Derived>
  typename Derived::PlainObject solve_lower(const Eigen::MatrixBase<Derived> & v) const
  {
    return chol_.triangularView<Eigen::Lower>().solve(v);
  }

  SpdMatrix scaled(double c) const { return SpdMatrix(c * entries_); }

private:
  Matrix entries_;
  Matrix chol_;
  double logdet_ = 0.0;
};

inline SpdMatrix cholesky(const Matrix & a) { return SpdMatrix(a); }

inline double mahalanobis_sq(const Vector & x, const Vector & mu, const SpdMatrix & sigma)
{
  if (x.size() != mu.size() || x.size() != sigma.dim()) {
    fail(Errc::DimensionMismatch, "mahalanobis_sq: x has " + std::to_string(x.size()) +
                                    " entries, mu " + std::to_string(mu.size()) + ", sigma " +
                                    std::to_string(sigma.dim()));
  }
  const Vector y = sigma.solve_lower(x - mu);
  return y.squaredNorm();
}

/// Squared Mahalanobis distance of every row of `data`, one triangular solve for the batch.
inline Vector mahalanobis_sq_rows(const DataMatrix & data, const Vector & mu, const SpdMatrix & sigma)
{
  if (data.cols() != mu.size() || mu.size() != sigma.dim()) {
    fail(Errc::DimensionMismatch, "mahalanobis_sq_rows: data has " + std::to_string(data.cols()) +
                                    " columns, mu " + std::to_string(mu.size()) + ", sigma " +
                                    std::to_string(sigma.dim()));
  }
  if (data.rows() == 0) {
    return Vector(0);
  }
  const Matrix centered = (data.rowwise() - mu.transpose()).transpose();
  const Matrix y = sigma.solve_lower(centered);
  return y.colwise().squaredNorm().transpose();
}

/// log of the generalized eigenvalues of (a, b), i.e. eigenvalues of L_a^{-1} b L_a^{-T}.
inline Vector generalized_log_eigenvalues(const SpdMatrix & a, const SpdMatrix & b)
{
  if (a.dim() != b.dim()) {
    fail(Errc::DimensionMismatch, "geodesic distance between matrices of different size");
  }
  const Matrix left = a.solve_lower(b.matrix());
  Matrix whitened = a.solve_lower(left.transpose());
  whitened = 0.5 * (whitened + whitened.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened, Eigen::EigenvaluesOnly);
  const Vector lambda = eig.eigenvalues();
  if ((lambda.array() <= 0.0).any()) {
    fail(Errc::NotPositiveDefinite, "non-positive generalized eigenvalue");
  }
  return lambda.array().log().matrix();
}

/// Affine-invariant Riemannian distance sqrt(sum_i log^2 lambda_i).
inline double spd_geodesic_distance(const SpdMatrix & a, const SpdMatrix & b)
{
  return generalized_log_eigenvalues(a, b).norm();
}

/// min over c > 0 of spd_geodesic_distance(a, c b): the log-eigenvalues are centered.
inline double spd_geodesic_distance_scale_matched(const SpdMatrix & a, const SpdMatrix & b)
{
  const Vector logs = generalized_log_eigenvalues(a, b);
  return (logs.array() - logs.mean()).matrix().norm();
}

}  // namespace femda

#endif  // FEMDA__SPD_HPP_
