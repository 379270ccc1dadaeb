#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "recoverlab/core.hpp"

namespace recoverlab {

/// Relative rank tolerance: a column is dependent when its R-diagonal falls
/// below this times the largest diagonal.
inline constexpr double kRankTol = 1e-12;

/// Extreme singular values of the sensing matrix viewed as a map on all of
/// R^N. A wide matrix (m < N) has a nontrivial null space, so lower = 0.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Solve min_c ||b - A c||_2 for full-column-rank A via Householder QR.
/// Throws RankDeficient when the numerical rank is below the column count.
inline Vector least_squares(const Matrix& A, const Vector& b) {
  if (b.size() != A.rows())
    fail("DimensionMismatch", "least_squares: rhs length != rows");
  if (A.cols() > A.rows())
    fail("RankDeficient", "least_squares: more columns than rows");
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(kRankTol);
  if (qr.rank() < A.cols())
    fail("RankDeficient", "least_squares: numerically rank-deficient matrix");
  return qr.solve(b);
}

/// Rank-truncated least squares used by the batch (stagewise) algorithms:
/// dependent columns get zero coefficients instead of raising an error.
/// Returns the coefficient vector and reports the numerical rank.
inline Vector least_squares_truncated(const Matrix& A, const Vector& b,
                                      Index* rank_out = nullptr) {
  if (b.size() != A.rows())
    fail("DimensionMismatch", "least_squares_truncated: rhs length != rows");
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(kRankTol);
  const Index rank = qr.rank();
  if (rank_out) *rank_out = rank;
  if (rank == A.cols()) return qr.solve(b);
  // Solve on the leading pivoted columns only, zero the dependent ones.
  const auto& perm = qr.colsPermutation();
  Matrix kept(A.rows(), rank);
  for (Index j = 0; j < rank; ++j) kept.col(j) = A.col(perm.indices()[j]);
  Eigen::HouseholderQR<Matrix> qr2(kept);
  const Vector c = qr2.solve(b);
  Vector full = Vector::Zero(A.cols());
  for (Index j = 0; j < rank; ++j) full[perm.indices()[j]] = c[j];
  return full;
}

/// Correlation vector with entries <r, phi_n> = phi_n^T r.
inline Vector correlate(const Matrix& Phi, const Vector& r) {
  if (r.size() != Phi.rows())
    fail("DimensionMismatch", "correlate: vector length != rows");
  return Phi.transpose() * r;
}

/// Frame bounds A||x|| <= ||Phi x|| <= B||x|| over every x in R^N.
inline FrameBounds frame_bounds(const Matrix& Phi) {
  if (Phi.rows() > Phi.cols())
    fail("InvalidDimensions", "frame_bounds expects m <= N");
  if (Phi.norm() == 0.0) fail("InvalidDimensions", "frame_bounds: zero matrix");
  Eigen::BDCSVD<Matrix> svd(Phi);
  const auto& sv = svd.singularValues();
  FrameBounds fb;
  fb.upper = sv[0];
  fb.lower = (Phi.rows() < Phi.cols()) ? 0.0 : sv[sv.size() - 1];
  return fb;
}

/// Cached SPD factorization of Phi Phi^T for repeated row-space projections.
class RowSpaceProjector {
 public:
  explicit RowSpaceProjector(const Matrix& Phi) : Phi_(Phi), llt_(gram(Phi)) {
    if (llt_.info() != Eigen::Success)
      fail("RankDeficient", "row-space projector: Phi Phi^T not positive definite");
  }

  /// Minimum-l2-norm solution of Phi x = u.
  Vector min_norm_solution(const Vector& u) const {
    if (u.size() != Phi_.rows())
      fail("DimensionMismatch", "row_space_project: vector length != rows");
    Vector y = llt_.solve(u);
    check(y, u);
    return Phi_.transpose() * y;
  }

  /// x minus its residual pullback: the closest point to x in {z : Phi z = u}.
  Vector reproject(const Vector& x, const Vector& u) const {
    const Vector defect = Phi_ * x - u;
    return x - Phi_.transpose() * llt_.solve(defect);
  }

  /// Solve (Phi Phi^T) y = v.
  Vector gram_solve(const Vector& v) const { return llt_.solve(v); }

 private:
  static Matrix gram(const Matrix& Phi) {
    Matrix g = Matrix::Zero(Phi.rows(), Phi.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(Phi);
    return g.selfadjointView<Eigen::Lower>();
  }
  void check(const Vector& y, const Vector& u) const {
    const Matrix g = gram(Phi_);
    if ((g * y - u).norm() > 1e-8 * (1.0 + u.norm()))
      fail("RankDeficient", "row_space_project: Phi Phi^T numerically singular");
  }

  Matrix Phi_;
  Eigen::LLT<Matrix> llt_;
};

/// Phi^T (Phi Phi^T)^{-1} u, the minimum-norm solution of Phi x = u.
inline Vector row_space_project(const Matrix& Phi, const Vector& u) {
  return RowSpaceProjector(Phi).min_norm_solution(u);
}

// ---------------------------------------------------------------------------
// Incremental thin QR for greedy pursuits. Columns are appended one at a
// time; modified Gram-Schmidt with one re-orthogonalization pass keeps Q
// orthonormal to ~1e-14, matching a full Householder refactorization well
// inside the 1e-10 contract.
// ---------------------------------------------------------------------------
class IncrementalQr {
 public:
  explicit IncrementalQr(Index rows) : rows_(rows), q_(rows, 0), r_(0, 0) {}

  Index size() const { return q_.cols(); }

  /// Append a column; returns false (leaving the factorization untouched)
  /// when the column is numerically dependent on those already present.
  bool push_column(const Vector& a) {
    const Index k = q_.cols();
    Vector w = a;
    Vector coef = Vector::Zero(k);
    for (int pass = 0; pass < 2; ++pass) {
      if (k == 0) break;
      const Vector proj = q_.transpose() * w;
      coef += proj;
      w.noalias() -= q_ * proj;
    }
    const double rkk = w.norm();
    double max_diag = a.norm();
    for (Index j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(r_(j, j)));
    if (rkk <= kRankTol * max_diag) return false;

    q_.conservativeResize(rows_, k + 1);
    r_.conservativeResize(k + 1, k + 1);
    r_.col(k).head(k) = coef;
    r_.row(k).setZero();
    r_(k, k) = rkk;
    q_.col(k) = w / rkk;
    return true;
  }

  /// Coefficients of the least-squares fit of b onto the appended columns.
  Vector solve(const Vector& b) const {
    const Vector rhs = q_.transpose() * b;
    return r_.topLeftCorner(size(), size())
        .triangularView<Eigen::Upper>()
        .solve(rhs);
  }

  /// b minus its projection onto the span of the appended columns.
  Vector residual(const Vector& b) const {
    if (size() == 0) return b;
    return b - q_ * (q_.transpose() * b);
  }

  const Matrix& q() const { return q_; }

 private:
  Index rows_;
  Matrix q_;
  Matrix r_;
};

/// Least squares of u restricted to Phi's columns at `support`, scattered
/// back to an N-vector. Rank-deficient supports are truncated.
inline Vector solve_on_support(const Matrix& Phi, const Vector& u,
                               const IndexSet& support) {
  Vector x = Vector::Zero(Phi.cols());
  if (support.empty()) return x;
  Matrix sub(Phi.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j)
    sub.col(static_cast<Index>(j)) = Phi.col(support[j]);
  const Vector c = least_squares_truncated(sub, u);
  for (std::size_t j = 0; j < support.size(); ++j)
    x[support[j]] = c[static_cast<Index>(j)];
  return x;
}

}  // namespace recoverlab
