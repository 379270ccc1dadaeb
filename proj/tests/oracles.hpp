// Test-only reference implementations, deliberately kept on different
// computational routes than the library: Gaussian elimination on the normal
// equations instead of QR, power iteration instead of SVD, exhaustive
// support enumeration instead of pursuit.
#pragma once

#include <cmath>
#include <vector>

#include "recoverlab/core.hpp"

namespace oracles {

using recoverlab::Index;
using recoverlab::IndexSet;
using recoverlab::Matrix;
using recoverlab::Vector;

/// Solve A x = b by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix A, Vector b) {
  const Index n = A.rows();
  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (piv != k) {
      A.row(k).swap(A.row(piv));
      std::swap(b[k], b[piv]);
    }
    for (Index i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      for (Index j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (Index i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (Index j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
    x[i] = acc / A(i, i);
  }
  return x;
}

/// Least squares through the normal equations A^T A c = A^T b.
inline Vector normal_equation_lsq(const Matrix& A, const Vector& b) {
  const Matrix g = A.transpose() * A;
  const Vector rhs = A.transpose() * b;
  return gauss_solve(g, rhs);
}

/// Largest singular value by power iteration on Phi^T Phi.
inline double power_sigma_max(const Matrix& Phi, int max_iters = 20000) {
  Vector v = Vector::Ones(Phi.cols());
  v[0] = 1.5;  // break symmetry for structured inputs
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = Phi.transpose() * (Phi * v);
    const double nl = w.norm();
    if (nl == 0.0) return 0.0;
    w /= nl;
    const double next = w.dot(Phi.transpose() * (Phi * w));
    if (std::abs(next - lambda) <= 1e-14 * std::max(1.0, next) && it > 16) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

/// Smallest singular value of Phi viewed as a map on R^N: zero for strictly
/// wide matrices, otherwise shifted power iteration on Phi^T Phi.
inline double power_sigma_min(const Matrix& Phi, int max_iters = 20000) {
  if (Phi.rows() < Phi.cols()) return 0.0;
  const double smax = power_sigma_max(Phi, max_iters);
  const double shift = smax * smax * (1.0 + 1e-6) + 1e-12;
  Vector v = Vector::Ones(Phi.cols());
  v[0] = 1.5;
  v.normalize();
  double mu = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = shift * v - Phi.transpose() * (Phi * v);
    const double nl = w.norm();
    if (nl == 0.0) break;
    w /= nl;
    const double next = w.dot(shift * w - Phi.transpose() * (Phi * w));
    if (std::abs(next - mu) <= 1e-14 * std::max(1.0, next) && it > 16) {
      mu = next;
      break;
    }
    mu = next;
    v = w;
  }
  return std::sqrt(std::max(shift - mu, 0.0));
}

struct SparseFit {
  IndexSet support;
  Vector x;
  double residual = 0.0;
};

/// Exhaustive search over all supports of size <= s for the least-residual
/// least-squares fit. Intended for N <= ~12, s <= 3.
inline SparseFit brute_force_sparsest(const Matrix& Phi, const Vector& u,
                                      Index s) {
  const Index N = Phi.cols();
  SparseFit best;
  best.x = Vector::Zero(N);
  best.residual = u.norm();

  IndexSet comb;
  const auto evaluate = [&]() {
    Matrix sub(Phi.rows(), static_cast<Index>(comb.size()));
    for (std::size_t j = 0; j < comb.size(); ++j)
      sub.col(static_cast<Index>(j)) = Phi.col(comb[j]);
    const Vector c = normal_equation_lsq(sub, u);
    const double res = (u - sub * c).norm();
    if (res < best.residual - 1e-15) {
      best.residual = res;
      best.support = comb;
      best.x = Vector::Zero(N);
      for (std::size_t j = 0; j < comb.size(); ++j)
        best.x[comb[j]] = c[static_cast<Index>(j)];
    }
  };

  const auto recurse = [&](auto&& self, Index start, Index left) -> void {
    if (left == 0) {
      evaluate();
      return;
    }
    for (Index i = start; i <= N - left; ++i) {
      comb.push_back(i);
      self(self, i + 1, left - 1);
      comb.pop_back();
    }
  };
  for (Index k = 1; k <= s; ++k) recurse(recurse, 0, k);
  return best;
}

/// Minimum l1 norm over all basic feasible solutions of Phi x = u (supports
/// of size m with an invertible square submatrix). The l1 minimizer of a
/// feasible bounded LP sits on one of these vertices.
inline double l1_vertex_optimum(const Matrix& Phi, const Vector& u) {
  const Index N = Phi.cols();
  const Index m = Phi.rows();
  double best = std::numeric_limits<double>::infinity();
  IndexSet comb;
  const auto evaluate = [&]() {
    Matrix sub(m, m);
    for (std::size_t j = 0; j < comb.size(); ++j)
      sub.col(static_cast<Index>(j)) = Phi.col(comb[j]);
    // Reject singular bases via the elimination pivots.
    Matrix a = sub;
    Vector b = u;
    double det_scale = 1.0;
    for (Index k = 0; k < m; ++k) {
      Index piv = k;
      for (Index i = k + 1; i < m; ++i)
        if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
      if (std::abs(a(piv, k)) < 1e-12) return;
      det_scale = std::min(det_scale, std::abs(a(piv, k)));
      if (piv != k) {
        a.row(k).swap(a.row(piv));
        std::swap(b[k], b[piv]);
      }
      for (Index i = k + 1; i < m; ++i) {
        const double f = a(i, k) / a(k, k);
        for (Index j = k; j < m; ++j) a(i, j) -= f * a(k, j);
        b[i] -= f * b[k];
      }
    }
    Vector c(m);
    for (Index i = m - 1; i >= 0; --i) {
      double acc = b[i];
      for (Index j = i + 1; j < m; ++j) acc -= a(i, j) * c[j];
      c[i] = acc / a(i, i);
    }
    best = std::min(best, c.lpNorm<1>());
  };
  const auto recurse = [&](auto&& self, Index start, Index left) -> void {
    if (left == 0) {
      evaluate();
      return;
    }
    for (Index i = start; i <= N - left; ++i) {
      comb.push_back(i);
      self(self, i + 1, left - 1);
      comb.pop_back();
    }
  };
  recurse(recurse, 0, m);
  return best;
}

}  // namespace oracles
