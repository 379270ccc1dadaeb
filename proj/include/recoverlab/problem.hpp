#pragma once

#include "recoverlab/core.hpp"
#include "recoverlab/distributions.hpp"

namespace recoverlab {

/// Magnitudes at or below this are rejected when drawing nonzero
/// coefficients, keeping every sparse component two orders above the
/// numeric floor used by CoSaMP/SP.
inline constexpr double kNonzeroFloor = 1e-10;

struct ProblemInstance {
  Matrix Phi;       // m x N, unit-norm columns
  Vector x;         // true sparse vector, length N
  Vector u;         // measurement Phi * x
  IndexSet support; // S(x), ascending
  Index N = 0;
  Index m = 0;
  Index s = 0;

  double delta() const { return double(m) / double(N); }
};

/// Sensing matrix from the uniform spherical ensemble: i.i.d. standard
/// Gaussian entries, every column normalized to unit l2 norm.
inline Matrix sample_sensing_matrix(Index m, Index N, std::uint64_t seed) {
  if (m < 1 || N < 1 || m >= N + 1)
    fail("InvalidDimensions", "sensing matrix needs 1 <= m <= N");
  Rng rng(seed);
  Matrix Phi(m, N);
  for (Index j = 0; j < N; ++j) {
    double norm2 = 0.0;
    do {
      for (Index i = 0; i < m; ++i) Phi(i, j) = rng.normal();
      norm2 = Phi.col(j).squaredNorm();
    } while (norm2 < 1e-24);
    Phi.col(j) /= std::sqrt(norm2);
  }
  return Phi;
}

/// s-sparse vector: support drawn uniformly without replacement, nonzeros
/// i.i.d. from `dist` with magnitudes forced above kNonzeroFloor.
inline Vector sample_sparse_vector(Index N, Index s, const DistributionSpec& dist,
                                   std::uint64_t seed) {
  if (s < 1 || s > N) fail("InvalidSparsity", "need 1 <= s <= N");
  dist.validate();
  Rng rng(seed);

  // Partial Fisher-Yates for the support.
  std::vector<Index> pool(static_cast<std::size_t>(N));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index k = 0; k < s; ++k) {
    const std::size_t j =
        static_cast<std::size_t>(k) + rng.index(static_cast<std::size_t>(N - k));
    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
  }
  IndexSet support(pool.begin(), pool.begin() + s);
  std::sort(support.begin(), support.end());

  Vector x = Vector::Zero(N);
  for (Index i : support) {
    double v;
    do {
      v = dist.sample(rng);
    } while (std::abs(v) <= kNonzeroFloor);
    x[i] = v;
  }
  return x;
}

inline ProblemInstance make_instance(Matrix Phi, Vector x) {
  ProblemInstance p;
  p.N = Phi.cols();
  p.m = Phi.rows();
  p.Phi = std::move(Phi);
  p.u = p.Phi * x;
  p.support = nonzero_support(x);
  p.s = static_cast<Index>(p.support.size());
  p.x = std::move(x);
  ensure_finite(p.Phi, "Phi");
  ensure_finite(p.x, "x");
  return p;
}

/// Grid cell dimensions: m = round(delta*N), s = max(1, round(rho*m)).
inline Index measurements_for(Index N, double delta) { return round_count(delta * double(N)); }
inline Index sparsity_for(Index m, double rho) {
  return std::max<Index>(1, round_count(rho * double(m)));
}

/// One problem from (N, delta, rho): Phi and x drawn with sub-seeds derived
/// from `seed`, measurement u = Phi x.
inline ProblemInstance build_problem(Index N, double delta, double rho,
                                     const DistributionSpec& dist,
                                     std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) fail("InvalidDimensions", "delta must be in (0,1)");
  if (!(rho > 0.0 && rho <= 1.0)) fail("InvalidSparsity", "rho must be in (0,1]");
  const Index m = measurements_for(N, delta);
  const Index s = sparsity_for(m, rho);
  if (m < 1 || m >= N) fail("InvalidDimensions", "delta*N must land in [1, N)");
  if (s > N) fail("InvalidSparsity", "rho*m exceeds N");
  Matrix Phi = sample_sensing_matrix(m, N, seed_mix({seed, seed_tag::phi}));
  Vector x = sample_sparse_vector(N, s, dist, seed_mix({seed, seed_tag::sparse_vector}));
  return make_instance(std::move(Phi), std::move(x));
}

/// The experiment grid: 30 sparsities rho in [0.05, 1], 16 indeterminacies
/// delta in [0.05, 0.5414], 50 trials per cell at N = 400.
struct SuiteGrid {
  Index N = 400;
  std::vector<double> rho_values = linspace(0.05, 1.0, 30);
  std::vector<double> delta_values = linspace(0.05, 0.5414, 16);
  int trials = 50;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (N < 2) fail("ConfigError", "grid N too small");
    if (trials < 1) fail("ConfigError", "grid needs at least one trial");
    auto ordered = [](const std::vector<double>& v) {
      return std::is_sorted(v.begin(), v.end()) && v.size() >= 2;
    };
    if (!ordered(rho_values) || !ordered(delta_values))
      fail("ConfigError", "grid values must be ascending");
  }
};

}  // namespace recoverlab
