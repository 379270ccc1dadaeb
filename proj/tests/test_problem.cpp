#include <catch2/catch_amalgamated.hpp>

#include "recoverlab/problem.hpp"

using namespace recoverlab;

TEST_CASE("sensing matrices are deterministic with unit columns", "[problem]") {
  const Matrix a = sample_sensing_matrix(3, 5, 42);
  const Matrix b = sample_sensing_matrix(3, 5, 42);
  REQUIRE(a == b);
  for (Index j = 0; j < a.cols(); ++j)
    REQUIRE(std::abs(a.col(j).norm() - 1.0) <= 1e-12);
  REQUIRE(sample_sensing_matrix(3, 5, 43) != a);
}

TEST_CASE("inter-column coherence is centered at zero", "[problem]") {
  // Monte-Carlo estimate over fresh draws; one off-diagonal pair per seed.
  const int draws = 1000;
  double acc = 0.0;
  for (int t = 0; t < draws; ++t) {
    const Matrix phi = sample_sensing_matrix(50, 100, 1000 + std::uint64_t(t));
    acc += phi.col(0).dot(phi.col(1));
  }
  const double bound = 3.0 * (1.0 / std::sqrt(50.0)) / std::sqrt(double(draws));
  REQUIRE(std::abs(acc / draws) <= bound);
}

TEST_CASE("sparse vectors have the requested support size and law", "[problem]") {
  DistributionSpec bern;
  bern.kind = DistKind::Bernoulli;
  const Vector full = sample_sparse_vector(10, 10, bern, 5);
  for (Index i = 0; i < 10; ++i)
    REQUIRE((full[i] == 1.0 || full[i] == -1.0));

  DistributionSpec uni;
  uni.kind = DistKind::Uniform;
  const Vector u = sample_sparse_vector(400, 40, uni, 6);
  int nz = 0;
  for (Index i = 0; i < 400; ++i) {
    if (u[i] != 0.0) {
      ++nz;
      REQUIRE(std::abs(u[i]) <= 1.0);
      REQUIRE(std::abs(u[i]) > 1e-10);
    }
  }
  REQUIRE(nz == 40);

  REQUIRE_THROWS_AS(sample_sparse_vector(10, 0, bern, 1), RecoveryError);
  REQUIRE_THROWS_AS(sample_sparse_vector(10, 11, bern, 1), RecoveryError);
}

TEST_CASE("laplacian nonzeros match the density moments", "[problem]") {
  DistributionSpec lap;
  lap.kind = DistKind::Laplacian;
  double sum = 0.0, sum_abs = 0.0;
  int n = 0;
  for (int chunk = 0; chunk < 25; ++chunk) {
    const Vector v = sample_sparse_vector(400, 400, lap, 900 + std::uint64_t(chunk));
    for (Index i = 0; i < v.size(); ++i) {
      sum += v[i];
      sum_abs += std::abs(v[i]);
      ++n;
    }
  }
  REQUIRE(n == 10000);
  REQUIRE(std::abs(sum / n) <= 0.01);
  REQUIRE(sum_abs / n == Catch::Approx(0.1).epsilon(0.05));
}

TEST_CASE("bimodal rayleigh magnitudes and signs", "[problem]") {
  DistributionSpec br;
  br.kind = DistKind::BimodalRayleigh;
  double sum_abs = 0.0;
  long pos = 0, n = 0;
  for (int chunk = 0; chunk < 250; ++chunk) {
    const Vector v = sample_sparse_vector(400, 400, br, 7000 + std::uint64_t(chunk));
    for (Index i = 0; i < v.size(); ++i) {
      sum_abs += std::abs(v[i]);
      pos += v[i] > 0 ? 1 : 0;
      ++n;
    }
  }
  REQUIRE(n == 100000);
  const double expected = 3.0 * std::sqrt(1.5707963267948966);  // sigma sqrt(pi/2)
  REQUIRE(sum_abs / double(n) == Catch::Approx(expected).epsilon(0.03));
  // Sign balance within four standard errors of one half.
  const double se = 0.5 / std::sqrt(double(n));
  REQUIRE(std::abs(double(pos) / double(n) - 0.5) <= 4 * se);
}

TEST_CASE("all seven distributions are symmetric about zero", "[problem]") {
  for (DistKind kind : kAllDistributions) {
    DistributionSpec spec;
    spec.kind = kind;
    Rng rng(seed_mix({123, static_cast<std::uint64_t>(kind)}));
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double v = spec.sample(rng);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    REQUIRE(std::abs(mean) <= 4.0 * sd / std::sqrt(double(n)));
  }
}

TEST_CASE("support indices are uniform", "[problem]") {
  DistributionSpec nrm;
  std::vector<int> hits(20, 0);
  const int draws = 5000;
  for (int t = 0; t < draws; ++t) {
    const Vector v = sample_sparse_vector(20, 2, nrm, 40000 + std::uint64_t(t));
    for (Index i = 0; i < 20; ++i)
      if (v[i] != 0.0) ++hits[static_cast<std::size_t>(i)];
  }
  for (int h : hits) {
    const double freq = double(h) / double(draws);
    REQUIRE(freq == Catch::Approx(0.1).margin(0.015));
  }
}

TEST_CASE("problem dimensions follow the rounding contract", "[problem]") {
  DistributionSpec nrm;
  const ProblemInstance a = build_problem(400, 0.5414, 0.05, nrm, 3);
  REQUIRE(a.m == 217);
  REQUIRE(a.s == 11);
  const ProblemInstance b = build_problem(400, 0.05, 0.05, nrm, 3);
  REQUIRE(b.m == 20);
  REQUIRE(b.s == 1);
}

TEST_CASE("measurements equal Phi times x and instances are reproducible",
          "[problem]") {
  DistributionSpec lap;
  lap.kind = DistKind::Laplacian;
  const ProblemInstance p = build_problem(60, 0.4, 0.3, lap, 17);
  REQUIRE((p.u - p.Phi * p.x).norm() == 0.0);
  REQUIRE(static_cast<Index>(p.support.size()) == p.s);
  for (Index i : p.support) REQUIRE(std::abs(p.x[i]) > 1e-10);

  const ProblemInstance q = build_problem(60, 0.4, 0.3, lap, 17);
  REQUIRE(p.Phi == q.Phi);
  REQUIRE(p.x == q.x);
  REQUIRE(p.u == q.u);
}

TEST_CASE("suite grid endpoints and validation", "[problem]") {
  SuiteGrid grid;
  REQUIRE(grid.rho_values.size() == 30);
  REQUIRE(grid.delta_values.size() == 16);
  REQUIRE(grid.rho_values.front() == Catch::Approx(0.05));
  REQUIRE(grid.rho_values.back() == 1.0);
  REQUIRE(grid.delta_values.front() == Catch::Approx(0.05));
  REQUIRE(grid.delta_values.back() == 0.5414);
  REQUIRE(std::is_sorted(grid.delta_values.begin(), grid.delta_values.end()));
  grid.validate();

  SuiteGrid bad;
  bad.trials = 0;
  REQUIRE_THROWS_AS(bad.validate(), RecoveryError);
}
