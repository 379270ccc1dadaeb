#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "recoverlab/greedy.hpp"

using namespace recoverlab;

namespace {

ProblemInstance tiny_instance(Index N, Index m, Index s, std::uint64_t seed,
                              DistKind kind = DistKind::Normal) {
  DistributionSpec spec;
  spec.kind = kind;
  Matrix phi = sample_sensing_matrix(m, N, seed_mix({seed, seed_tag::phi}));
  Vector x = sample_sparse_vector(N, s, spec, seed_mix({seed, seed_tag::sparse_vector}));
  return make_instance(std::move(phi), std::move(x));
}

ProblemInstance identity_instance(Vector x) {
  return make_instance(Matrix::Identity(x.size(), x.size()), std::move(x));
}

}  // namespace

TEST_CASE("omp returns the zero solution for zero measurements", "[greedy]") {
  ProblemInstance p = identity_instance([] {
    Vector x = Vector::Zero(4);
    x[1] = 3.0;
    return x;
  }());
  p.x.setZero();
  p.u.setZero();
  const RecoverySolution sol = omp_recover(p);
  REQUIRE(sol.iterations == 0);
  REQUIRE(sol.support.empty());
  REQUIRE(sol.x_hat.norm() == 0.0);
  REQUIRE(sol.termination == Termination::ResidualTol);
}

TEST_CASE("omp recovers a one-sparse identity problem in one step", "[greedy]") {
  Vector x = Vector::Zero(4);
  x[1] = 3.0;
  const ProblemInstance p = identity_instance(x);
  const RecoverySolution sol = omp_recover(p);
  REQUIRE(sol.iterations == 1);
  REQUIRE(sol.support == IndexSet{1});
  REQUIRE((sol.x_hat - p.x).norm() < 1e-12);
}

TEST_CASE("omp matches the exhaustive oracle on a small instance", "[greedy]") {
  const ProblemInstance p = tiny_instance(8, 6, 2, 1001);
  const RecoverySolution sol = omp_recover(p);
  REQUIRE((sol.x_hat - p.x).norm() < 1e-6);
  const auto oracle = oracles::brute_force_sparsest(p.Phi, p.u, p.s);
  REQUIRE(sol.support == oracle.support);
  REQUIRE(sol.residual_norm <= oracle.residual + 1e-8);
}

TEST_CASE("omp residuals stay orthogonal to the selected atoms", "[greedy]") {
  const ProblemInstance p = tiny_instance(40, 20, 4, 55);
  GreedyConfig cfg;
  double worst = 0.0;
  cfg.on_iterate = [&](const Vector& r, const IndexSet& support) {
    for (Index i : support)
      worst = std::max(worst, std::abs(p.Phi.col(i).dot(r)));
  };
  omp_recover(p, cfg);
  REQUIRE(worst <= 1e-9);
}

TEST_CASE("omp residual history is non-increasing", "[greedy]") {
  const ProblemInstance p = tiny_instance(30, 12, 6, 77);
  const RecoverySolution sol = omp_recover(p);
  for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
    REQUIRE(sol.residual_history[i] <=
            sol.residual_history[i - 1] + 1e-12);
}

TEST_CASE("omp stops on the support budget for hopeless problems", "[greedy]") {
  // s too large relative to m: the tolerance is unreachable before 2s picks.
  const ProblemInstance p = tiny_instance(50, 10, 8, 13);
  const RecoverySolution sol = omp_recover(p);
  if (sol.termination == Termination::SupportBudget)
    REQUIRE(static_cast<double>(sol.support.size()) <= 2.0 * double(p.s) + 1);
  REQUIRE(sol.x_hat.size() == p.N);
}

TEST_CASE("omp outcomes agree with the oracle across 50 seeded instances",
          "[greedy]") {
  int agreements = 0;
  for (int t = 0; t < 50; ++t) {
    const Index s = 1 + (t % 2);
    const Index N = 6 + (t % 5);
    const Index m = std::min<Index>(N - 1, 3 * s + (t % 3));
    const ProblemInstance p = tiny_instance(N, m, s, 3000 + std::uint64_t(t),
                                            kAllDistributions[t % 7]);
    const RecoverySolution sol = omp_recover(p);
    const auto oracle = oracles::brute_force_sparsest(p.Phi, p.u, p.s);
    if (sol.support == oracle.support) {
      ++agreements;
      REQUIRE(sol.residual_norm <= oracle.residual + 1e-8);
    }
  }
  REQUIRE(agreements >= 45);  // m >= 3s keeps these instances easy
}

TEST_CASE("promp with p=0 and l=1 reduces to omp", "[greedy]") {
  const ProblemInstance p = tiny_instance(12, 8, 3, 19);
  GreedyConfig cfg;
  cfg.promp_p = 0.0;
  cfg.promp_l = 1;
  const RecoverySolution a = promp_recover(p, cfg, 5);
  const RecoverySolution b = omp_recover(p, cfg);
  REQUIRE(a.support == b.support);
  REQUIRE(std::abs(a.residual_norm - b.residual_norm) < 1e-12);
}

TEST_CASE("promp never does worse than omp and is seed-deterministic",
          "[greedy]") {
  const ProblemInstance p = tiny_instance(8, 6, 2, 2020);
  const RecoverySolution omp_sol = omp_recover(p);
  const RecoverySolution a = promp_recover(p, {}, 7);
  const RecoverySolution b = promp_recover(p, {}, 7);
  REQUIRE(a.residual_norm <= omp_sol.residual_norm + 1e-12);
  REQUIRE(a.support == b.support);
  REQUIRE(a.residual_norm == b.residual_norm);
  REQUIRE(promp_recover(p, {}, 7).x_hat == a.x_hat);
}

TEST_CASE("promp on zero measurements returns zero", "[greedy]") {
  ProblemInstance p = tiny_instance(8, 6, 2, 2021);
  p.x.setZero();
  p.u.setZero();
  const RecoverySolution sol = promp_recover(p, {}, 3);
  REQUIRE(sol.x_hat.norm() == 0.0);
  REQUIRE(sol.termination == Termination::ResidualTol);
}

TEST_CASE("romp comparability classes pick the highest-energy class",
          "[greedy]") {
  // Correlations (1.0, 0.6, 0.45, 0.2): classes {0,1}, {2}, {3} with
  // energies 1.36, 0.2025, 0.04, so the first stage adds {0,1}.
  Vector u(4);
  u << 1.0, 0.6, 0.45, 0.2;
  ProblemInstance p = identity_instance(u);
  p.s = 2;  // classes are capped at s entries
  GreedyConfig cfg;
  std::vector<IndexSet> snapshots;
  cfg.on_iterate = [&](const Vector&, const IndexSet& support) {
    snapshots.push_back(support);
  };
  romp_recover(p, cfg);
  REQUIRE_FALSE(snapshots.empty());
  REQUIRE(snapshots.front() == IndexSet{0, 1});
}

TEST_CASE("romp recovers identity problems in one stage", "[greedy]") {
  Vector x = Vector::Zero(6);
  x[2] = -1.5;
  x[4] = 2.0;
  const ProblemInstance p = identity_instance(x);
  const RecoverySolution sol = romp_recover(p);
  REQUIRE(sol.iterations == 1);
  REQUIRE(sol.support == IndexSet{2, 4});
  REQUIRE((sol.x_hat - p.x).norm() < 1e-12);
}

TEST_CASE("romp on zero measurements returns zero", "[greedy]") {
  ProblemInstance p = tiny_instance(8, 6, 2, 31);
  p.x.setZero();
  p.u.setZero();
  REQUIRE(romp_recover(p).x_hat.norm() == 0.0);
}

TEST_CASE("stomp terminates when nothing clears the threshold", "[greedy]") {
  // Correlations (0.9, 0.3, 0.1): sigma = ||r||/sqrt(3), threshold
  // 2*sigma = 1.1016 exceeds every correlation, so the first stage is empty.
  Vector u(3);
  u << 0.9, 0.3, 0.1;
  ProblemInstance p = identity_instance(u);
  const RecoverySolution sol = stomp_recover(p);
  REQUIRE(sol.termination == Termination::Converged);
  REQUIRE(sol.iterations == 0);
  REQUIRE(sol.x_hat.norm() == 0.0);
}

TEST_CASE("stomp boundary case: threshold exactly at the correlation",
          "[greedy]") {
  // ||r|| = 2, m = 4: threshold 2 equals the top correlation (strict >).
  Vector x = Vector::Zero(4);
  x[0] = 2.0;
  const ProblemInstance p = identity_instance(x);
  const RecoverySolution sol = stomp_recover(p);
  REQUIRE(sol.termination == Termination::Converged);
  REQUIRE(sol.support.empty());
}

TEST_CASE("stomp clears an easy identity spike", "[greedy]") {
  // ||r|| = 3, m = 16: threshold 2*3/4 = 1.5 < 3 selects the spike.
  Vector x = Vector::Zero(16);
  x[0] = 3.0;
  const ProblemInstance p = identity_instance(x);
  const RecoverySolution sol = stomp_recover(p);
  REQUIRE(sol.termination == Termination::ResidualTol);
  REQUIRE(sol.support == IndexSet{0});
  REQUIRE((sol.x_hat - p.x).norm() < 1e-12);
}

TEST_CASE("stomp on zero measurements returns zero", "[greedy]") {
  ProblemInstance p = tiny_instance(8, 6, 2, 37);
  p.x.setZero();
  p.u.setZero();
  const RecoverySolution sol = stomp_recover(p);
  REQUIRE(sol.x_hat.norm() == 0.0);
  REQUIRE(sol.termination == Termination::ResidualTol);
}

TEST_CASE("batch pursuits keep non-increasing residual histories", "[greedy]") {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    const ProblemInstance p = tiny_instance(40, 16, 5, seed);
    for (const RecoverySolution& sol :
         {romp_recover(p), stomp_recover(p)}) {
      for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
        REQUIRE(sol.residual_history[i] <=
                sol.residual_history[i - 1] + 1e-12);
    }
  }
}
