#pragma once

#include <functional>

#include "recoverlab/numerics.hpp"
#include "recoverlab/solution.hpp"

namespace recoverlab {

struct GreedyConfig {
  double residual_tol = 1e-5;       // relative to ||u||
  double max_support_factor = 2.0;  // stop once |Omega_k| > factor * s

  // PrOMP
  double promp_p = 0.001;
  int promp_l = 2;
  int promp_max_candidates = 10;

  // StOMP false-discovery threshold t * ||r||/sqrt(m)
  double stomp_t = 2.0;

  /// Test hook, called after every augmentation with the current residual
  /// and support.
  std::function<void(const Vector&, const IndexSet&)> on_iterate;

  void validate() const {
    if (residual_tol <= 0 || max_support_factor < 1.0 || promp_p < 0 ||
        promp_p > 1 || promp_l < 1 || promp_max_candidates < 1 || stomp_t <= 0)
      fail("ConfigError", "invalid greedy configuration");
  }
};

namespace detail {

/// Shared state for pursuits that grow a support one batch at a time and
/// keep the residual orthogonal to the selected columns.
struct PursuitState {
  const ProblemInstance& p;
  IncrementalQr qr;
  IndexSet support;
  Vector residual;

  explicit PursuitState(const ProblemInstance& prob)
      : p(prob), qr(prob.m), residual(prob.u) {}

  /// Append one column; false when numerically dependent.
  bool add(Index n) {
    if (!qr.push_column(p.Phi.col(n))) return false;
    support = index_union(support, {n});
    residual = qr.residual(p.u);
    return true;
  }

  Vector solution() const {
    Vector x = Vector::Zero(p.N);
    if (support.empty()) return x;
    // The QR columns were appended in selection order; map coefficients back.
    const Vector c = qr.solve(p.u);
    // support is kept sorted, but the QR order is the insertion order, so we
    // track it separately.
    for (std::size_t j = 0; j < order.size(); ++j) x[order[j]] = c[static_cast<Index>(j)];
    return x;
  }

  IndexSet order;  // insertion order of accepted columns
};

inline bool push(PursuitState& st, Index n) {
  if (!st.add(n)) return false;
  st.order.push_back(n);
  return true;
}

inline Index argmax_correlation(const Vector& corr) {
  Index best = 0;
  double best_mag = -1.0;
  for (Index i = 0; i < corr.size(); ++i) {
    const double m = std::abs(corr[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Orthogonal Matching Pursuit: one index per iteration by largest residual
/// correlation, residual kept orthogonal to the selected span.
inline RecoverySolution omp_recover(const ProblemInstance& p,
                                    const GreedyConfig& cfg = {}) {
  cfg.validate();
  detail::PursuitState st(p);
  const double u_norm = p.u.norm();
  const double budget = cfg.max_support_factor * double(p.s);
  std::vector<double> history;
  int iters = 0;

  while (true) {
    if (st.residual.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, st.solution(), iters, Termination::ResidualTol,
                               std::move(history));
    if (double(st.support.size()) > budget)
      return finalize_solution(p, st.solution(), iters, Termination::SupportBudget,
                               std::move(history));
    const Vector corr = p.Phi.transpose() * st.residual;
    const Index pick = detail::argmax_correlation(corr);
    if (!detail::push(st, pick))
      return finalize_solution(p, st.solution(), iters, Termination::Converged,
                               std::move(history));
    ++iters;
    history.push_back(st.residual.norm());
    if (cfg.on_iterate) cfg.on_iterate(st.residual, st.support);
  }
}

/// Probabilistic OMP: up to max_candidates randomized OMP passes; at each
/// step the next index is drawn with mass (1-p)/l on the top-l correlations
/// and p/(N-k-l) on the remaining nonzero ones. The first candidate follows
/// the pure argmax path, so PrOMP can never return a worse residual than the
/// OMP trajectory it contains.
inline RecoverySolution promp_recover(const ProblemInstance& p,
                                      const GreedyConfig& cfg,
                                      std::uint64_t seed) {
  cfg.validate();
  const double u_norm = p.u.norm();
  const double budget = cfg.max_support_factor * double(p.s);

  std::optional<RecoverySolution> best;
  for (int cand = 0; cand < cfg.promp_max_candidates; ++cand) {
    Rng rng(seed_mix({seed, static_cast<std::uint64_t>(cand)}));
    detail::PursuitState st(p);
    int iters = 0;
    Termination term = Termination::Converged;

    while (true) {
      if (st.residual.norm() <= cfg.residual_tol * u_norm) {
        term = Termination::ResidualTol;
        break;
      }
      if (double(st.support.size()) > budget) {
        term = Termination::SupportBudget;
        break;
      }
      const Vector corr = p.Phi.transpose() * st.residual;

      Index pick;
      if (cand == 0) {
        pick = detail::argmax_correlation(corr);
      } else {
        // Rank nonzero correlations (magnitude desc, index asc).
        std::vector<Index> nz;
        for (Index i = 0; i < corr.size(); ++i)
          if (corr[i] != 0.0) nz.push_back(i);
        if (nz.empty()) break;  // no direction left
        std::sort(nz.begin(), nz.end(), [&](Index a, Index b) {
          const double fa = std::abs(corr[a]), fb = std::abs(corr[b]);
          return fa != fb ? fa > fb : a < b;
        });
        const std::size_t l =
            std::min<std::size_t>(static_cast<std::size_t>(cfg.promp_l), nz.size());
        const double k = double(st.support.size());
        const double denom = double(p.N) - k - double(l);
        std::vector<double> w(nz.size());
        double total = 0.0;
        for (std::size_t i = 0; i < nz.size(); ++i) {
          w[i] = (i < l) ? (1.0 - cfg.promp_p) / double(l)
                         : (denom > 0 ? cfg.promp_p / denom : 0.0);
          total += w[i];
        }
        if (total <= 0.0) break;
        double ticket = rng.uniform01() * total;
        std::size_t chosen = nz.size() - 1;
        for (std::size_t i = 0; i < nz.size(); ++i) {
          ticket -= w[i];
          if (ticket <= 0.0) {
            chosen = i;
            break;
          }
        }
        pick = nz[chosen];
      }

      if (!detail::push(st, pick)) break;
      ++iters;
      if (cfg.on_iterate) cfg.on_iterate(st.residual, st.support);
    }

    RecoverySolution sol =
        finalize_solution(p, st.solution(), iters, term);
    if (!best || sol.residual_norm < best->residual_norm) best = std::move(sol);
    if (best->residual_norm <= cfg.residual_tol * u_norm) break;
  }
  return *best;
}

/// Regularized OMP: per stage, peel comparability classes (all remaining
/// correlations within a factor 2 of the current maximum, at most s per
/// class) and add the class with the largest correlation energy.
inline RecoverySolution romp_recover(const ProblemInstance& p,
                                     const GreedyConfig& cfg = {}) {
  cfg.validate();
  detail::PursuitState st(p);
  const double u_norm = p.u.norm();
  const double budget = cfg.max_support_factor * double(p.s);
  std::vector<double> history;
  int stages = 0;

  while (true) {
    if (st.residual.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, st.solution(), stages, Termination::ResidualTol,
                               std::move(history));
    if (double(st.support.size()) > budget)
      return finalize_solution(p, st.solution(), stages, Termination::SupportBudget,
                               std::move(history));
    const Vector corr = p.Phi.transpose() * st.residual;

    // Candidates: nonzero correlations off the current support,
    // magnitude-descending (ties toward the lower index).
    std::vector<Index> remaining;
    for (Index i = 0; i < corr.size(); ++i)
      if (corr[i] != 0.0 &&
          !std::binary_search(st.support.begin(), st.support.end(), i))
        remaining.push_back(i);
    if (remaining.empty())
      return finalize_solution(p, st.solution(), stages, Termination::Converged,
                               std::move(history));
    std::sort(remaining.begin(), remaining.end(), [&](Index a, Index b) {
      const double fa = std::abs(corr[a]), fb = std::abs(corr[b]);
      return fa != fb ? fa > fb : a < b;
    });

    std::vector<Index> best_class;
    double best_energy = -1.0;
    std::size_t pos = 0;
    while (pos < remaining.size()) {
      const double top = std::abs(corr[remaining[pos]]);
      std::size_t end = pos;
      while (end < remaining.size() && std::abs(corr[remaining[end]]) >= 0.5 * top)
        ++end;
      std::size_t take = std::min<std::size_t>(end - pos,
                                               static_cast<std::size_t>(p.s));
      double energy = 0.0;
      for (std::size_t i = pos; i < pos + take; ++i)
        energy += corr[remaining[i]] * corr[remaining[i]];
      if (energy > best_energy) {
        best_energy = energy;
        best_class.assign(remaining.begin() + static_cast<std::ptrdiff_t>(pos),
                          remaining.begin() + static_cast<std::ptrdiff_t>(pos + take));
      }
      pos += take;
    }

    bool grew = false;
    for (Index n : best_class) grew = detail::push(st, n) || grew;
    if (!grew)
      return finalize_solution(p, st.solution(), stages, Termination::Converged,
                               std::move(history));
    ++stages;
    history.push_back(st.residual.norm());
    if (cfg.on_iterate) cfg.on_iterate(st.residual, st.support);
  }
}

/// Stagewise OMP: per stage select every index whose correlation exceeds
/// t * ||r||/sqrt(m); at most 2s stages.
inline RecoverySolution stomp_recover(const ProblemInstance& p,
                                      const GreedyConfig& cfg = {}) {
  cfg.validate();
  detail::PursuitState st(p);
  const double u_norm = p.u.norm();
  const int max_stages = static_cast<int>(2 * p.s);
  std::vector<double> history;
  int stages = 0;

  while (stages < max_stages) {
    if (st.residual.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, st.solution(), stages, Termination::ResidualTol,
                               std::move(history));
    const Vector corr = p.Phi.transpose() * st.residual;
    const double sigma = st.residual.norm() / std::sqrt(double(p.m));
    const double threshold = cfg.stomp_t * sigma;

    std::vector<Index> picks;
    for (Index i = 0; i < corr.size(); ++i)
      if (std::abs(corr[i]) > threshold &&
          !std::binary_search(st.support.begin(), st.support.end(), i))
        picks.push_back(i);
    if (picks.empty())
      return finalize_solution(p, st.solution(), stages, Termination::Converged,
                               std::move(history));
    std::sort(picks.begin(), picks.end(), [&](Index a, Index b) {
      const double fa = std::abs(corr[a]), fb = std::abs(corr[b]);
      return fa != fb ? fa > fb : a < b;
    });

    bool grew = false;
    for (Index n : picks) grew = detail::push(st, n) || grew;
    if (!grew)
      return finalize_solution(p, st.solution(), stages, Termination::Converged,
                               std::move(history));
    ++stages;
    history.push_back(st.residual.norm());
    if (cfg.on_iterate) cfg.on_iterate(st.residual, st.support);
  }
  return finalize_solution(p, st.solution(), stages, Termination::IterationCap,
                           std::move(history));
}

}  // namespace recoverlab
