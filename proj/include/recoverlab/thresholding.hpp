#pragma once

#include "recoverlab/numerics.hpp"
#include "recoverlab/solution.hpp"

namespace recoverlab {

enum class ThresholdKind { Hard, Soft };

struct ThresholdFunction {
  ThresholdKind kind = ThresholdKind::Hard;
  double tau = 0.0;

  double operator()(double v) const {
    if (std::abs(v) <= tau) return 0.0;
    if (kind == ThresholdKind::Hard) return v;
    return v > 0 ? v - tau : v + tau;
  }
};

/// Element-wise thresholding.
inline Vector apply_threshold(const Vector& x, const ThresholdFunction& t) {
  if (t.tau < 0) fail("ConfigError", "threshold tau must be nonnegative");
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = t(x[i]);
  return out;
}

/// How AMP picks its per-iteration threshold. The m-th-largest readings
/// follow the published recursion (measured on the previous candidate or on
/// the previous iterate); ResidualScaled is the standard tau = alpha(delta)
/// * ||r||/sqrt(m) schedule with alpha at the state-evolution optimum.
enum class AmpTauMode { CandidateMthLargest, PriorMthLargest, ResidualScaled };

struct ThresholdingConfig {
  int max_iterations = 300;
  double residual_tol = 1e-5;  // relative to ||u||
  double kappa_iht = 0.65;
  double kappa_ist = 0.6;
  double kappa_tst = 0.6;
  /// False-alarm rate schedule for the tuned IHT/IST thresholds:
  /// FAR(delta) = false_alarm_scale * delta.
  double false_alarm_scale = 0.02;
  double numeric_floor = 1e-12;  // CoSaMP/SP magnitude floor
  double divergence_factor = 1e6;
  AmpTauMode amp_tau = AmpTauMode::CandidateMthLargest;
  int tst_alpha = 1;
  int tst_beta = 1;

  void validate() const {
    if (max_iterations < 1 || residual_tol <= 0 || numeric_floor <= 0 ||
        kappa_iht <= 0 || kappa_iht >= 1 || kappa_ist <= 0 || kappa_ist >= 1 ||
        kappa_tst <= 0 || kappa_tst >= 1 || tst_alpha < 1 || tst_beta < 1)
      fail("ConfigError", "invalid thresholding configuration");
  }
};

namespace detail {

/// Keep the k largest-magnitude entries of v (above `floor`), zero the rest.
inline Vector select_top(const Vector& v, Index k, double floor = 0.0) {
  Vector out = Vector::Zero(v.size());
  for (Index i : top_k_indices(v, k, floor)) out[i] = v[i];
  return out;
}

/// Lazy divergence guard. Column-normalized Phi has sigma_max <= sqrt(N), so
/// ||min-norm solution|| >= ||u||/sqrt(N); the exact projector is only
/// consulted once an iterate grows past that cheap bound.
class DivergenceGuard {
 public:
  DivergenceGuard(const ProblemInstance& p, double factor)
      : p_(p), factor_(factor), cheap_floor_(factor * p.u.norm() /
                                             std::sqrt(double(p.N))) {}

  bool diverged(const Vector& x) {
    const double n = x.norm();
    if (n <= cheap_floor_) return false;
    if (!limit_) {
      const Vector mn = row_space_project(p_.Phi, p_.u);
      limit_ = factor_ * mn.norm();
    }
    return n > *limit_;
  }

 private:
  const ProblemInstance& p_;
  double factor_;
  double cheap_floor_;
  std::optional<double> limit_;
};

inline RecoverySolution iterative_threshold(const ProblemInstance& p,
                                            const ThresholdingConfig& cfg,
                                            ThresholdKind kind) {
  cfg.validate();
  const double u_norm = p.u.norm();
  const double kappa = kind == ThresholdKind::Hard ? cfg.kappa_iht : cfg.kappa_ist;
  const double far = std::clamp(cfg.false_alarm_scale * p.delta(), 1e-6, 0.999);
  const double quantile = normal_quantile(1.0 - 0.5 * far);

  Vector x = Vector::Zero(p.N);
  Vector r = p.u;
  Vector best_x = x;
  double best_res = u_norm;
  DivergenceGuard guard(p, cfg.divergence_factor);
  std::vector<double> history;

  for (int k = 0; k < cfg.max_iterations; ++k) {
    if (r.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, x, k, Termination::ResidualTol, std::move(history));
    const Vector corr = p.Phi.transpose() * r;
    const double sigma_hat = median_abs(corr) / 0.6745;
    const Vector candidate = x + kappa * corr;
    x = apply_threshold(candidate, {kind, quantile * sigma_hat});
    r = p.u - p.Phi * x;
    history.push_back(r.norm());
    if (r.norm() < best_res) {
      best_res = r.norm();
      best_x = x;
    }
    if (guard.diverged(x))
      return finalize_solution(p, best_x, k + 1, Termination::Diverged,
                               std::move(history));
  }
  return finalize_solution(p, x, cfg.max_iterations, Termination::IterationCap,
                           std::move(history));
}

/// CoSaMP/SP/TST two-stage body. `first_keep`/`second_keep` are the stage
/// budgets; `candidate_kappa < 0` thresholds the raw correlation (CoSaMP,
/// SP), otherwise the relaxed candidate x + kappa*Phi^T r (TST).
/// `increase_exit` returns the previous iterate when the residual grows.
inline RecoverySolution two_stage(const ProblemInstance& p,
                                  const ThresholdingConfig& cfg, Index first_keep,
                                  Index second_keep, double candidate_kappa,
                                  bool increase_exit, double floor) {
  cfg.validate();
  const double u_norm = p.u.norm();
  Vector x = Vector::Zero(p.N);
  Vector r = p.u;
  std::vector<double> history;

  for (int k = 0; k < cfg.max_iterations; ++k) {
    if (r.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, x, k, Termination::ResidualTol, std::move(history));
    const Vector corr = p.Phi.transpose() * r;
    const Vector stage1 =
        candidate_kappa < 0 ? corr : Vector(x + candidate_kappa * corr);
    const IndexSet J = top_k_indices(stage1, first_keep, floor);
    const IndexSet merged = index_union(nonzero_support(x), J);
    if (merged.empty())
      return finalize_solution(p, x, k, Termination::Converged, std::move(history));

    const Vector pruned =
        select_top(solve_on_support(p.Phi, p.u, merged), second_keep, floor);
    const Vector x_next = solve_on_support(p.Phi, p.u, nonzero_support(pruned));
    const Vector r_next = p.u - p.Phi * x_next;
    if (increase_exit && r_next.norm() > r.norm())
      return finalize_solution(p, x, k + 1, Termination::ResidualIncrease,
                               std::move(history));
    x = x_next;
    r = r_next;
    history.push_back(r.norm());
  }
  return finalize_solution(p, x, cfg.max_iterations, Termination::IterationCap,
                           std::move(history));
}

}  // namespace detail

inline RecoverySolution iht_recover(const ProblemInstance& p,
                                    const ThresholdingConfig& cfg = {}) {
  return detail::iterative_threshold(p, cfg, ThresholdKind::Hard);
}

inline RecoverySolution ist_recover(const ProblemInstance& p,
                                    const ThresholdingConfig& cfg = {}) {
  return detail::iterative_threshold(p, cfg, ThresholdKind::Soft);
}

inline RecoverySolution cosamp_recover(const ProblemInstance& p,
                                       const ThresholdingConfig& cfg = {}) {
  return detail::two_stage(p, cfg, 2 * p.s, p.s, -1.0, true, cfg.numeric_floor);
}

inline RecoverySolution sp_recover(const ProblemInstance& p,
                                   const ThresholdingConfig& cfg = {}) {
  return detail::two_stage(p, cfg, p.s, p.s, -1.0, true, cfg.numeric_floor);
}

/// Recommended-TST sparsity surrogate s = floor((0.044417 d^2 + 0.34142 d +
/// 0.14844) m).
inline Index tst_sparsity_estimate(double delta, Index m) {
  const double rho = 0.044417 * delta * delta + 0.34142 * delta + 0.14844;
  return std::max<Index>(1, static_cast<Index>(std::floor(rho * double(m))));
}

inline RecoverySolution tst_recover(const ProblemInstance& p,
                                    const ThresholdingConfig& cfg = {}) {
  const Index s_est = tst_sparsity_estimate(p.delta(), p.m);
  return detail::two_stage(p, cfg, cfg.tst_alpha * s_est, cfg.tst_beta * s_est,
                           cfg.kappa_tst, false, 0.0);
}

/// State-evolution curve for soft thresholding at parameter alpha; its
/// maximizer over alpha reproduces the l1 phase transition, which is the
/// tuning used by the ResidualScaled AMP schedule.
inline double amp_state_evolution_rho(double delta, double alpha) {
  const double g =
      (1.0 + alpha * alpha) * normal_upper_tail(alpha) - alpha * normal_pdf(alpha);
  return (1.0 - (2.0 / delta) * g) / (1.0 + alpha * alpha - 2.0 * g);
}

inline double amp_optimal_alpha(double delta) {
  double lo = 1e-3, hi = 6.0;
  const double gr = 0.6180339887498949;
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = amp_state_evolution_rho(delta, a);
  double fb = amp_state_evolution_rho(delta, b);
  for (int it = 0; it < 120; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = amp_state_evolution_rho(delta, b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = amp_state_evolution_rho(delta, a);
    }
  }
  return 0.5 * (lo + hi);
}

/// Approximate message passing with soft thresholding and the Onsager
/// residual correction r_k = u - Phi x_k + r_{k-1} * (count/m).
inline RecoverySolution amp_recover(const ProblemInstance& p,
                                    const ThresholdingConfig& cfg = {}) {
  cfg.validate();
  const double u_norm = p.u.norm();
  const double alpha = cfg.amp_tau == AmpTauMode::ResidualScaled
                           ? amp_optimal_alpha(p.delta())
                           : 0.0;

  Vector x = Vector::Zero(p.N);
  Vector x_prev = x;
  Vector r = p.u;
  Vector candidate_prev;
  double tau_prev = 0.0;
  detail::DivergenceGuard guard(p, cfg.divergence_factor);
  std::vector<double> history;

  for (int k = 0; k < cfg.max_iterations; ++k) {
    if (k > 0) {
      double count = 0.0;
      double tau = 0.0;
      switch (cfg.amp_tau) {
        case AmpTauMode::CandidateMthLargest:
          tau = mth_largest_magnitude(candidate_prev, p.m);
          count = double((candidate_prev.cwiseAbs().array() >= tau).count());
          break;
        case AmpTauMode::PriorMthLargest:
          tau = mth_largest_magnitude(x_prev, p.m);
          count = double((candidate_prev.cwiseAbs().array() >= tau).count());
          break;
        case AmpTauMode::ResidualScaled:
          // Survivors of the previous threshold, i.e. ||x_k||_0.
          count = double((candidate_prev.cwiseAbs().array() > tau_prev).count());
          break;
      }
      r = p.u - p.Phi * x + r * (count / double(p.m));
    }
    if (r.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, x, k, Termination::ResidualTol, std::move(history));

    const Vector candidate = x + p.Phi.transpose() * r;
    double tau = 0.0;
    switch (cfg.amp_tau) {
      case AmpTauMode::CandidateMthLargest:
        tau = mth_largest_magnitude(candidate, p.m);
        break;
      case AmpTauMode::PriorMthLargest:
        tau = k == 0 ? mth_largest_magnitude(candidate, p.m)
                     : mth_largest_magnitude(x, p.m);
        break;
      case AmpTauMode::ResidualScaled:
        tau = alpha * r.norm() / std::sqrt(double(p.m));
        break;
    }

    x_prev = x;
    x = apply_threshold(candidate, {ThresholdKind::Soft, tau});
    candidate_prev = candidate;
    tau_prev = tau;
    history.push_back(r.norm());
    if (guard.diverged(x))
      return finalize_solution(p, x_prev, k + 1, Termination::Diverged,
                               std::move(history));
  }
  return finalize_solution(p, x, cfg.max_iterations, Termination::IterationCap,
                           std::move(history));
}

/// Algebraic pursuit with 1-memory: accelerated hard thresholding on an
/// expanded support with the exact line-search step and FISTA momentum.
inline RecoverySolution alps_recover(const ProblemInstance& p,
                                     const ThresholdingConfig& cfg = {}) {
  cfg.validate();
  const double u_norm = p.u.norm();
  const Index s = p.s;

  Vector x = Vector::Zero(p.N);
  Vector tb_prev = Vector::Zero(p.N);
  double t_fista = 1.0;
  Vector best_x = x;
  double best_res = u_norm;
  detail::DivergenceGuard guard(p, cfg.divergence_factor);
  std::vector<double> history;

  for (int k = 0; k < cfg.max_iterations; ++k) {
    const Vector r = p.u - p.Phi * x;
    if (r.norm() <= cfg.residual_tol * u_norm)
      return finalize_solution(p, x, k, Termination::ResidualTol, std::move(history));

    const Vector grad = p.Phi.transpose() * r;
    Vector grad_off = grad;
    for (Index i : nonzero_support(x)) grad_off[i] = 0.0;
    const IndexSet expanded =
        index_union(nonzero_support(x), top_k_indices(grad_off, s));

    Vector grad_restricted = Vector::Zero(p.N);
    for (Index i : expanded) grad_restricted[i] = grad[i];
    const double denom = (p.Phi * grad_restricted).squaredNorm();
    const double kappa = denom > 0 ? grad_restricted.squaredNorm() / denom : 0.0;
    if (kappa == 0.0)
      return finalize_solution(p, x, k, Termination::Converged, std::move(history));

    const Vector b = x + kappa * grad_restricted;
    const Vector tb = detail::select_top(b, s);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_fista * t_fista));
    const double mu = std::min((t_fista - 1.0) / t_next, 1.0);
    x = tb + mu * (tb - tb_prev);
    tb_prev = tb;
    t_fista = t_next;

    const double res = (p.u - p.Phi * x).norm();
    history.push_back(res);
    if (res < best_res) {
      best_res = res;
      best_x = x;
    }
    if (guard.diverged(x))
      return finalize_solution(p, best_x, k + 1, Termination::Diverged,
                               std::move(history));
  }
  return finalize_solution(p, best_x, cfg.max_iterations, Termination::IterationCap,
                           std::move(history));
}

}  // namespace recoverlab
