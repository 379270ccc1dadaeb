#pragma once

#include <functional>

#include "recoverlab/numerics.hpp"
#include "recoverlab/solution.hpp"

namespace recoverlab {

struct LpSolverConfig {
  double duality_gap_tol = 1e-9;
  int max_ipm_iterations = 100;
  double step_fraction = 0.99;

  void validate() const {
    if (duality_gap_tol <= 0 || max_ipm_iterations < 1 || step_fraction <= 0 ||
        step_fraction >= 1)
      fail("ConfigError", "invalid LP solver configuration");
  }
};

struct Sl0Config {
  double sigma_decay = 0.95;
  double sigma_min = 4e-5;
  int inner_iterations = 3;
  double step_scale = 2.0;

  /// Test hook: relative feasibility defect after each reprojection.
  std::function<void(double)> on_projection_defect;

  void validate() const {
    if (sigma_decay <= 0 || sigma_decay >= 1 || sigma_min <= 0 ||
        inner_iterations < 1 || step_scale <= 0)
      fail("ConfigError", "invalid SL0 configuration");
  }
};

struct BpResult {
  Vector x;     // primal solution, length N
  Vector dual;  // dual vector nu with ||Phi^T nu||_inf <= 1 at optimality
  int iterations = 0;
  bool converged = false;
};

// ---------------------------------------------------------------------------
// Equality-constrained l1 minimization as a linear program on the split
// x = xp - xn:   min 1^T (xp; xn)  s.t.  [Phi | -Phi] (xp; xn) = u,  (xp; xn) >= 0
// solved with a Mehrotra predictor-corrector primal-dual interior-point
// method. The constraint matrix is never materialized; the normal equations
// reduce to the m x m system  Phi diag(w_p + w_n) Phi^T  with w = z / s.
// ---------------------------------------------------------------------------
inline BpResult bp_solve(const Matrix& Phi, const Vector& u,
                         const LpSolverConfig& cfg = {}) {
  cfg.validate();
  const Index N = Phi.cols();
  const Index m = Phi.rows();
  if (u.size() != m) fail("DimensionMismatch", "bp_solve: rhs length != rows");
  const double n2 = double(2 * N);

  const auto apply_a = [&](const Vector& zp, const Vector& zn) -> Vector {
    return Phi * (zp - zn);
  };

  Matrix gram = Matrix::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(Phi);
  Eigen::LLT<Matrix> gram_llt(Matrix(gram.selfadjointView<Eigen::Lower>()));
  if (gram_llt.info() != Eigen::Success)
    fail("RankDeficient", "bp_solve: Phi Phi^T not positive definite");

  // Mehrotra starting point. A c = 0 for this LP, so the dual part is 0 and
  // the slack estimate is exactly c = 1.
  Vector w0 = gram_llt.solve(u) * 0.5;
  Vector zp = Phi.transpose() * w0;
  Vector zn = -zp;
  {
    const double dx = std::max(-1.5 * std::min(zp.minCoeff(), zn.minCoeff()), 0.0);
    zp.array() += dx;
    zn.array() += dx;
    const double dots = zp.sum() + zn.sum();  // z^T s with s = 1
    const double shift = 0.5 * dots / n2;
    zp.array() += shift;
    zn.array() += shift;
  }
  Vector sp = Vector::Ones(N), sn = Vector::Ones(N);
  {
    const double dots = zp.dot(sp) + zn.dot(sn);
    const double shift = 0.5 * dots / (zp.sum() + zn.sum());
    sp.array() += shift;
    sn.array() += shift;
  }
  Vector y = Vector::Zero(m);

  const double feas_tol = 1e-10;
  const double u_scale = 1.0 + u.norm();
  BpResult result;

  const auto max_step = [](const Vector& v, const Vector& dv) {
    double a = 1.0;
    for (Index i = 0; i < v.size(); ++i)
      if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
    return a;
  };

  for (int iter = 0; iter < cfg.max_ipm_iterations; ++iter) {
    const Vector rb = apply_a(zp, zn) - u;
    const Vector aty = Phi.transpose() * y;
    const Vector rcp = aty + sp - Vector::Ones(N);
    const Vector rcn = -aty + sn - Vector::Ones(N);
    const double mu = (zp.dot(sp) + zn.dot(sn)) / n2;

    const double primal_obj = zp.sum() + zn.sum();
    const double dual_obj = u.dot(y);
    const double gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
    const double rb_rel = rb.norm() / u_scale;
    const double rc_rel = std::sqrt(rcp.squaredNorm() + rcn.squaredNorm()) /
                          std::sqrt(n2);
    if (gap <= cfg.duality_gap_tol && rb_rel <= feas_tol && rc_rel <= feas_tol) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
    result.iterations = iter + 1;

    const Vector wp = zp.cwiseQuotient(sp);
    const Vector wn = zn.cwiseQuotient(sn);
    Matrix M = Matrix::Zero(m, m);
    M.selfadjointView<Eigen::Lower>().rankUpdate(
        Phi * (wp + wn).cwiseSqrt().asDiagonal());
    Eigen::LLT<Matrix> llt(Matrix(M.selfadjointView<Eigen::Lower>()));
    if (llt.info() != Eigen::Success) {
      M.diagonal().array() += 1e-12 * M.trace() / double(m) + 1e-300;
      llt.compute(Matrix(M.selfadjointView<Eigen::Lower>()));
      if (llt.info() != Eigen::Success) break;  // stalled
    }

    // Affine scaling (predictor) direction: M dy = u - A(W rc).
    const Vector dy_aff =
        llt.solve(u - apply_a(wp.cwiseProduct(rcp), wn.cwiseProduct(rcn)));
    const Vector aty_aff = Phi.transpose() * dy_aff;
    const Vector dsp_aff = -rcp - aty_aff;
    const Vector dsn_aff = -rcn + aty_aff;
    const Vector dzp_aff = -zp - wp.cwiseProduct(dsp_aff);
    const Vector dzn_aff = -zn - wn.cwiseProduct(dsn_aff);

    const double ap_aff =
        std::min(max_step(zp, dzp_aff), max_step(zn, dzn_aff));
    const double ad_aff =
        std::min(max_step(sp, dsp_aff), max_step(sn, dsn_aff));
    const double mu_aff = ((zp + ap_aff * dzp_aff).dot(sp + ad_aff * dsp_aff) +
                           (zn + ap_aff * dzn_aff).dot(sn + ad_aff * dsn_aff)) /
                          n2;
    const double sigma =
        mu > 0 ? std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0) : 0.0;

    // Corrector: complementarity target sigma*mu, second-order terms folded in.
    const Vector vp =
        zp.cwiseProduct(sp) + dzp_aff.cwiseProduct(dsp_aff) -
        Vector::Constant(N, sigma * mu);
    const Vector vn =
        zn.cwiseProduct(sn) + dzn_aff.cwiseProduct(dsn_aff) -
        Vector::Constant(N, sigma * mu);

    const Vector dy = llt.solve(
        -rb + apply_a(vp.cwiseQuotient(sp), vn.cwiseQuotient(sn)) -
        apply_a(wp.cwiseProduct(rcp), wn.cwiseProduct(rcn)));
    const Vector aty_d = Phi.transpose() * dy;
    const Vector dsp = -rcp - aty_d;
    const Vector dsn = -rcn + aty_d;
    const Vector dzp = -vp.cwiseQuotient(sp) - wp.cwiseProduct(dsp);
    const Vector dzn = -vn.cwiseQuotient(sn) - wn.cwiseProduct(dsn);

    const double ap = cfg.step_fraction * std::min(max_step(zp, dzp), max_step(zn, dzn));
    const double ad = cfg.step_fraction * std::min(max_step(sp, dsp), max_step(sn, dsn));
    zp += ap * dzp;
    zn += ap * dzn;
    y += ad * dy;
    sp += ad * dsp;
    sn += ad * dsn;
  }

  Vector x = zp - zn;
  // Pull the solution exactly onto {x : Phi x = u}; the correction is of the
  // order of the converged primal infeasibility.
  x += Phi.transpose() * gram_llt.solve(u - Phi * x);
  result.x = std::move(x);
  result.dual = y;
  return result;
}

/// Basis pursuit: min ||x||_1 subject to Phi x = u.
inline RecoverySolution bp_recover(const ProblemInstance& p,
                                   const LpSolverConfig& cfg = {}) {
  if (p.u.norm() == 0.0)
    return finalize_solution(p, Vector::Zero(p.N), 0, Termination::Converged);
  BpResult res = bp_solve(p.Phi, p.u, cfg);
  return finalize_solution(
      p, std::move(res.x), res.iterations,
      res.converged ? Termination::Converged : Termination::IterationCap);
}

/// Iteratively reweighted l1: up to four weighted BP solves with
/// w_n = 1/(|x_n| + 0.1), stopping early at a reweighting fixed point.
inline RecoverySolution irl1_recover(const ProblemInstance& p,
                                     const LpSolverConfig& cfg = {},
                                     std::vector<Vector>* outer_iterates = nullptr,
                                     int max_outer = 4) {
  if (p.u.norm() == 0.0)
    return finalize_solution(p, Vector::Zero(p.N), 1, Termination::Converged);
  Vector weights = Vector::Ones(p.N);
  Vector x = Vector::Zero(p.N);
  bool all_converged = true;
  int outer = 0;

  for (int k = 0; k < max_outer; ++k) {
    const Matrix scaled = p.Phi * weights.cwiseInverse().asDiagonal();
    BpResult res = bp_solve(scaled, p.u, cfg);
    all_converged = all_converged && res.converged;
    const Vector x_next = res.x.cwiseQuotient(weights);
    ++outer;
    if (outer_iterates) outer_iterates->push_back(x_next);
    const bool fixed_point =
        k > 0 && (x_next - x).lpNorm<Eigen::Infinity>() <=
                     1e-12 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    x = x_next;
    if (fixed_point) break;
    weights = (x.cwiseAbs().array() + 0.1).inverse().matrix();
  }
  return finalize_solution(p, std::move(x), outer,
                           all_converged ? Termination::Converged
                                         : Termination::IterationCap);
}

/// Gradient projection for sparse reconstruction ("basic" variant): the
/// Lagrangian l1 problem with lambda = 0.005 ||Phi^T u||_inf, solved on the
/// split z = (pos; neg) >= 0 with steepest-descent steps and an Armijo
/// backtracking line search along the projected path.
inline RecoverySolution gpsr_recover(const ProblemInstance& p,
                                     std::vector<double>* objective_history = nullptr) {
  const Vector phitu = p.Phi.transpose() * p.u;
  const double lambda = 0.005 * phitu.lpNorm<Eigen::Infinity>();
  if (lambda == 0.0)
    return finalize_solution(p, Vector::Zero(p.N), 0, Termination::Converged);

  const int max_iterations = 300;
  const double mu_armijo = 0.1;
  Vector pos = Vector::Zero(p.N), neg = Vector::Zero(p.N);
  Vector r = p.u;  // u - Phi(pos - neg)
  double obj = 0.5 * r.squaredNorm();
  if (objective_history) objective_history->push_back(obj);

  const auto objective = [&](const Vector& zp, const Vector& zn, Vector& r_out) {
    r_out = p.u - p.Phi * (zp - zn);
    return 0.5 * r_out.squaredNorm() + lambda * (zp.sum() + zn.sum());
  };

  int iters = 0;
  Termination term = Termination::IterationCap;
  for (int k = 0; k < max_iterations; ++k) {
    const Vector phitr = p.Phi.transpose() * r;
    const Vector gp = Vector::Constant(p.N, lambda) - phitr;
    const Vector gn = Vector::Constant(p.N, lambda) + phitr;

    // Projected steepest-descent direction for the initial step length.
    Vector dp = Vector::Zero(p.N), dn = Vector::Zero(p.N);
    for (Index i = 0; i < p.N; ++i) {
      if (pos[i] > 0 || gp[i] < 0) dp[i] = gp[i];
      if (neg[i] > 0 || gn[i] < 0) dn[i] = gn[i];
    }
    const double dd = dp.squaredNorm() + dn.squaredNorm();
    if (dd == 0.0) {
      term = Termination::Converged;
      break;
    }
    const double curvature = (p.Phi * (dp - dn)).squaredNorm();
    double alpha = curvature > 0 ? dd / curvature : 1.0;

    bool accepted = false;
    Vector zp_new, zn_new, r_new;
    double obj_new = obj;
    for (int bt = 0; bt < 60; ++bt) {
      zp_new = (pos - alpha * gp).cwiseMax(0.0);
      zn_new = (neg - alpha * gn).cwiseMax(0.0);
      obj_new = objective(zp_new, zn_new, r_new);
      const double decrease = gp.dot(pos - zp_new) + gn.dot(neg - zn_new);
      if (obj_new <= obj - mu_armijo * decrease) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      term = Termination::Converged;
      break;
    }
    pos = std::move(zp_new);
    neg = std::move(zn_new);
    r = std::move(r_new);
    ++iters;
    if (objective_history) objective_history->push_back(obj_new);
    const bool settled = std::abs(obj - obj_new) <= 1e-8 * std::max(obj, 1e-300);
    obj = obj_new;
    if (settled) {
      term = Termination::Converged;
      break;
    }
  }
  return finalize_solution(p, pos - neg, iters, term);
}

/// Smoothed-l0 minimization: graduated optimization over a decreasing sigma
/// ladder, gradient steps on the Gaussian sparsity surrogate followed by
/// reprojection onto {x : Phi x = u}.
inline RecoverySolution sl0_recover(const ProblemInstance& p,
                                    const Sl0Config& cfg = {}) {
  cfg.validate();
  RowSpaceProjector projector(p.Phi);
  const Vector x_min_norm = projector.min_norm_solution(p.u);
  const double sigma0 = 2.0 * x_min_norm.lpNorm<Eigen::Infinity>();
  if (sigma0 == 0.0)
    return finalize_solution(p, Vector::Zero(p.N), 0, Termination::Converged);

  const int ladder =
      sigma0 <= cfg.sigma_min
          ? 1
          : static_cast<int>(std::ceil(std::log(cfg.sigma_min / sigma0) /
                                       std::log(cfg.sigma_decay))) +
                1;

  Vector x = x_min_norm;
  double sigma = sigma0;
  int steps = 0;
  for (int j = 0; j < ladder; ++j) {
    const double two_sigma2 = 2.0 * sigma * sigma;
    for (int i = 0; i < cfg.inner_iterations; ++i) {
      const Vector delta =
          x.array() * (-x.array().square() / two_sigma2).exp();
      x -= cfg.step_scale * delta;
      x = projector.reproject(x, p.u);
      ++steps;
      if (cfg.on_projection_defect) {
        const double scale = std::max(p.u.norm(), 1e-300);
        cfg.on_projection_defect((p.Phi * x - p.u).norm() / scale);
      }
    }
    sigma *= cfg.sigma_decay;
  }
  return finalize_solution(p, std::move(x), steps, Termination::Converged);
}

}  // namespace recoverlab
