#pragma once

#include <optional>
#include <string>

#include "recoverlab/numerics.hpp"
#include "recoverlab/problem.hpp"

namespace recoverlab {

/// Hard threshold applied to debiased coefficients; also the definition of
/// "nonzero" for the support-equality criterion.
inline constexpr double kDebiasFloor = 1e-10;

enum class CriterionKind { RelativeL2, SupportEquality };

inline std::string criterion_name(CriterionKind k) {
  return k == CriterionKind::RelativeL2 ? "l2" : "support";
}

struct RecoveryCriterion {
  CriterionKind kind = CriterionKind::RelativeL2;
  double epsilon_x = 1e-2;

  void validate() const {
    if (epsilon_x <= 0) fail("ConfigError", "epsilon_x must be positive");
  }
};

/// Re-estimate coefficients by least squares on the largest full-rank
/// support: order entries of x_hat by magnitude, keep the longest prefix
/// (capped at m) whose columns stay independent, refit against u, then hard
/// threshold at 1e-10.
inline Vector debias(const Vector& x_hat, const Matrix& Phi, const Vector& u) {
  Vector out = Vector::Zero(x_hat.size());
  if (x_hat.size() != Phi.cols())
    fail("DimensionMismatch", "debias: solution length != columns");

  std::vector<Index> order;
  for (Index i = 0; i < x_hat.size(); ++i)
    if (x_hat[i] != 0.0) order.push_back(i);
  if (order.empty()) return out;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double fa = std::abs(x_hat[a]), fb = std::abs(x_hat[b]);
    return fa != fb ? fa > fb : a < b;
  });

  IncrementalQr qr(Phi.rows());
  IndexSet kept;
  for (Index i : order) {
    if (static_cast<Index>(kept.size()) == Phi.rows()) break;
    if (!qr.push_column(Phi.col(i))) break;  // largest full-rank prefix
    kept.push_back(i);
  }
  const Vector c = qr.solve(u);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const double v = c[static_cast<Index>(j)];
    if (std::abs(v) > kDebiasFloor) out[kept[j]] = v;
  }
  return out;
}

/// (R_l2): relative l2 error within epsilon_x.
inline bool check_l2(const Vector& x, const Vector& x_hat,
                     const RecoveryCriterion& c = {}) {
  c.validate();
  const double xn = x.norm();
  if (xn == 0.0) fail("ZeroTruth", "check_l2: true vector is zero");
  return (x - x_hat).norm() / xn <= c.epsilon_x;
}

/// (R_S): exact support equality.
inline bool check_support(const Vector& x, const Vector& x_hat) {
  if (x.size() != x_hat.size())
    fail("DimensionMismatch", "check_support: length mismatch");
  for (Index i = 0; i < x.size(); ++i)
    if ((x[i] != 0.0) != (x_hat[i] != 0.0)) return false;
  return true;
}

struct TrialRecord {
  std::string algorithm;
  std::string distribution;
  int delta_index = 0;
  int rho_index = 0;
  int trial_index = 0;
  double delta = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  bool success_l2 = false;
  bool success_support = false;
  double residual_norm = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string error_tag;

  void validate() const {
    if (success_support && !success_l2)
      throw std::logic_error("trial record: support success without l2 success");
  }

  bool success(CriterionKind k) const {
    return k == CriterionKind::RelativeL2 ? success_l2 : success_support;
  }
};

struct PhaseTransitionCurve {
  std::string algorithm;
  std::string distribution;
  CriterionKind criterion = CriterionKind::SupportEquality;
  std::vector<std::pair<double, std::optional<double>>> points;  // (delta, rho_half)
};

/// Successes over trials for one homogeneous cell.
inline double success_probability(const std::vector<TrialRecord>& records,
                                  CriterionKind criterion) {
  if (records.empty()) fail("EmptyCell", "success_probability: no records");
  int hits = 0;
  for (const auto& r : records) {
    if (r.algorithm != records.front().algorithm ||
        r.distribution != records.front().distribution ||
        r.delta_index != records.front().delta_index ||
        r.rho_index != records.front().rho_index)
      fail("GridMismatch", "success_probability: mixed cells");
    hits += r.success(criterion) ? 1 : 0;
  }
  return double(hits) / double(records.size());
}

/// rho at which the interpolated success curve first drops through 0.5,
/// scanning from the sparse side. Returns the top of the grid when success
/// holds everywhere, and nothing when it already fails at the sparsest rho.
inline std::optional<double> phase_transition(const std::vector<double>& rho_grid,
                                              const std::vector<double>& probs) {
  if (rho_grid.size() != probs.size() || rho_grid.size() < 2)
    fail("GridMismatch", "phase_transition: grid/probability size mismatch");
  if (!std::is_sorted(rho_grid.begin(), rho_grid.end()))
    fail("GridMismatch", "phase_transition: rho grid not ascending");
  if (probs.front() < 0.5) return std::nullopt;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (probs[i] >= 0.5 && probs[i + 1] < 0.5) {
      const double t = (probs[i] - 0.5) / (probs[i] - probs[i + 1]);
      return rho_grid[i] + t * (rho_grid[i + 1] - rho_grid[i]);
    }
  }
  return rho_grid.back();
}

/// Certifies that the residual stopping rule implies (R_l2):
/// (B/A) eps_u <= eps_x. Vacuous (false) whenever A = 0, which is always the
/// case for strictly wide sensing matrices.
inline bool criterion_bound_check(const Matrix& Phi, double eps_u, double eps_x) {
  const FrameBounds fb = frame_bounds(Phi);
  if (fb.lower <= 0.0) return false;
  return (fb.upper / fb.lower) * eps_u <= eps_x;
}

}  // namespace recoverlab
