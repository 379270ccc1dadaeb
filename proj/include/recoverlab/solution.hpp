#pragma once

#include <string>

#include "recoverlab/core.hpp"
#include "recoverlab/problem.hpp"

namespace recoverlab {

enum class Termination {
  ResidualTol,      // ||r|| <= eps_u ||u||
  SupportBudget,    // |Omega_k| exceeded the 2s budget
  IterationCap,     // refinement/iteration cap reached
  ResidualIncrease, // stagewise residual grew; previous iterate returned
  Converged,        // no further progress possible (fixed point, empty
                    // selection, dependent columns, schedule exhausted)
  Diverged,         // runaway iterate; best-so-far returned
};

inline std::string termination_name(Termination t) {
  switch (t) {
    case Termination::ResidualTol: return "residual_tol";
    case Termination::SupportBudget: return "support_budget";
    case Termination::IterationCap: return "iteration_cap";
    case Termination::ResidualIncrease: return "residual_increase";
    case Termination::Converged: return "converged";
    case Termination::Diverged: return "diverged";
  }
  return "?";
}

struct RecoverySolution {
  Vector x_hat;
  IndexSet support;          // exact nonzero set of x_hat, ascending
  double residual_norm = 0;  // ||u - Phi x_hat||_2
  int iterations = 0;
  Termination termination = Termination::Converged;
  std::vector<double> residual_history;  // per-iteration ||u - Phi x_k||
};

/// Stamp support/residual from the final iterate so every algorithm returns
/// a solution satisfying the type invariants.
inline RecoverySolution finalize_solution(const ProblemInstance& p, Vector x_hat,
                                          int iterations, Termination t,
                                          std::vector<double> history = {}) {
  RecoverySolution s;
  s.support = nonzero_support(x_hat);
  s.residual_norm = (p.u - p.Phi * x_hat).norm();
  s.x_hat = std::move(x_hat);
  s.iterations = iterations;
  s.termination = t;
  s.residual_history = std::move(history);
  return s;
}

}  // namespace recoverlab
