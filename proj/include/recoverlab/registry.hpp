#pragma once

#include <functional>
#include <string>
#include <vector>

#include "recoverlab/greedy.hpp"
#include "recoverlab/relaxation.hpp"
#include "recoverlab/thresholding.hpp"

namespace recoverlab {

struct AlgoParams {
  GreedyConfig greedy;
  ThresholdingConfig thresholding;
  LpSolverConfig lp;
  Sl0Config sl0;

  /// Apply one relative residual tolerance everywhere it appears.
  void set_residual_tol(double tol) {
    greedy.residual_tol = tol;
    thresholding.residual_tol = tol;
  }
};

using RecoverFn = std::function<RecoverySolution(
    const ProblemInstance&, const AlgoParams&, std::uint64_t seed)>;

struct AlgorithmInfo {
  std::string name;
  const char* category;  // greedy | thresholding | relaxation | majorization
  bool needs_sparsity;   // true when the exact s is an input
  RecoverFn run;
};

inline const std::vector<AlgorithmInfo>& algorithm_registry() {
  static const std::vector<AlgorithmInfo> table = {
      {"omp", "greedy", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return omp_recover(p, a.greedy);
       }},
      {"promp", "greedy", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t seed) {
         return promp_recover(p, a.greedy, seed);
       }},
      {"romp", "greedy", true,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return romp_recover(p, a.greedy);
       }},
      {"stomp", "greedy", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return stomp_recover(p, a.greedy);
       }},
      {"iht", "thresholding", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return iht_recover(p, a.thresholding);
       }},
      {"ist", "thresholding", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return ist_recover(p, a.thresholding);
       }},
      {"cosamp", "thresholding", true,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return cosamp_recover(p, a.thresholding);
       }},
      {"sp", "thresholding", true,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return sp_recover(p, a.thresholding);
       }},
      {"tst", "thresholding", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return tst_recover(p, a.thresholding);
       }},
      {"amp", "thresholding", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return amp_recover(p, a.thresholding);
       }},
      {"alps", "thresholding", true,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return alps_recover(p, a.thresholding);
       }},
      {"bp", "relaxation", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return bp_recover(p, a.lp);
       }},
      {"irl1", "relaxation", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return irl1_recover(p, a.lp);
       }},
      {"gpsr", "relaxation", false,
       [](const ProblemInstance& p, const AlgoParams&, std::uint64_t) {
         return gpsr_recover(p);
       }},
      {"sl0", "majorization", false,
       [](const ProblemInstance& p, const AlgoParams& a, std::uint64_t) {
         return sl0_recover(p, a.sl0);
       }},
  };
  return table;
}

inline const AlgorithmInfo& find_algorithm(const std::string& name) {
  for (const auto& a : algorithm_registry())
    if (a.name == name) return a;
  fail("ConfigError", "unknown algorithm: " + name);
}

inline std::vector<std::string> algorithm_names() {
  std::vector<std::string> names;
  for (const auto& a : algorithm_registry()) names.push_back(a.name);
  return names;
}

}  // namespace recoverlab
