// recover-lab: sweep runner and single-trial driver for the sparse-recovery
// laboratory. Subcommands:
//   run    -- execute a configured (algorithm x distribution x grid) sweep
//   phase  -- recompute success/phase tables from an existing trials.csv
//   single -- run one trial and print the record as JSON

#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "recoverlab/recoverlab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartialFailures = 2;
constexpr int kExitIo = 3;

int run_command(const std::string& config_path, const std::string& out_override,
                int workers_override, bool resume, bool quiet) {
  using namespace recoverlab;
  ExperimentConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (workers_override > 0) cfg.worker_count = workers_override;
  cfg.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const auto progress = [&](std::size_t done, std::size_t total) {
    if (!quiet)
      std::cerr << "\rcells " << done << "/" << total << std::flush;
  };
  ResultStore store = run_suite(cfg, resume, progress);
  if (!quiet) std::cerr << '\n';

  EmitInfo info;
  info.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  info.command = "run";
  info.config = &cfg;
  emit_tables(store, cfg.output_dir, info);

  std::size_t errored = 0;
  for (const auto& r : store.records)
    if (!r.error_tag.empty()) ++errored;
  if (!quiet)
    std::cerr << store.records.size() << " trials, " << errored
              << " with errors, tables in " << cfg.output_dir << '\n';
  return errored == 0 ? kExitOk : kExitPartialFailures;
}

int phase_command(const std::string& in_dir) {
  using namespace recoverlab;
  ResultStore store;
  store.records = load_trials_csv(std::filesystem::path(in_dir) / "trials.csv");
  if (store.records.empty()) fail("EmptyCell", "no trial records in " + in_dir);
  EmitInfo info;
  info.command = "phase";
  emit_tables(store, in_dir, info);
  std::cerr << "tables rebuilt from " << store.records.size() << " records\n";
  return kExitOk;
}

int single_command(const std::string& algo, const std::string& dist, int n,
                   double delta, double rho, std::uint64_t seed) {
  using namespace recoverlab;
  const AlgorithmInfo& info = find_algorithm(algo);
  DistributionSpec spec;
  spec.kind = parse_distribution(dist);

  const auto t0 = std::chrono::steady_clock::now();
  ProblemInstance p = build_problem(n, delta, rho, spec, seed);
  const RecoverySolution sol =
      info.run(p, AlgoParams{}, seed_mix({seed, seed_tag::algorithm}));
  const Vector xd = debias(sol.x_hat, p.Phi, p.u);

  TrialRecord rec;
  rec.algorithm = algo;
  rec.distribution = distribution_name(spec.kind);
  rec.delta = delta;
  rec.rho = rho;
  rec.seed = seed;
  rec.success_l2 = check_l2(p.x, xd, {CriterionKind::RelativeL2, 1e-2});
  rec.success_support = check_support(p.x, xd);
  rec.residual_norm = sol.residual_norm;
  rec.iterations = sol.iterations;
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.validate();

  nlohmann::json j;
  j["algorithm"] = rec.algorithm;
  j["distribution"] = rec.distribution;
  j["n"] = n;
  j["m"] = p.m;
  j["s"] = p.s;
  j["delta"] = rec.delta;
  j["rho"] = rec.rho;
  j["trial"] = rec.trial_index;
  j["seed"] = rec.seed;
  j["success_l2"] = rec.success_l2;
  j["success_support"] = rec.success_support;
  j["residual_norm"] = rec.residual_norm;
  j["iterations"] = rec.iterations;
  j["termination"] = termination_name(sol.termination);
  j["wall_time_s"] = rec.wall_time_s;
  j["error_tag"] = rec.error_tag;
  std::cout << j.dump(2) << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recover-lab: compressed-sensing recovery experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a configured sweep");
  std::string config_path, out_override;
  int workers_override = 0;
  bool resume = false, quiet = false;
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_override, "override output directory");
  run->add_option("--workers", workers_override, "override worker count");
  run->add_flag("--resume", resume, "keep completed cells from a previous run");
  run->add_flag("--quiet", quiet, "suppress progress output");

  auto* phase = app.add_subcommand("phase", "rebuild tables from trials.csv");
  std::string in_dir;
  phase->add_option("--in", in_dir, "directory containing trials.csv")->required();

  auto* single = app.add_subcommand("single", "run one trial, print JSON");
  std::string algo = "omp", dist = "normal";
  int n = 400;
  double delta = 0.25, rho = 0.2;
  std::uint64_t seed = 0;
  single->add_option("--algo", algo, "algorithm name");
  single->add_option("--dist", dist, "distribution name");
  single->add_option("--n", n, "ambient dimension");
  single->add_option("--delta", delta, "indeterminacy m/N");
  single->add_option("--rho", rho, "sparsity s/m");
  single->add_option("--seed", seed, "trial seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(config_path, out_override, workers_override, resume, quiet);
    if (phase->parsed()) return phase_command(in_dir);
    if (single->parsed()) return single_command(algo, dist, n, delta, rho, seed);
  } catch (const recoverlab::RecoveryError& e) {
    std::cerr << "error [" << e.tag() << "]: " << e.what() << '\n';
    if (e.tag() == "IoError") return kExitIo;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
