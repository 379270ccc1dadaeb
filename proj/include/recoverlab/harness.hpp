#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "recoverlab/evaluation.hpp"
#include "recoverlab/registry.hpp"

namespace recoverlab {

inline constexpr const char* kVersion = "0.1.0";

enum class PhiPolicy { PerCell, PerTrial };

inline std::string phi_policy_name(PhiPolicy p) {
  return p == PhiPolicy::PerCell ? "per_cell" : "per_trial";
}

inline PhiPolicy parse_phi_policy(const std::string& s) {
  if (s == "per_cell") return PhiPolicy::PerCell;
  if (s == "per_trial") return PhiPolicy::PerTrial;
  fail("ConfigError", "unknown phi_policy: " + s);
}

struct ExperimentConfig {
  SuiteGrid suite;
  std::vector<std::string> algorithms;
  std::vector<DistKind> distributions;
  std::uint64_t master_seed = 0;
  std::string output_dir = "results";
  int worker_count = 1;
  PhiPolicy phi_policy = PhiPolicy::PerCell;
  /// Optional grid subsets (indices into the delta/rho grids); empty = all.
  std::vector<int> delta_select;
  std::vector<int> rho_select;
  double epsilon_x = 1e-2;
  AlgoParams params;

  std::vector<int> delta_indices() const {
    return select_or_all(delta_select, suite.delta_values.size());
  }
  std::vector<int> rho_indices() const {
    return select_or_all(rho_select, suite.rho_values.size());
  }

  void validate() const {
    suite.validate();
    if (algorithms.empty()) fail("ConfigError", "no algorithms selected");
    if (distributions.empty()) fail("ConfigError", "no distributions selected");
    if (worker_count < 1) fail("ConfigError", "worker_count must be >= 1");
    if (epsilon_x <= 0) fail("ConfigError", "epsilon_x must be positive");
    for (const auto& a : algorithms) find_algorithm(a);
    check_range(delta_select, suite.delta_values.size(), "delta_select");
    check_range(rho_select, suite.rho_values.size(), "rho_select");
  }

 private:
  static std::vector<int> select_or_all(const std::vector<int>& sel, std::size_t n) {
    if (!sel.empty()) return sel;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  static void check_range(const std::vector<int>& sel, std::size_t n,
                          const char* what) {
    for (int i : sel)
      if (i < 0 || static_cast<std::size_t>(i) >= n)
        fail("ConfigError", std::string(what) + " index out of range");
  }
};

// ---------------------------------------------------------------------------
// Plain-text config file: `key = value` lines, '#' comments, unknown keys
// rejected. Lists are comma separated.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline long long parse_int(const std::string& v, const char* key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail("ConfigError", std::string("bad integer for ") + key + ": " + v);
  }
}

inline double parse_real(const std::string& v, const char* key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail("ConfigError", std::string("bad real for ") + key + ": " + v);
  }
}

inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline ExperimentConfig parse_config_text(std::istream& in) {
  ExperimentConfig cfg;
  int rho_count = 30, delta_count = 16;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("ConfigError", "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));

    if (key == "n") {
      cfg.suite.N = static_cast<Index>(detail::parse_int(value, "n"));
    } else if (key == "trials") {
      cfg.suite.trials = static_cast<int>(detail::parse_int(value, "trials"));
    } else if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(detail::parse_int(value, "master_seed"));
    } else if (key == "algorithms") {
      if (value == "all") {
        cfg.algorithms = algorithm_names();
      } else {
        cfg.algorithms = detail::split_list(value);
      }
    } else if (key == "distributions") {
      cfg.distributions.clear();
      if (value == "all") {
        cfg.distributions.assign(kAllDistributions.begin(), kAllDistributions.end());
      } else {
        for (const auto& d : detail::split_list(value))
          cfg.distributions.push_back(parse_distribution(d));
      }
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "workers") {
      cfg.worker_count = static_cast<int>(detail::parse_int(value, "workers"));
    } else if (key == "phi_policy") {
      cfg.phi_policy = parse_phi_policy(value);
    } else if (key == "delta_select") {
      for (const auto& t : detail::split_list(value))
        cfg.delta_select.push_back(static_cast<int>(detail::parse_int(t, "delta_select")));
    } else if (key == "rho_select") {
      for (const auto& t : detail::split_list(value))
        cfg.rho_select.push_back(static_cast<int>(detail::parse_int(t, "rho_select")));
    } else if (key == "rho_count") {
      rho_count = static_cast<int>(detail::parse_int(value, "rho_count"));
    } else if (key == "delta_count") {
      delta_count = static_cast<int>(detail::parse_int(value, "delta_count"));
    } else if (key == "residual_tol") {
      cfg.params.set_residual_tol(detail::parse_real(value, "residual_tol"));
    } else if (key == "epsilon_x") {
      cfg.epsilon_x = detail::parse_real(value, "epsilon_x");
    } else if (key == "amp_tau_mode") {
      if (value == "candidate")
        cfg.params.thresholding.amp_tau = AmpTauMode::CandidateMthLargest;
      else if (value == "prior")
        cfg.params.thresholding.amp_tau = AmpTauMode::PriorMthLargest;
      else if (value == "residual")
        cfg.params.thresholding.amp_tau = AmpTauMode::ResidualScaled;
      else
        fail("ConfigError", "unknown amp_tau_mode: " + value);
    } else {
      fail("ConfigError", "line " + std::to_string(line_no) + ": unknown key: " + key);
    }
  }
  if (rho_count < 2 || delta_count < 2)
    fail("ConfigError", "rho_count/delta_count must be >= 2");
  cfg.suite.rho_values = linspace(0.05, 1.0, rho_count);
  cfg.suite.delta_values = linspace(0.05, 0.5414, delta_count);
  cfg.suite.master_seed = cfg.master_seed;
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open config: " + path.string());
  return parse_config_text(in);
}

// ---------------------------------------------------------------------------
// Result store and CSV persistence.
// ---------------------------------------------------------------------------

struct ResultStore {
  std::vector<TrialRecord> records;

  void sort_canonical() {
    std::sort(records.begin(), records.end(), [](const TrialRecord& a,
                                                 const TrialRecord& b) {
      return std::tie(a.algorithm, a.distribution, a.delta_index, a.rho_index,
                      a.trial_index) < std::tie(b.algorithm, b.distribution,
                                                b.delta_index, b.rho_index,
                                                b.trial_index);
    });
  }
};

inline constexpr const char* kTrialsHeader =
    "algorithm,distribution,delta,rho,trial,seed,success_l2,success_support,"
    "residual_norm,iterations,wall_time_s,error_tag";

inline std::string trial_csv_row(const TrialRecord& r) {
  std::string row;
  row += r.algorithm;
  row += ',';
  row += r.distribution;
  row += ',';
  row += detail::format_double(r.delta);
  row += ',';
  row += detail::format_double(r.rho);
  row += ',';
  row += std::to_string(r.trial_index);
  row += ',';
  row += std::to_string(r.seed);
  row += ',';
  row += r.success_l2 ? '1' : '0';
  row += ',';
  row += r.success_support ? '1' : '0';
  row += ',';
  row += detail::format_double(r.residual_norm);
  row += ',';
  row += std::to_string(r.iterations);
  row += ',';
  row += detail::format_double(r.wall_time_s);
  row += ',';
  row += r.error_tag;
  return row;
}

inline TrialRecord parse_trial_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  f.push_back(cur);
  if (f.size() != 12) fail("IoError", "trials.csv: malformed row: " + line);
  TrialRecord r;
  r.algorithm = f[0];
  r.distribution = f[1];
  r.delta = detail::parse_real(f[2], "delta");
  r.rho = detail::parse_real(f[3], "rho");
  r.trial_index = static_cast<int>(detail::parse_int(f[4], "trial"));
  r.seed = static_cast<std::uint64_t>(detail::parse_int(f[5], "seed"));
  r.success_l2 = f[6] == "1";
  r.success_support = f[7] == "1";
  r.residual_norm = detail::parse_real(f[8], "residual_norm");
  r.iterations = static_cast<int>(detail::parse_int(f[9], "iterations"));
  r.wall_time_s = detail::parse_real(f[10], "wall_time_s");
  r.error_tag = f[11];
  return r;
}

inline std::vector<TrialRecord> load_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kTrialsHeader)
    fail("IoError", "trials.csv: unexpected header in " + path.string());
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    out.push_back(parse_trial_row(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trial execution.
// ---------------------------------------------------------------------------

namespace detail {

struct CellTask {
  std::string algorithm;
  DistKind dist;
  int delta_index;
  int rho_index;
};

inline std::uint64_t dist_ordinal(DistKind k) {
  return static_cast<std::uint64_t>(k);
}

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, DistKind dist,
                                int d_idx, int r_idx, int trial) {
  return seed_mix({cfg.master_seed, seed_tag::trial, dist_ordinal(dist),
                   std::uint64_t(d_idx), std::uint64_t(r_idx),
                   std::uint64_t(trial)});
}

inline std::uint64_t cell_phi_seed(const ExperimentConfig& cfg, DistKind dist,
                                   int d_idx, int r_idx) {
  return seed_mix({cfg.master_seed, seed_tag::phi, dist_ordinal(dist),
                   std::uint64_t(d_idx), std::uint64_t(r_idx)});
}

inline std::vector<TrialRecord> run_cell(const ExperimentConfig& cfg,
                                         const CellTask& task) {
  const AlgorithmInfo& algo = find_algorithm(task.algorithm);
  const double delta = cfg.suite.delta_values[static_cast<std::size_t>(task.delta_index)];
  const double rho = cfg.suite.rho_values[static_cast<std::size_t>(task.rho_index)];
  const Index N = cfg.suite.N;
  const Index m = measurements_for(N, delta);
  const Index s = sparsity_for(m, rho);
  DistributionSpec dist_spec;
  dist_spec.kind = task.dist;

  Matrix cell_phi;
  if (cfg.phi_policy == PhiPolicy::PerCell)
    cell_phi = sample_sensing_matrix(
        m, N, cell_phi_seed(cfg, task.dist, task.delta_index, task.rho_index));

  std::vector<TrialRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.suite.trials));
  for (int t = 0; t < cfg.suite.trials; ++t) {
    const std::uint64_t tseed =
        trial_seed(cfg, task.dist, task.delta_index, task.rho_index, t);
    TrialRecord rec;
    rec.algorithm = task.algorithm;
    rec.distribution = distribution_name(task.dist);
    rec.delta_index = task.delta_index;
    rec.rho_index = task.rho_index;
    rec.trial_index = t;
    rec.delta = delta;
    rec.rho = rho;
    rec.seed = tseed;

    const auto t0 = std::chrono::steady_clock::now();
    try {
      Matrix Phi = cfg.phi_policy == PhiPolicy::PerCell
                       ? cell_phi
                       : sample_sensing_matrix(m, N, seed_mix({tseed, seed_tag::phi}));
      Vector x = sample_sparse_vector(N, s, dist_spec,
                                      seed_mix({tseed, seed_tag::sparse_vector}));
      ProblemInstance p = make_instance(std::move(Phi), std::move(x));
      const RecoverySolution sol =
          algo.run(p, cfg.params, seed_mix({tseed, seed_tag::algorithm}));
      const Vector xd = debias(sol.x_hat, p.Phi, p.u);
      rec.success_l2 =
          check_l2(p.x, xd, {CriterionKind::RelativeL2, cfg.epsilon_x});
      rec.success_support = check_support(p.x, xd);
      rec.residual_norm = sol.residual_norm;
      rec.iterations = sol.iterations;
    } catch (const RecoveryError& e) {
      rec.error_tag = e.tag();
    } catch (const std::exception&) {
      rec.error_tag = "Unhandled";
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.validate();
    records.push_back(std::move(rec));
  }
  return records;
}

/// Complete cells in an existing table (all trial indices 0..trials-1 seen).
inline std::vector<TrialRecord> complete_cell_records(
    const std::vector<TrialRecord>& loaded, int trials) {
  using Key = std::tuple<std::string, std::string, int, int>;
  std::map<Key, std::set<int>> seen;
  std::map<Key, std::vector<TrialRecord>> grouped;
  for (const auto& r : loaded) {
    Key k{r.algorithm, r.distribution, r.delta_index, r.rho_index};
    if (seen[k].insert(r.trial_index).second) grouped[k].push_back(r);
  }
  std::vector<TrialRecord> kept;
  for (auto& [key, recs] : grouped) {
    const auto& idx = seen[key];
    if (static_cast<int>(idx.size()) == trials && *idx.begin() == 0 &&
        *idx.rbegin() == trials - 1)
      for (auto& r : recs) kept.push_back(std::move(r));
  }
  return kept;
}

}  // namespace detail

/// Map delta/rho values in loaded records back to grid indices; rejects
/// tables produced under a different grid.
inline void attach_grid_indices(std::vector<TrialRecord>& records,
                                const SuiteGrid& grid) {
  const auto locate = [](const std::vector<double>& vals, double v, const char* what) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] == v) return static_cast<int>(i);
    fail("ConfigError", std::string("resume: ") + what + " value not on the grid");
  };
  for (auto& r : records) {
    r.delta_index = locate(grid.delta_values, r.delta, "delta");
    r.rho_index = locate(grid.rho_values, r.rho, "rho");
  }
}

/// Execute every (algorithm, distribution, delta, rho, trial) tuple exactly
/// once. Completed cells are appended to trials.csv as they finish; with
/// `resume`, cells already complete on disk are kept and skipped.
inline ResultStore run_suite(
    const ExperimentConfig& cfg, bool resume = false,
    const std::function<void(std::size_t, std::size_t)>& progress = {}) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path outdir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) fail("IoError", "cannot create output dir: " + outdir.string());
  const fs::path trials_path = outdir / "trials.csv";

  ResultStore store;
  std::set<std::tuple<std::string, std::string, int, int>> done;
  if (resume && fs::exists(trials_path)) {
    auto loaded = load_trials_csv(trials_path);
    attach_grid_indices(loaded, cfg.suite);
    store.records = detail::complete_cell_records(loaded, cfg.suite.trials);
    for (const auto& r : store.records)
      done.insert({r.algorithm, r.distribution, r.delta_index, r.rho_index});
  }

  // Start the on-disk table from the kept records only, so partially
  // written cells never linger.
  {
    std::ofstream out(trials_path, std::ios::trunc);
    if (!out) fail("IoError", "cannot write " + trials_path.string());
    out << kTrialsHeader << '\n';
    for (const auto& r : store.records) out << trial_csv_row(r) << '\n';
  }

  std::vector<detail::CellTask> tasks;
  for (const auto& alg : cfg.algorithms)
    for (DistKind dist : cfg.distributions)
      for (int d : cfg.delta_indices())
        for (int r : cfg.rho_indices())
          if (!done.count({alg, distribution_name(dist), d, r}))
            tasks.push_back({alg, dist, d, r});

  std::ofstream append(trials_path, std::ios::app);
  if (!append) fail("IoError", "cannot append to " + trials_path.string());

  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{0};
  std::exception_ptr worker_error;

  const auto worker = [&]() {
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        auto recs = detail::run_cell(cfg, tasks[i]);
        std::lock_guard<std::mutex> lock(sink_mutex);
        for (const auto& r : recs) append << trial_csv_row(r) << '\n';
        append.flush();
        for (auto& r : recs) store.records.push_back(std::move(r));
        const std::size_t c = ++finished;
        if (progress) progress(c, tasks.size());
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  const int workers = std::min<int>(cfg.worker_count,
                                    std::max<int>(1, static_cast<int>(tasks.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  store.sort_canonical();
  return store;
}

// ---------------------------------------------------------------------------
// Aggregation and table emission.
// ---------------------------------------------------------------------------

struct CellStats {
  double delta = 0, rho = 0;
  int trials = 0;
  int l2_hits = 0;
  int support_hits = 0;

  double probability(CriterionKind k) const {
    return double(k == CriterionKind::RelativeL2 ? l2_hits : support_hits) /
           double(trials);
  }
};

using CellKey = std::tuple<std::string, std::string, int, int>;  // alg, dist, d, r

inline std::map<CellKey, CellStats> aggregate_cells(const ResultStore& store) {
  std::map<CellKey, CellStats> cells;
  for (const auto& r : store.records) {
    auto& c = cells[{r.algorithm, r.distribution, r.delta_index, r.rho_index}];
    c.delta = r.delta;
    c.rho = r.rho;
    c.trials += 1;
    c.l2_hits += r.success_l2 ? 1 : 0;
    c.support_hits += r.success_support ? 1 : 0;
  }
  return cells;
}

/// Phase-transition curves recomputed from a store, one per
/// (algorithm, distribution, criterion), points ordered by delta.
inline std::vector<PhaseTransitionCurve> phase_curves(const ResultStore& store,
                                                      int* non_monotone = nullptr) {
  const auto cells = aggregate_cells(store);
  using SliceKey = std::tuple<std::string, std::string, int>;  // alg, dist, d_idx
  std::map<SliceKey, std::vector<const CellStats*>> slices;
  for (const auto& [key, stats] : cells)
    slices[{std::get<0>(key), std::get<1>(key), std::get<2>(key)}].push_back(&stats);

  if (non_monotone) *non_monotone = 0;
  std::map<std::pair<std::string, std::string>,
           std::array<PhaseTransitionCurve, 2>> curves;
  for (auto& [key, row] : slices) {
    std::sort(row.begin(), row.end(),
              [](const CellStats* a, const CellStats* b) { return a->rho < b->rho; });
    std::vector<double> rho_grid;
    for (const auto* c : row) rho_grid.push_back(c->rho);
    for (CriterionKind crit :
         {CriterionKind::RelativeL2, CriterionKind::SupportEquality}) {
      std::vector<double> probs;
      for (const auto* c : row) probs.push_back(c->probability(crit));
      if (non_monotone) {
        // success should fall with rho; any rise marks the curve non-monotone
        for (std::size_t i = 0; i + 1 < probs.size(); ++i)
          if (probs[i + 1] > probs[i]) {
            ++*non_monotone;
            break;
          }
      }
      auto& pair = curves[{std::get<0>(key), std::get<1>(key)}];
      auto& curve = pair[crit == CriterionKind::RelativeL2 ? 0 : 1];
      curve.algorithm = std::get<0>(key);
      curve.distribution = std::get<1>(key);
      curve.criterion = crit;
      curve.points.emplace_back(row.front()->delta,
                                rho_grid.size() >= 2
                                    ? phase_transition(rho_grid, probs)
                                    : std::nullopt);
    }
  }

  std::vector<PhaseTransitionCurve> out;
  for (auto& [key, pair] : curves)
    for (auto& c : pair)
      if (!c.points.empty()) out.push_back(std::move(c));
  return out;
}

struct EmitInfo {
  double elapsed_s = 0.0;
  std::string command;
  const ExperimentConfig* config = nullptr;  // echoed into summary.json if set
};

/// Write trials.csv (canonically sorted), success.csv, phase.csv and
/// summary.json under `out`.
inline void emit_tables(ResultStore& store, const std::filesystem::path& out,
                        const EmitInfo& info = {}) {
  if (store.records.empty()) fail("EmptyCell", "emit_tables: empty store");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail("IoError", "cannot create output dir: " + out.string());
  store.sort_canonical();

  const auto write_file = [&](const char* name, const std::string& body) {
    const fs::path tmp = out / (std::string(name) + ".tmp");
    {
      std::ofstream f(tmp, std::ios::trunc);
      if (!f) fail("IoError", std::string("cannot write ") + name);
      f << body;
    }
    fs::rename(tmp, out / name, ec);
    if (ec) fail("IoError", std::string("cannot finalize ") + name);
  };

  std::string trials;
  trials += kTrialsHeader;
  trials += '\n';
  for (const auto& r : store.records) {
    trials += trial_csv_row(r);
    trials += '\n';
  }
  write_file("trials.csv", trials);

  const auto cells = aggregate_cells(store);
  std::string success =
      "algorithm,distribution,delta,rho,criterion,successes,trials,probability\n";
  for (const auto& [key, c] : cells) {
    for (CriterionKind crit :
         {CriterionKind::RelativeL2, CriterionKind::SupportEquality}) {
      success += std::get<0>(key) + ',' + std::get<1>(key) + ',' +
                 detail::format_double(c.delta) + ',' + detail::format_double(c.rho) +
                 ',' + criterion_name(crit) + ',' +
                 std::to_string(crit == CriterionKind::RelativeL2 ? c.l2_hits
                                                                  : c.support_hits) +
                 ',' + std::to_string(c.trials) + ',' +
                 detail::format_double(c.probability(crit)) + '\n';
    }
  }
  write_file("success.csv", success);

  int non_monotone = 0;
  std::string phase = "algorithm,distribution,criterion,delta,rho_half\n";
  for (const auto& curve : phase_curves(store, &non_monotone))
    for (const auto& [delta, rho_half] : curve.points)
      phase += curve.algorithm + ',' + curve.distribution + ',' +
               criterion_name(curve.criterion) + ',' + detail::format_double(delta) +
               ',' + (rho_half ? detail::format_double(*rho_half) : std::string()) +
               '\n';
  write_file("phase.csv", phase);

  nlohmann::json summary;
  summary["version"] = kVersion;
  summary["records"] = store.records.size();
  summary["cells"] = cells.size();
  summary["elapsed_s"] = info.elapsed_s;
  summary["non_monotone_success_curves"] = non_monotone;
  summary["phase_interpolation"] = "piecewise-linear, first downward 0.5 crossing";
  if (!info.command.empty()) summary["command"] = info.command;
  if (info.config) {
    const auto& cfg = *info.config;
    nlohmann::json jc;
    jc["n"] = cfg.suite.N;
    jc["trials"] = cfg.suite.trials;
    jc["master_seed"] = cfg.master_seed;
    jc["algorithms"] = cfg.algorithms;
    std::vector<std::string> dists;
    for (auto d : cfg.distributions) dists.push_back(distribution_name(d));
    jc["distributions"] = dists;
    jc["workers"] = cfg.worker_count;
    jc["phi_policy"] = phi_policy_name(cfg.phi_policy);
    jc["delta_values"] = cfg.suite.delta_values;
    jc["rho_values"] = cfg.suite.rho_values;
    jc["delta_select"] = cfg.delta_select;
    jc["rho_select"] = cfg.rho_select;
    jc["epsilon_x"] = cfg.epsilon_x;
    jc["residual_tol"] = cfg.params.greedy.residual_tol;
    summary["config"] = jc;
  }
  write_file("summary.json", summary.dump(2) + "\n");
}

}  // namespace recoverlab
