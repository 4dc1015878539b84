// Copyright 2026 The nfrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: ingest, solve, simulate, sweep, baseline,
// bench-batch, stats.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nfrec/baselines.hpp"
#include "nfrec/batch_mdp.hpp"
#include "nfrec/error.hpp"
#include "nfrec/experiment.hpp"
#include "nfrec/ingest.hpp"
#include "nfrec/io.hpp"
#include "nfrec/mdp.hpp"
#include "nfrec/simulator.hpp"

namespace fs = std::filesystem;
using namespace nfrec;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

struct ModelFlags {
  std::optional<double> lbar;
  std::optional<double> lambda;
  double q = 0.75;
  double alpha = 0.75;
  int n = 2;

  void add(CLI::App* cmd) {
    auto* l = cmd->add_option("--lbar", lbar, "mean session length (lambda = 1 - 1/lbar)");
    auto* m = cmd->add_option("--lambda", lambda, "session continuation probability");
    l->excludes(m);
    cmd->add_option("--q", q, "quality floor in [0,1]")->capture_default_str();
    cmd->add_option("--alpha", alpha, "probability of following a recommendation")
        ->capture_default_str();
    cmd->add_option("--n", n, "recommendation batch size")->capture_default_str();
  }

  UserModel model() const {
    UserModel m{alpha, q, 0.0, n};
    if (lbar) {
      if (!(*lbar >= 1.0)) throw InvalidArgument("--lbar must be >= 1");
      m.lambda = 1.0 - 1.0 / *lbar;
    } else if (lambda) {
      m.lambda = *lambda;
    } else {
      throw InvalidArgument("one of --lbar or --lambda is required");
    }
    m.validate();
    return m;
  }
};

struct SolverFlags {
  int threads = 0;
  double tolerance = 1e-9;
  double epsilon = 1e-7;
  int max_iterations = 200;

  void add(CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "policy evaluation tolerance")->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "improvement threshold")->capture_default_str();
    cmd->add_option("--max-iterations", max_iterations, "policy iteration cap")
        ->capture_default_str();
  }

  PolicyIterationConfig config() const {
    PolicyIterationConfig c;
    c.threads = threads;
    c.evaluation.tolerance = tolerance;
    c.improvement_threshold = epsilon;
    c.max_iterations = max_iterations;
    return c;
  }
};

// --- ingest ------------------------------------------------------------------

struct IngestFlags {
  fs::path out = "instance.txt";
  double cache_ratio = 0.01;
  double cost_uncached = 10.0;
  double cost_cached = 0.0;
  fs::path report;
  fs::path ccdf;
  fs::path labels;

  void add(CLI::App* cmd) {
    cmd->add_option("--out", out, "instance file to write")->capture_default_str();
    cmd->add_option("--cache-ratio", cache_ratio, "fraction of items cached")
        ->capture_default_str();
    cmd->add_option("--cost-uncached", cost_uncached)->capture_default_str();
    cmd->add_option("--cost-cached", cost_cached)->capture_default_str();
    cmd->add_option("--report", report, "key-value report file (default: <out>.report)");
    cmd->add_option("--ccdf", ccdf, "out-degree CCDF as CSV");
    cmd->add_option("--labels", labels, "original item identifiers, one per line");
  }

  int finish(const IngestResult& raw) const {
    const Instance inst = apply_caching(raw.instance, cache_ratio, cost_uncached, cost_cached);
    save_instance(out, inst);
    IngestReport rep = degree_stats(inst);
    rep.input_nodes = raw.report.input_nodes;
    rep.pruned_nodes = raw.report.pruned_nodes;
    rep.pruning_rounds = raw.report.pruning_rounds;
    const std::string text = rep.to_key_value();
    fs::path report_path = report;
    if (report_path.empty()) report_path = fs::path(out.string() + ".report");
    save_text(report_path, text);
    if (!ccdf.empty()) {
      std::ostringstream os;
      os << "degree,fraction_at_least\n";
      for (const auto& [d, f] : degree_ccdf(inst)) os << d << ',' << f << '\n';
      save_text(ccdf, os.str());
    }
    if (!labels.empty()) {
      std::ostringstream os;
      for (const auto& l : raw.labels) os << l << '\n';
      save_text(labels, os.str());
    }
    std::cout << text;
    return kOk;
  }
};

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

// --- helpers -----------------------------------------------------------------

void append_csv(const fs::path& path, const std::string& header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot write " + path.string());
  if (fresh) out << header << '\n';
  out << row << '\n';
}

void write_solution(const fs::path& dir, const PolicyIterationResult& r) {
  save_policy(dir / "policy.txt", r.policy);
  save_values(dir / "values.txt", r.values);
  save_text(dir / "report.txt", r.report.to_key_value());
  save_text(dir / "report.csv", SolveReport::csv_header() + "\n" + r.report.to_csv_row() + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("nfrec");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Network-friendly recommendation policies: solve, simulate, compare"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "build an instance file");
  ingest->require_subcommand(1);
  IngestFlags ingest_flags;

  auto* synthetic = ingest->add_subcommand("synthetic", "random graph, out-degree uniform on 1..100");
  int synth_k = 2000;
  std::uint64_t synth_seed = 1;
  synthetic->add_option("--k", synth_k, "catalog size (>= 101)")->capture_default_str();
  synthetic->add_option("--seed", synth_seed)->capture_default_str();
  ingest_flags.add(synthetic);

  auto* adjacency = ingest->add_subcommand("adjacency", "directed 'src dst' edge list");
  fs::path edges_path;
  std::uint64_t weight_seed = 1;
  std::string component = "weak";
  adjacency->add_option("edges", edges_path, "edge list file")->required();
  adjacency->add_option("--seed", weight_seed, "seed of the edge weights")->capture_default_str();
  adjacency->add_option("--component", component, "largest weak or strong component")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();
  ingest_flags.add(adjacency);

  auto* ratings = ingest->add_subcommand("ratings", "user,item,rating CSV");
  fs::path ratings_path;
  RatingsParams ratings_params;
  ratings->add_option("ratings", ratings_path, "ratings CSV (header optional)")->required();
  ratings->add_option("--floor", ratings_params.floor)->capture_default_str();
  ratings->add_option("--min-related", ratings_params.min_related)->capture_default_str();
  ratings->add_option("--neighborhood", ratings_params.neighborhood)->capture_default_str();
  ingest_flags.add(ratings);

  // solve
  auto* solve = app.add_subcommand("solve", "optimal policy by policy iteration");
  fs::path instance_path, policy_path;
  fs::path out_path;
  ModelFlags model_flags;
  SolverFlags solver_flags;
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--out", out_path, "output directory")->default_val("solve_out");
  model_flags.add(solve);
  solver_flags.add(solve);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "myopic reference policy");
  bool want_top = false, want_low = false, want_mixed = false;
  baseline->add_option("--instance", instance_path)->required();
  auto* f_top = baseline->add_flag("--top-n", want_top, "the N most similar items");
  auto* f_low = baseline->add_flag("--low-cost", want_low, "the N cheapest items");
  auto* f_mix = baseline->add_flag("--q-mixed", want_mixed, "q * Top-N + (1 - q) * Low Cost");
  f_top->excludes(f_low)->excludes(f_mix);
  f_low->excludes(f_mix);
  int base_n = 2;
  double base_q = 0.75;
  baseline->add_option("--n", base_n)->capture_default_str();
  baseline->add_option("--q", base_q)->capture_default_str();
  baseline->add_option("--out", out_path, "policy file")->default_val("policy.txt");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sessions under a policy");
  long sessions = 1000;
  std::uint64_t seed = 1;
  int sim_threads = 1;
  std::string experiment = "run";
  fs::path trace_path;
  ModelFlags sim_model;
  simulate->add_option("--instance", instance_path)->required();
  simulate->add_option("--policy", policy_path)->required();
  sim_model.add(simulate);
  simulate->add_option("--sessions", sessions)->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--threads", sim_threads)->capture_default_str();
  simulate->add_option("--experiment", experiment, "label of the CSV row")->capture_default_str();
  simulate->add_option("--out", out_path, "metrics CSV (appended)")->default_val("metrics.csv");
  simulate->add_option("--trace", trace_path, "dump the first session, one line per view");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of solves and simulations from a config file");
  fs::path config_path;
  std::optional<int> sweep_threads;
  std::optional<fs::path> sweep_out;
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--threads", sweep_threads, "override solver threads");
  sweep->add_option("--out", sweep_out, "override the output directory");

  // bench-batch
  auto* bench = app.add_subcommand("bench-batch", "item-frequency vs batch-enumeration timing");
  int bench_k = 150, bench_n_max = 3;
  std::uint64_t bench_seed = 5;
  double bench_cap = 2e6;
  std::vector<double> bench_q{0.0, 1.0, 0.75};
  ModelFlags bench_model;
  bench->add_option("--instance", instance_path, "instance file (default: synthetic)");
  bench->add_option("--k", bench_k, "synthetic catalog size")->capture_default_str();
  bench->add_option("--seed", bench_seed, "synthetic seed")->capture_default_str();
  bench->add_option("--n-max", bench_n_max, "largest N (N = 1..n-max)")->capture_default_str();
  bench->add_option("--qs", bench_q, "quality floors")->delimiter(',')->capture_default_str();
  bench->add_option("--cap", bench_cap, "largest binom(K-1,N) enumerated")->capture_default_str();
  bench->add_option("--lbar", bench_model.lbar)->default_val(20.0);
  bench->add_option("--alpha", bench_model.alpha)->capture_default_str();
  bench->add_option("--out", out_path, "CSV file")->default_val("bench_batch.csv");

  // stats
  auto* stats = app.add_subcommand("stats", "degree statistics of an instance");
  fs::path stats_ccdf;
  stats->add_option("--instance", instance_path)->required();
  stats->add_option("--ccdf", stats_ccdf, "out-degree CCDF as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (verbose) spdlog::set_level(spdlog::level::info);

  try {
    if (synthetic->parsed()) return ingest_flags.finish(build_synthetic(synth_k, synth_seed));
    if (adjacency->parsed()) {
      auto in = open_input(edges_path);
      return ingest_flags.finish(build_from_adjacency(
          read_edge_list(in), weight_seed,
          component == "strong" ? ComponentMode::kStrong : ComponentMode::kWeak));
    }
    if (ratings->parsed()) {
      auto in = open_input(ratings_path);
      return ingest_flags.finish(build_from_ratings(read_ratings_csv(in), ratings_params));
    }

    if (solve->parsed()) {
      const Instance inst = load_instance(instance_path);
      const UserModel model = model_flags.model();
      try {
        const PolicyIterationResult r = policy_iteration(inst, model, solver_flags.config());
        write_solution(out_path, r);
        std::cout << r.report.to_key_value();
      } catch (const PolicyIterationError& e) {
        write_solution(out_path, e.best());
        throw;
      }
      return kOk;
    }

    if (baseline->parsed()) {
      const Instance inst = load_instance(instance_path);
      if (!(want_top || want_low || want_mixed))
        throw InvalidArgument("choose one of --top-n, --low-cost, --q-mixed");
      if (want_mixed && !(base_q >= 0.0 && base_q <= 1.0))
        throw InvalidArgument("--q must be in [0,1]");
      const Policy p = want_top   ? top_n_policy(inst, base_n)
                       : want_low ? low_cost_policy(inst, base_n)
                                  : q_mixed_policy(inst, base_n, base_q);
      save_policy(out_path, p);
      return kOk;
    }

    if (simulate->parsed()) {
      const Instance inst = load_instance(instance_path);
      const Policy policy = load_policy(policy_path);
      const UserModel model = sim_model.model();
      if (policy.size() != inst.size())
        throw DataError("policy has " + std::to_string(policy.size()) + " rows, instance has " +
                        std::to_string(inst.size()) + " items");
      const Metrics m = run_monte_carlo(inst, policy, model, sessions, seed, sim_threads);
      const std::string row = metrics_csv_row(experiment, model, m);
      append_csv(out_path, metrics_csv_header(), row);
      if (!trace_path.empty()) {
        RandomStream stream(seed, 0);
        std::ostringstream os;
        os << "# t state cost quality followed\n";
        simulate_session(inst, policy, model, stream).write(os);
        save_text(trace_path, os.str());
      }
      std::cout << metrics_csv_header() << '\n' << row << '\n';
      return kOk;
    }

    if (sweep->parsed()) {
      ExperimentConfig config = load_experiment_config(config_path);
      if (sweep_threads) config.solver.threads = config.threads = *sweep_threads;
      if (sweep_out) {
        if (config.cache == config.out / "cache") config.cache = *sweep_out / "cache";
        config.out = *sweep_out;
      }
      fs::path inst_path = config.instance;
      if (inst_path.is_relative() && !fs::exists(inst_path))
        inst_path = config_path.parent_path() / inst_path;
      const Instance inst = load_instance(inst_path);
      const auto rows = run_sweep(inst, config);
      std::ostringstream os;
      os << SweepRow::csv_header() << '\n';
      int failures = 0;
      for (const auto& r : rows) {
        os << r.to_csv(config.sessions, config.seed) << '\n';
        if (r.status.rfind("error", 0) == 0) ++failures;
      }
      save_text(config.out / "sweep.csv", os.str());
      std::cout << "wrote " << rows.size() << " rows to " << (config.out / "sweep.csv").string()
                << (failures ? " (" + std::to_string(failures) + " failed)" : std::string())
                << '\n';
      return failures ? kSolver : kOk;
    }

    if (bench->parsed()) {
      const Instance inst = instance_path.empty()
                                ? apply_caching(build_synthetic(bench_k, bench_seed).instance, 0.01)
                                : load_instance(instance_path);
      const double lambda = 1.0 - 1.0 / *bench_model.lbar;
      std::ostringstream os;
      os << "n,q,binom,method,seconds,evaluation_seconds,improvement_seconds,iterations,"
            "batches_enumerated,max_value_gap,status\n";
      bool refused = false;
      for (int n = 1; n <= bench_n_max; ++n) {
        const double binom = binomial(inst.size() - 1, n);
        for (double q : bench_q) {
          const UserModel model{bench_model.alpha, q, lambda, n};
          model.validate();
          const PolicyIterationResult item = policy_iteration(inst, model);
          char line[512];
          std::snprintf(line, sizeof line, "%d,%g,%.0f,item,%.6f,%.6f,%.6f,%d,0,0,ok\n", n, q,
                        binom, item.report.total_seconds, item.report.evaluation_seconds,
                        item.report.improvement_seconds, item.report.iterations);
          os << line;
          BatchMdpOptions opts;
          opts.max_batches_per_state = bench_cap;
          if (binom > bench_cap) {
            std::snprintf(line, sizeof line, "%d,%g,%.0f,batch,,,,,,,refused\n", n, q, binom);
            os << line;
            refused = true;
            continue;
          }
          const BatchMdpResult batch = solve_batch_mdp(inst, model, opts);
          const double gap = (batch.values - item.values).cwiseAbs().maxCoeff();
          std::snprintf(line, sizeof line, "%d,%g,%.0f,batch,%.6f,%.6f,%.6f,%d,%zu,%.3g,ok\n", n,
                        q, binom, batch.seconds, batch.evaluation_seconds,
                        batch.improvement_seconds, batch.iterations, batch.batches_enumerated,
                        gap);
          os << line;
        }
      }
      save_text(out_path, os.str());
      std::cout << os.str();
      if (refused) {
        std::cerr << "batch enumeration refused above binom(K-1,N) = " << bench_cap
                  << "; raise --cap to run it\n";
        return kUsage;
      }
      return kOk;
    }

    if (stats->parsed()) {
      const Instance inst = load_instance(instance_path);
      std::cout << degree_stats(inst).to_key_value();
      if (!stats_ccdf.empty()) {
        std::ostringstream os;
        os << "degree,fraction_at_least\n";
        for (const auto& [d, f] : degree_ccdf(inst)) os << d << ',' << f << '\n';
        save_text(stats_ccdf, os.str());
      }
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
