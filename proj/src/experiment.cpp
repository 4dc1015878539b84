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

#include "nfrec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "nfrec/baselines.hpp"
#include "nfrec/error.hpp"
#include "nfrec/io.hpp"
#include "nfrec/parallel.hpp"

namespace nfrec {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v))
    throw DataError("config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

long to_long(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size())
    throw DataError("config: '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  if (out.empty()) throw DataError("config: '" + key + "' is empty");
  return out;
}

void fnv_mix(std::uint64_t& h, const std::string& text) {
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::set<std::string> kPolicies{"mdp", "q-mixed", "top-n", "low-cost", "no-rs"};

}  // namespace

std::vector<UserModel> ExperimentConfig::grid() const {
  std::vector<UserModel> points;
  for (double lambda : lambdas)
    for (double qv : q)
      for (double a : alpha)
        for (int nv : n) points.push_back({a, qv, lambda, nv});
  return points;
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig config;
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!entries.emplace(key, value).second)
      throw DataError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  bool cache_set = false;
  for (const auto& [key, value] : entries) {
    if (key == "instance") {
      config.instance = value;
    } else if (key == "out") {
      config.out = value;
    } else if (key == "lbar") {
      for (double l : to_doubles(key, value)) {
        if (!(l >= 1.0)) throw DataError("config: lbar values must be >= 1");
        config.lambdas.push_back(1.0 - 1.0 / l);
      }
    } else if (key == "lambda") {
      config.lambdas = to_doubles(key, value);
    } else if (key == "q") {
      config.q = to_doubles(key, value);
    } else if (key == "alpha") {
      config.alpha = to_doubles(key, value);
    } else if (key == "n") {
      config.n.clear();
      for (const auto& item : split_list(value)) config.n.push_back(static_cast<int>(to_long(key, item)));
      if (config.n.empty()) throw DataError("config: 'n' is empty");
    } else if (key == "policies") {
      config.policies = split_list(value);
      for (const auto& p : config.policies)
        if (!kPolicies.count(p)) throw DataError("config: unknown policy '" + p + "'");
    } else if (key == "sessions") {
      config.sessions = to_long(key, value);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(to_long(key, value));
    } else if (key == "threads") {
      config.threads = static_cast<int>(to_long(key, value));
    } else if (key == "workers") {
      config.workers = static_cast<int>(to_long(key, value));
    } else if (key == "tolerance") {
      config.solver.evaluation.tolerance = to_double(key, value);
    } else if (key == "epsilon") {
      config.solver.improvement_threshold = to_double(key, value);
    } else if (key == "max_iterations") {
      config.solver.max_iterations = static_cast<int>(to_long(key, value));
    } else if (key == "cache") {
      cache_set = true;
      if (value != "none") config.cache = value;
    } else {
      throw DataError("config: unknown key '" + key + "'");
    }
  }
  if (entries.count("lbar") && entries.count("lambda"))
    throw DataError("config: give either 'lbar' or 'lambda', not both");
  if (config.lambdas.empty()) throw DataError("config: one of 'lbar' or 'lambda' is required");
  if (config.instance.empty()) throw DataError("config: 'instance' is required");
  if (config.sessions < 1) throw DataError("config: 'sessions' must be >= 1");
  if (!cache_set) config.cache = config.out / "cache";
  config.solver.threads = config.threads;
  for (const auto& m : config.grid()) {
    try {
      m.validate();
    } catch (const InvalidArgument& e) {
      throw DataError(std::string("config: ") + e.what());
    }
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_experiment_config(in);
}

std::uint64_t policy_cache_key(const Instance& instance, const UserModel& model,
                               const PolicyIterationConfig& solver) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  fnv_mix(h, std::to_string(instance_fingerprint(instance)));
  fnv_mix(h, number(model.alpha) + ' ' + number(model.q) + ' ' + number(model.lambda) + ' ' +
                 std::to_string(model.batch_size));
  fnv_mix(h, number(solver.evaluation.tolerance) + ' ' +
                 std::to_string(static_cast<int>(solver.evaluation.method)) + ' ' +
                 std::to_string(solver.evaluation.direct_limit) + ' ' +
                 number(solver.improvement_threshold) + ' ' + std::to_string(solver.max_iterations));
  return h;
}

PolicyIterationResult cached_policy_iteration(const Instance& instance, const UserModel& model,
                                              const PolicyIterationConfig& solver,
                                              const std::filesystem::path& cache, bool& hit) {
  hit = false;
  std::filesystem::path policy_path, values_path;
  if (!cache.empty()) {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx",
                  static_cast<unsigned long long>(policy_cache_key(instance, model, solver)));
    policy_path = cache / (std::string(name) + ".policy");
    values_path = cache / (std::string(name) + ".values");
    if (std::filesystem::exists(policy_path) && std::filesystem::exists(values_path)) {
      PolicyIterationResult r{load_policy(policy_path), load_values(values_path), {}};
      r.report.converged = true;
      hit = true;
      return r;
    }
  }
  PolicyIterationResult r = policy_iteration(instance, model, solver);
  if (!cache.empty()) {
    // Write under temporary names, then rename, so a concurrent reader never
    // sees a half-written file.
    auto tmp_policy = policy_path, tmp_values = values_path;
    tmp_policy += ".tmp";
    tmp_values += ".tmp";
    save_policy(tmp_policy, r.policy);
    save_values(tmp_values, r.values);
    std::filesystem::rename(tmp_values, values_path);
    std::filesystem::rename(tmp_policy, policy_path);
  }
  return r;
}

std::string SweepRow::csv_header() {
  return "point,policy,lbar,lambda,q,alpha,n,sessions,seed,mean_cost,mean_quality,"
         "hit_probability,mean_length,cost_half_width,quality_half_width,hit_half_width,"
         "gain_vs_q_mixed,gain_vs_top_n,solve_seconds,iterations,status";
}

std::string SweepRow::to_csv(long sessions, std::uint64_t seed) const {
  std::ostringstream os;
  os.precision(10);
  std::string clean = status;
  std::replace(clean.begin(), clean.end(), ',', ';');
  std::replace(clean.begin(), clean.end(), '\n', ' ');
  os << point << ',' << policy << ',' << model.mean_session_length() << ',' << model.lambda << ','
     << model.q << ',' << model.alpha << ',' << model.batch_size << ',' << sessions << ',' << seed
     << ',' << metrics.mean_cost << ',' << metrics.mean_quality << ',' << metrics.hit_probability
     << ',' << metrics.mean_length << ',' << metrics.cost_half_width << ','
     << metrics.quality_half_width << ',' << metrics.hit_half_width << ',' << gain_vs_q_mixed << ','
     << gain_vs_top_n << ',' << solve_seconds << ',' << iterations << ',' << clean;
  return os.str();
}

std::vector<SweepRow> run_sweep(const Instance& instance, const ExperimentConfig& config) {
  const std::vector<UserModel> grid = config.grid();
  std::vector<std::vector<SweepRow>> per_point(grid.size());
  std::mutex log_mutex;

  parallel_for(static_cast<int>(grid.size()), config.workers, [&](int point) {
    const UserModel& model = grid[static_cast<std::size_t>(point)];
    std::vector<SweepRow>& rows = per_point[static_cast<std::size_t>(point)];
    auto row_for = [&](const std::string& name) {
      SweepRow r;
      r.point = point;
      r.policy = name;
      r.model = model;
      return r;
    };
    try {
      std::map<std::string, Policy> policies;
      std::map<std::string, UserModel> models;
      SweepRow mdp_row = row_for("mdp");
      for (const auto& name : config.policies) {
        UserModel m = model;
        if (name == "mdp") {
          bool hit = false;
          try {
            PolicyIterationResult r =
                cached_policy_iteration(instance, model, config.solver, config.cache, hit);
            mdp_row.solve_seconds = r.report.total_seconds;
            mdp_row.iterations = r.report.iterations;
            mdp_row.status = hit ? "cached" : "ok";
            policies.emplace(name, std::move(r.policy));
          } catch (const Error& e) {
            mdp_row.status = std::string("error: ") + e.what();
          }
        } else if (name == "q-mixed") {
          policies.emplace(name, q_mixed_policy(instance, model.batch_size, model.q));
        } else if (name == "top-n") {
          policies.emplace(name, top_n_policy(instance, model.batch_size));
        } else if (name == "low-cost") {
          policies.emplace(name, low_cost_policy(instance, model.batch_size));
        } else if (name == "no-rs") {
          m.alpha = 0.0;
          policies.emplace(name, top_n_policy(instance, model.batch_size));
        }
        models[name] = m;
      }
      std::map<std::string, Metrics> metrics;
      for (const auto& name : config.policies) {
        SweepRow r = name == "mdp" ? mdp_row : row_for(name);
        auto it = policies.find(name);
        if (it != policies.end()) {
          r.metrics = run_monte_carlo(instance, it->second, models[name], config.sessions,
                                      config.seed, 1);
          r.model = models[name];
          metrics[name] = r.metrics;
        }
        rows.push_back(std::move(r));
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (auto& r : rows) {
        r.gain_vs_q_mixed = r.gain_vs_top_n = nan;
        if (!metrics.count(r.policy)) continue;
        if (metrics.count("q-mixed") && metrics["q-mixed"].hit_probability > 0.0)
          r.gain_vs_q_mixed = relative_gain(metrics[r.policy], metrics["q-mixed"]);
        if (metrics.count("top-n") && metrics["top-n"].hit_probability > 0.0)
          r.gain_vs_top_n = relative_gain(metrics[r.policy], metrics["top-n"]);
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      spdlog::info("point {} (lambda={}, q={}, alpha={}, N={}) done", point, model.lambda, model.q,
                   model.alpha, model.batch_size);
    } catch (const std::exception& e) {
      rows.clear();
      for (const auto& name : config.policies) {
        SweepRow r = row_for(name);
        r.status = std::string("error: ") + e.what();
        rows.push_back(std::move(r));
      }
    }
  });

  std::vector<SweepRow> all;
  for (auto& rows : per_point)
    for (auto& r : rows) all.push_back(std::move(r));
  return all;
}

}  // namespace nfrec
