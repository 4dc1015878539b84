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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nfrec/instance.hpp"
#include "nfrec/mdp.hpp"
#include "nfrec/simulator.hpp"

namespace nfrec {

/// Flat key-value configuration. One "key = value" per line, lists separated
/// by commas, '#' starts a comment. Recognized keys:
///
///   instance       path of an instance file (required)
///   out            output directory (default "sweep_out")
///   lbar | lambda  list of mean session lengths or continuation
///                  probabilities (exactly one of the two)
///   q, alpha, n    lists (defaults 0.75, 0.75, 2)
///   policies       subset of mdp, q-mixed, top-n, low-cost, no-rs
///                  (default mdp, q-mixed, top-n)
///   sessions       sessions per simulation (default 1000)
///   seed           simulation seed (default 1)
///   threads        solver threads per grid point (default 1)
///   workers        grid points run concurrently (default 1)
///   tolerance      evaluation tolerance (default 1e-9)
///   epsilon        improvement threshold (default 1e-7)
///   max_iterations policy-iteration cap (default 200)
///   cache          policy cache directory (default <out>/cache; "none" disables)
struct ExperimentConfig {
  std::filesystem::path instance;
  std::filesystem::path out = "sweep_out";
  std::vector<double> lambdas;  ///< resolved from lbar when given that way
  std::vector<double> q{0.75};
  std::vector<double> alpha{0.75};
  std::vector<int> n{2};
  std::vector<std::string> policies{"mdp", "q-mixed", "top-n"};
  long sessions = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  int workers = 1;
  PolicyIterationConfig solver;
  std::filesystem::path cache;  ///< empty: caching disabled

  /// Grid points in a fixed order: lambda, then q, alpha, n.
  std::vector<UserModel> grid() const;
};

/// Throws DataError on unknown keys, bad numbers or conflicting entries.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Cache key of a solve: FNV-1a over the instance fingerprint, the user
/// model and the solver settings.
std::uint64_t policy_cache_key(const Instance& instance, const UserModel& model,
                               const PolicyIterationConfig& solver);

/// policy_iteration, reusing `<cache>/<key>.policy` and `.values` when
/// present. `hit` reports whether the cache answered.
PolicyIterationResult cached_policy_iteration(const Instance& instance, const UserModel& model,
                                              const PolicyIterationConfig& solver,
                                              const std::filesystem::path& cache, bool& hit);

struct SweepRow {
  int point = 0;
  std::string policy;
  UserModel model;
  Metrics metrics;
  double gain_vs_q_mixed = 0.0;  ///< NaN when undefined
  double gain_vs_top_n = 0.0;
  double solve_seconds = 0.0;
  int iterations = 0;
  std::string status = "ok";  ///< "ok", "cached" or an error message

  static std::string csv_header();
  std::string to_csv(long sessions, std::uint64_t seed) const;
};

/// Runs every grid point: solve (or reuse), build baselines, simulate all
/// with the same seed. A failing point yields rows with an error status and
/// the sweep continues. Rows are returned in grid order.
std::vector<SweepRow> run_sweep(const Instance& instance, const ExperimentConfig& config);

}  // namespace nfrec
