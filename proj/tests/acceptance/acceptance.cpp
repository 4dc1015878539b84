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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nfrec/baselines.hpp"
#include "nfrec/batch_mdp.hpp"
#include "nfrec/ingest.hpp"
#include "nfrec/inner_solver.hpp"
#include "nfrec/mdp.hpp"
#include "nfrec/quality.hpp"
#include "nfrec/random.hpp"
#include "nfrec/sampler.hpp"
#include "nfrec/simplex_oracle.hpp"
#include "nfrec/simulator.hpp"
#include "oracles.hpp"

namespace {

using namespace nfrec;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kBaselineCost = 9.9;
constexpr double kBaselineCostTolerance = 0.1;
constexpr double kBaselineSeconds = 10.0;
constexpr double kPolicyMatchTolerance = 1e-9;
constexpr double kPropertySeconds = 30.0;
constexpr double kMyopicTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-8;
constexpr int kMaxFractional = 2;
constexpr double kOracleSeconds = 60.0;
constexpr double kBruteForceTolerance = 1e-6;
constexpr double kDiscountedRelativeTolerance = 0.02;
constexpr double kMarginalTolerance = 0.01;
constexpr double kWorkedExampleTolerance = 0.02;
constexpr double kQualityMargin = 0.02;
constexpr double kSolveTimeRatio = 2.0;
constexpr double kBatchSlowdown = 10.0;
constexpr double kBatchAgreement = 1e-6;
constexpr double kBenchQuality = 0.75;
constexpr double kStationaryRelativeTolerance = 0.01;
constexpr double kTraceTolerance = 1e-7;
constexpr double kBellmanTolerance = 1e-6;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every policy-iteration result produced by the suite, for the monotonicity
// criterion.
struct SolvedRecord {
  std::string label;
  SolveReport report;
};
std::vector<SolvedRecord> g_solved;

PolicyIterationResult solve(const std::string& label, const Instance& inst, const UserModel& m,
                            const PolicyIterationConfig& config = {}) {
  PolicyIterationResult r = policy_iteration(inst, m, config);
  g_solved.push_back({label, r.report});
  return r;
}

Instance synthetic_cached(int k, std::uint64_t seed) {
  return apply_caching(build_synthetic(k, seed).instance, 0.01);
}

// Shared instance set for the property criteria.
std::vector<Instance> property_instances() {
  std::vector<Instance> set;
  for (int s = 0; s < 20; ++s)
    set.push_back(
        testing::random_instance(50, 1000 + s, {.density = 0.3, .cached = 3, .graded_costs = true}));
  return set;
}

int property_n(int s) { return 1 + s % 3; }

constexpr double kPropertyAlpha = 0.8;
constexpr double kPropertyLambda = 0.96;

Outcome baseline_sanity() {
  const auto t0 = Clock::now();
  const Instance inst = synthetic_cached(1000, 1);
  const UserModel model = UserModel::from_mean_length(25.0, 0.0, 0.0, 2);
  const Metrics m = run_monte_carlo(inst, top_n_policy(inst, 2), model, 1000, 2024);
  const double secs = seconds_since(t0);
  const bool ok = inst.cached().size() == 10 &&
                  std::abs(m.mean_cost - kBaselineCost) <= kBaselineCostTolerance &&
                  secs < kBaselineSeconds;
  return {ok, fmt("M=%zu C=%.4f (target %.1f +- %.1f) in %.2fs (< %.0fs)", inst.cached().size(),
                  m.mean_cost, kBaselineCost, kBaselineCostTolerance, secs, kBaselineSeconds)};
}

Outcome property_one() {
  const auto t0 = Clock::now();
  const auto set = property_instances();
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const UserModel model{kPropertyAlpha, 1.0, kPropertyLambda, property_n(s)};
    const auto res = solve("q=1 #" + std::to_string(s), set[s], model);
    worst = std::max(worst, res.policy.max_abs_difference(top_n_policy(set[s], model.batch_size)));
  }
  const double secs = seconds_since(t0);
  return {worst <= kPolicyMatchTolerance && secs < kPropertySeconds,
          fmt("20 instances K=50 N=1..3: max |R - TopN| = %.3g (<= %.0e) in %.2fs (< %.0fs)", worst,
              kPolicyMatchTolerance, secs, kPropertySeconds)};
}

Outcome property_two() {
  const auto t0 = Clock::now();
  const auto set = property_instances();
  int ordering_violations = 0, selection_violations = 0;
  for (int s = 0; s < 20; ++s) {
    const Instance& inst = set[s];
    const int n = property_n(s);
    const UserModel model{kPropertyAlpha, 0.0, kPropertyLambda, n};
    const auto res = solve("q=0 #" + std::to_string(s), inst, model);
    const int k = inst.size();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (inst.cost(i) < inst.cost(j) && !(res.values(i) < res.values(j))) ++ordering_violations;
    for (int i = 0; i < k; ++i) {
      std::vector<double> others;
      for (int j = 0; j < k; ++j)
        if (j != i) others.push_back(inst.cost(j));
      std::nth_element(others.begin(), others.begin() + (n - 1), others.end());
      const double threshold = others[n - 1];
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const double r = res.policy(i, j);
        if (inst.cost(j) < threshold && std::abs(r - 1.0) > kPolicyMatchTolerance)
          ++selection_violations;
        if (inst.cost(j) > threshold && std::abs(r) > kPolicyMatchTolerance) ++selection_violations;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {ordering_violations == 0 && selection_violations == 0 && secs < kPropertySeconds,
          fmt("value/cost ordering violations %d, low-cost selection violations %d, %.2fs (< %.0fs)",
              ordering_violations, selection_violations, secs, kPropertySeconds)};
}

Outcome lambda_zero() {
  const auto set = property_instances();
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Instance& inst = set[s];
    const UserModel model{kPropertyAlpha, 0.6, 0.0, property_n(s)};
    const auto res = solve("lambda=0 #" + std::to_string(s), inst, model);
    const Policy myopic = myopic_solve(inst, model);
    const Vector a = res.policy.frequencies() * inst.cost();
    const Vector b = myopic.frequencies() * inst.cost();
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  return {worst <= kMyopicTolerance,
          fmt("5 instances K=50: max row-objective gap %.3g (<= %.0e)", worst, kMyopicTolerance)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int max_fractional = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 20;
    const int n = 1 + trial % 5;
    const double q = 0.1 * (1 + (trial / 5) % 9);
    std::vector<double> w(k), u(k);
    for (int j = 0; j < k; ++j) {
      w[j] = 20.0 * unit(gen);
      u[j] = unit(gen) < 0.6 ? unit(gen) : 0.0;
    }
    const int forbidden = static_cast<int>(gen() % k);
    InnerProblem p{w, u, forbidden, n, 0.0};
    p.quality_threshold = q * p.max_quality();
    const InnerSolution fast = solve_inner(p);
    const InnerSolution slow = simplex_oracle(p);
    worst = std::max(worst, std::abs(fast.objective - slow.objective));
    max_fractional = std::max(max_fractional, fast.fractional_count);
  }
  const double secs = seconds_since(t0);
  return {worst <= kOracleTolerance && max_fractional <= kMaxFractional && secs < kOracleSeconds,
          fmt("1000 problems K=20: max |obj - oracle| = %.3g (<= %.0e), max fractional %d (<= %d), "
              "%.2fs (< %.0fs)",
              worst, kOracleTolerance, max_fractional, kMaxFractional, secs, kOracleSeconds)};
}

Outcome brute_force() {
  double worst = 0.0;
  int cases = 0;
  for (int k = 4; k <= 6; ++k) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Instance inst =
          testing::random_instance(k, 500 + 10 * k + s, {.density = 0.7, .cached = 1, .graded_costs = true});
      const UserModel model{0.7, 0.0, 0.8, 1};
      const auto res = solve("brute K=" + std::to_string(k), inst, model);
      const Vector best = testing::brute_force_optimal_values(inst, model);
      worst = std::max(worst, (res.values - best).cwiseAbs().maxCoeff());
      ++cases;
    }
  }
  return {worst <= kBruteForceTolerance,
          fmt("%d instances K=4..6: max |v - v_enum| = %.3g (<= %.0e)", cases, worst,
              kBruteForceTolerance)};
}

Outcome discounted_consistency() {
  const Instance inst = testing::random_instance(20, 7, {.density = 0.5, .cached = 2});
  const UserModel model{0.8, 0.5, 0.9, 2};
  const auto res = solve("discounted K=20", inst, model);
  const int start = 4;
  const CostEstimate est = discounted_cost_from(inst, res.policy, model, start, 100000, 99);
  // v includes the cost of the start state; the simulated sum starts at the
  // first request.
  const double expected = (res.values(start) - inst.cost(start)) / model.lambda;
  const double rel = std::abs(est.mean - expected) / expected;
  return {rel <= kDiscountedRelativeTolerance,
          fmt("MC %.4f +- %.4f vs (v(s)-c(s))/lambda = %.4f: rel err %.4f (<= %.2f)", est.mean,
              1.96 * est.standard_error, expected, rel, kDiscountedRelativeTolerance)};
}

Outcome sampler_marginals() {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> row(30);
  for (auto& x : row) x = unit(gen);
  for (int it = 0; it < 200; ++it) {
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& x : row) x = std::min(1.0, x * 3.0 / s);
  }
  row[0] += 3.0 - std::accumulate(row.begin(), row.end(), 0.0);
  BatchDistribution dist(row, 3);
  RandomStream stream(8, 0);
  const auto m = empirical_marginals(dist, 30, 100000, stream);
  double worst = 0.0;
  for (int j = 0; j < 30; ++j) worst = std::max(worst, std::abs(m[j] - row[j]));

  const std::vector<double> example{1.0, 0.5, 0.5};
  BatchDistribution ex(example, 2);
  RandomStream s2(8, 1);
  std::map<std::vector<int>, long> counts;
  const long draws = 100000;
  for (long d = 0; d < draws; ++d) ++counts[sample_batch(ex, s2)];
  const std::vector<int> b12{0, 1}, b13{0, 2};
  const double f12 = counts[b12] / double(draws), f13 = counts[b13] / double(draws);
  const bool ok = worst <= kMarginalTolerance && counts.size() == 2 &&
                  std::abs(f12 - 0.5) <= kWorkedExampleTolerance &&
                  std::abs(f13 - 0.5) <= kWorkedExampleTolerance;
  return {ok, fmt("K=30 N=3 max marginal error %.4f (<= %.2f); worked example {1,2}: %.4f, "
                  "{1,3}: %.4f (0.5 +- %.2f)",
                  worst, kMarginalTolerance, f12, f13, kWorkedExampleTolerance)};
}

Outcome policy_ordering() {
  const Instance inst = synthetic_cached(500, 3);
  const double q = 0.75, alpha = 0.75;
  const int n = 2;
  const long sessions = 20000;
  bool ok = true;
  std::string detail;
  for (double lbar : {5.0, 25.0, 50.0}) {
    const UserModel model = UserModel::from_mean_length(lbar, alpha, q, n);
    const auto res = solve("ordering Lbar=" + fmt("%g", lbar), inst, model);
    const Metrics mdp = run_monte_carlo(inst, res.policy, model, sessions, 31);
    const Metrics mix = run_monte_carlo(inst, q_mixed_policy(inst, n, q), model, sessions, 31);
    const Metrics top = run_monte_carlo(inst, top_n_policy(inst, n), model, sessions, 31);
    const bool point = mdp.mean_cost <= mix.mean_cost && mix.mean_cost <= top.mean_cost &&
                       mdp.mean_quality >= q - kQualityMargin;
    ok = ok && point;
    detail += fmt("%sL=%g: C(MDP)=%.3f C(mix)=%.3f C(top)=%.3f Q(MDP)=%.3f", detail.empty() ? "" : "; ",
                  lbar, mdp.mean_cost, mix.mean_cost, top.mean_cost, mdp.mean_quality);
  }
  return {ok, detail};
}

Outcome n_insensitivity() {
  // (a) item-frequency solve time at K=500 for N=1 and N=5.
  const Instance inst = synthetic_cached(500, 4);
  double t_item[2] = {0.0, 0.0};
  int it_item[2] = {0, 0};
  const int ns[2] = {1, 5};
  for (int m = 0; m < 2; ++m) {
    const UserModel model = UserModel::from_mean_length(25.0, 0.75, 0.75, ns[m]);
    const auto res = solve("timing N=" + std::to_string(ns[m]), inst, model);
    t_item[m] = res.report.total_seconds;
    it_item[m] = res.report.iterations;
  }
  const double ratio = std::max(t_item[0], t_item[1]) / std::min(t_item[0], t_item[1]);

  // (b) batch enumeration against item frequencies at K=150.
  const Instance small = synthetic_cached(150, 5);
  std::vector<double> per_batch, batch_seconds, item_seconds;
  double disagreement = 0.0;
  std::string bench;
  for (int n = 1; n <= 3; ++n) {
    for (double q : {0.0, 1.0, kBenchQuality}) {
      const UserModel model = UserModel::from_mean_length(20.0, 0.75, q, n);
      const BatchMdpResult batch = solve_batch_mdp(small, model);
      const auto item = solve("bench N=" + std::to_string(n) + " q=" + fmt("%g", q), small, model);
      disagreement = std::max(disagreement, (batch.values - item.values).cwiseAbs().maxCoeff());
      if (q != kBenchQuality) continue;
      const double step = batch.improvement_seconds / std::max(1, batch.iterations);
      per_batch.push_back(step / (small.size() * binomial(small.size() - 1, n)));
      batch_seconds.push_back(batch.seconds);
      item_seconds.push_back(item.report.total_seconds);
      bench += fmt(" N=%d: batch %.3fs (%d it) item %.4fs;", n, batch.seconds, batch.iterations,
                   item.report.total_seconds);
    }
  }
  // Time per enumerated batch must not shrink as N grows past the overhead-
  // dominated N=1 case, so total time grows at least as fast as binom(K-1,N).
  const bool superlinear = per_batch[2] > per_batch[1] && batch_seconds[2] > batch_seconds[1] &&
                           batch_seconds[1] > batch_seconds[0];
  const double slowdown = batch_seconds[2] / item_seconds[2];
  const bool ok = ratio <= kSolveTimeRatio && superlinear && slowdown >= kBatchSlowdown &&
                  disagreement <= kBatchAgreement;
  return {ok, fmt("K=500 N=1 %.3fs (%d it) vs N=5 %.3fs (%d it): ratio %.2f (<= %.0f);", t_item[0],
                  it_item[0], t_item[1], it_item[1], ratio, kSolveTimeRatio) +
                  bench +
                  fmt(" per-batch step time %.3g/%.3g/%.3g ns; N=3 slowdown %.0fx (>= %.0fx); "
                      "batch vs item max |dv| %.2g",
                      per_batch[0] * 1e9, per_batch[1] * 1e9, per_batch[2] * 1e9, slowdown,
                      kBatchSlowdown, disagreement)};
}

// Directed edge list in the "src dst" trace format: sparse out-degrees
// (1 + Poisson(4.4), about 5.4 on average), targets biased toward low ids.
std::string youtube_like_edges(int nodes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::poisson_distribution<int> extra(4.4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ostringstream os;
  os << "# src dst\n";
  for (int v = 0; v < nodes; ++v) {
    const int degree = 1 + extra(gen);
    for (int e = 0; e < degree; ++e) {
      int w = static_cast<int>(nodes * unit(gen) * unit(gen));
      if (w == v) w = (w + 1) % nodes;
      os << "v" << v << " v" << w << '\n';
    }
  }
  return os.str();
}

Outcome stationary_consistency() {
  std::istringstream in(youtube_like_edges(1200, 11));
  const IngestResult ingested = build_from_adjacency(read_edge_list(in), 12);
  const Instance inst = apply_caching(ingested.instance, 0.01);
  const UserModel m09{0.8, 0.7, 0.9, 2};
  const UserModel m099{0.8, 0.7, 0.99, 2};
  const auto r09 = solve("stationary lambda=0.9", inst, m09);
  const auto r099 = solve("stationary lambda=0.99", inst, m099);
  // Long-run cost per request of each policy.
  const UserModel limit{0.8, 0.7, 0.9999, 2};
  const double a = time_average_cost(inst, limit, r09.policy);
  const double b = time_average_cost(inst, limit, r099.policy);
  const double rel = std::abs(a - b) / b;
  return {rel <= kStationaryRelativeTolerance,
          fmt("K=%d edges=%zu: stationary cost MDP(0.9) %.4f vs MDP(0.99) %.4f, rel diff %.4f "
              "(<= %.2f)",
              inst.size(), inst.edge_count(), a, b, rel, kStationaryRelativeTolerance)};
}

Outcome monotone_iteration() {
  double worst_increase = 0.0, worst_residual = 0.0;
  std::string worst_label;
  for (const auto& rec : g_solved) {
    const auto& trace = rec.report.objective_trace;
    for (std::size_t t = 1; t < trace.size(); ++t) {
      const double inc = trace[t] - trace[t - 1];
      if (inc > worst_increase) {
        worst_increase = inc;
        worst_label = rec.label;
      }
    }
    worst_residual = std::max(worst_residual, rec.report.bellman_residual);
  }
  return {worst_increase <= kTraceTolerance && worst_residual <= kBellmanTolerance,
          fmt("%zu solves: max objective increase %.3g (<= %.0e)%s, max Bellman residual %.3g "
              "(<= %.0e)",
              g_solved.size(), worst_increase, kTraceTolerance,
              worst_label.empty() ? "" : (" at " + worst_label).c_str(), worst_residual,
              kBellmanTolerance)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "baseline-sanity", baseline_sanity},
      {2, "q1-top-n", property_one},
      {3, "q0-low-cost", property_two},
      {4, "lambda0-myopic", lambda_zero},
      {5, "inner-oracle", oracle_equivalence},
      {6, "brute-force-mdp", brute_force},
      {7, "discounted-simulation", discounted_consistency},
      {8, "sampler-marginals", sampler_marginals},
      {9, "policy-ordering", policy_ordering},
      {10, "n-insensitivity", n_insensitivity},
      {11, "stationary-limit", stationary_consistency},
      {12, "monotone-iteration", monotone_iteration},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %-22s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
