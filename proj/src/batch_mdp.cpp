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

#include "nfrec/batch_mdp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nfrec/baselines.hpp"
#include "nfrec/error.hpp"
#include "nfrec/quality.hpp"

namespace nfrec {
namespace {

constexpr double kQualityTolerance = 1e-12;

// All N-subsets of the items other than `self`, with their quality ratio.
struct BatchTable {
  int n = 0;
  std::vector<int> members;  // flat, n per batch
  std::vector<double> quality;

  std::size_t count() const { return quality.size(); }
  const int* batch(std::size_t b) const { return members.data() + b * static_cast<std::size_t>(n); }
};

BatchTable enumerate_batches(const Instance& instance, int self, int n) {
  const int k = instance.size();
  std::vector<int> items;
  items.reserve(static_cast<std::size_t>(k - 1));
  for (int j = 0; j < k; ++j)
    if (j != self) items.push_back(j);
  const double qmax = q_max(instance, self, n);
  const auto u = instance.similarity_row(self);

  BatchTable table;
  table.n = n;
  const auto total = static_cast<std::size_t>(binomial(k - 1, n));
  table.members.reserve(total * static_cast<std::size_t>(n));
  table.quality.reserve(total);
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  const int m = static_cast<int>(items.size());
  while (true) {
    double qsum = 0.0;
    for (int p : pick) {
      table.members.push_back(items[p]);
      qsum += u[items[p]];
    }
    table.quality.push_back(qmax > 0.0 ? qsum / qmax : 1.0);
    int pos = n - 1;
    while (pos >= 0 && pick[pos] == m - n + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int r = pos + 1; r < n; ++r) pick[r] = pick[r - 1] + 1;
  }
  return table;
}

struct Mixture {
  std::size_t a = 0, b = 0;
  double weight_a = 1.0;  // weight on a; b gets the rest
  double objective = 0.0;
};

// min sum_w mu(w) cost(w) s.t. sum_w mu(w) Q(w) >= q, mu a distribution.
// Walks the lower convex hull of the (Q, cost) cloud toward Q = q.
Mixture best_mixture(const BatchTable& table, const std::vector<double>& cost, double q, int state) {
  const std::size_t count = table.count();
  std::size_t cheapest = 0, richest = 0;
  for (std::size_t w = 1; w < count; ++w) {
    if (cost[w] < cost[cheapest] ||
        (cost[w] == cost[cheapest] && table.quality[w] > table.quality[cheapest]))
      cheapest = w;
    if (table.quality[w] > table.quality[richest] ||
        (table.quality[w] == table.quality[richest] && cost[w] < cost[richest]))
      richest = w;
  }
  if (table.quality[cheapest] >= q - kQualityTolerance) return {cheapest, cheapest, 1.0, cost[cheapest]};
  if (table.quality[richest] < q - kQualityTolerance)
    throw InfeasibleError("batch enumeration: state " + std::to_string(state) +
                              " cannot reach the quality floor",
                          table.quality[richest]);

  std::size_t lo = cheapest, hi = richest;  // Q(lo) < q <= Q(hi)
  for (std::size_t guard = 0; guard < count + 2; ++guard) {
    const double slope = (cost[hi] - cost[lo]) / (table.quality[hi] - table.quality[lo]);
    const double line = cost[lo] - slope * table.quality[lo];
    double best = line;
    std::size_t arg = count;
    for (std::size_t w = 0; w < count; ++w) {
      const double value = cost[w] - slope * table.quality[w];
      if (value < best) {
        best = value;
        arg = w;
      }
    }
    const double scale = 1.0 + std::abs(line);
    if (arg == count || best > line - 1e-13 * scale) break;
    if (table.quality[arg] >= q - kQualityTolerance)
      hi = arg;
    else
      lo = arg;
    if (table.quality[lo] >= q - kQualityTolerance) return {lo, lo, 1.0, cost[lo]};
  }
  const double t = (table.quality[hi] - q) / (table.quality[hi] - table.quality[lo]);
  const double weight_lo = std::clamp(t, 0.0, 1.0);
  return {lo, hi, weight_lo, weight_lo * cost[lo] + (1.0 - weight_lo) * cost[hi]};
}

double row_objective(std::span<const double> row, const Vector& values) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * values(static_cast<Eigen::Index>(j));
  return s;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return std::round(r);
}

BatchMdpResult solve_batch_mdp(const Instance& instance, const UserModel& model,
                               const BatchMdpOptions& options) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();
  const int k = instance.size();
  const int n = model.batch_size;
  if (n < 1 || n >= k) throw InvalidArgument("batch enumeration: need 1 <= N < K");
  const double per_state = binomial(k - 1, n);
  if (per_state > options.max_batches_per_state) {
    std::ostringstream os;
    os << "batch enumeration: binom(" << k - 1 << ", " << n << ") = " << per_state
       << " batches per state exceeds the cap of " << options.max_batches_per_state;
    throw InvalidArgument(os.str());
  }

  BatchMdpResult result{q_mixed_policy(instance, n, model.q), Vector(), 0, false, per_state, 0,
                        0.0, 0.0, 0.0};
  using Clock = std::chrono::steady_clock;
  auto since = [](Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  };
  std::vector<double> cost;
  std::vector<double> row(static_cast<std::size_t>(k));
  while (true) {
    const auto eval_start = Clock::now();
    result.values = evaluate_policy(instance, model, result.policy, options.evaluation);
    result.evaluation_seconds += since(eval_start);
    if (result.iterations >= options.max_iterations) break;
    const auto improve_start = Clock::now();
    ++result.iterations;
    const Vector& v = result.values;
    const double tol = 1e-11 * (1.0 + v.cwiseAbs().maxCoeff());
    bool changed = false;
    for (int i = 0; i < k; ++i) {
      const BatchTable table = enumerate_batches(instance, i, n);
      result.batches_enumerated += table.count();
      cost.assign(table.count(), 0.0);
      for (std::size_t w = 0; w < table.count(); ++w) {
        const int* b = table.batch(w);
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += v(b[m]);
        cost[w] = s;
      }
      const Mixture mix = best_mixture(table, cost, model.q, i);
      if (!(mix.objective < row_objective(result.policy.row(i), v) - tol)) continue;
      std::fill(row.begin(), row.end(), 0.0);
      for (int m = 0; m < n; ++m) {
        row[table.batch(mix.a)[m]] += mix.weight_a;
        row[table.batch(mix.b)[m]] += 1.0 - mix.weight_a;
      }
      result.policy.set_row(i, row);
      changed = true;
    }
    result.improvement_seconds += since(improve_start);
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.seconds = since(start);
  if (!result.converged)
    throw SolverError("batch enumeration: no convergence within " +
                      std::to_string(options.max_iterations) + " iterations");
  return result;
}

}  // namespace nfrec
