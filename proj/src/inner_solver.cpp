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

#include "nfrec/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nfrec/error.hpp"

namespace nfrec {
namespace {

constexpr int kMaxBisections = 200;
constexpr int kMaxDoublings = 1100;
constexpr double kResidualTolerance = 1e-10;

double quality_tolerance(double threshold) { return 1e-12 * std::max(1.0, std::abs(threshold)); }

class GreedyOracle {
 public:
  explicit GreedyOracle(const InnerProblem& p) : p_(p) {
    candidates_.reserve(p.size());
    for (int j = 0; j < p.size(); ++j)
      if (j != p.forbidden) candidates_.push_back(j);
  }

  // Indices of the `budget` smallest scores at multiplier mu, ascending by index.
  std::vector<int> select(double mu) {
    const auto w = p_.weights;
    const auto u = p_.similarity;
    const auto before = [&](int a, int b) {
      const double sa = w[a] - mu * u[a];
      const double sb = w[b] - mu * u[b];
      if (sa != sb) return sa < sb;
      if (u[a] != u[b]) return u[a] < u[b];
      return a < b;
    };
    std::nth_element(candidates_.begin(), candidates_.begin() + (p_.budget - 1), candidates_.end(),
                     before);
    std::vector<int> chosen(candidates_.begin(), candidates_.begin() + p_.budget);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  double quality(const std::vector<int>& set) const {
    double total = 0.0;
    for (int j : set) total += p_.similarity[j];
    return total;
  }

 private:
  const InnerProblem& p_;
  std::vector<int> candidates_;
};

// Number of elements in `a` that are not in `b` (both sorted).
std::size_t set_difference_size(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t count = 0;
  auto ib = b.begin();
  for (int x : a) {
    while (ib != b.end() && *ib < x) ++ib;
    if (ib == b.end() || *ib != x) ++count;
  }
  return count;
}

std::vector<double> binary_row(int size, const std::vector<int>& set) {
  std::vector<double> row(size, 0.0);
  for (int j : set) row[j] = 1.0;
  return row;
}

[[noreturn]] void throw_infeasible(const InnerProblem& p, double achievable) {
  std::ostringstream os;
  os.precision(17);
  os << "inner problem infeasible: quality threshold " << p.quality_threshold
     << " exceeds achievable maximum " << achievable;
  throw InfeasibleError(os.str(), achievable);
}

// Walks the breakpoints of the dual starting from a set that is greedy-optimal
// at mu, performing exchanges until the quality floor is met.
std::vector<double> exchange_walk(const InnerProblem& p, std::vector<int> set, double mu) {
  const int k = p.size();
  const auto w = p.weights;
  const auto u = p.similarity;
  const double tol = quality_tolerance(p.quality_threshold);
  std::vector<char> in_set(k, 0);
  for (int j : set) in_set[j] = 1;
  double quality = 0.0;
  for (int j : set) quality += u[j];

  while (true) {
    int best_out = -1;
    int best_in = -1;
    double best_mu = std::numeric_limits<double>::infinity();
    for (int out : set) {
      for (int in = 0; in < k; ++in) {
        if (in_set[in] || in == p.forbidden || !(u[in] > u[out])) continue;
        const double cross = std::max(mu, (w[in] - w[out]) / (u[in] - u[out]));
        if (cross < best_mu) {
          best_mu = cross;
          best_out = out;
          best_in = in;
        }
      }
    }
    if (best_out < 0) throw_infeasible(p, quality);

    const double gain = u[best_in] - u[best_out];
    const double need = p.quality_threshold - quality;
    mu = best_mu;
    if (gain >= need - tol) {
      double theta = std::clamp(need / gain, 0.0, 1.0);
      if (theta > 1.0 - 1e-12) theta = 1.0;
      std::vector<double> row = binary_row(k, set);
      row[best_out] = 1.0 - theta;
      row[best_in] = theta;
      return row;
    }
    in_set[best_out] = 0;
    in_set[best_in] = 1;
    *std::find(set.begin(), set.end(), best_out) = best_in;
    quality += gain;
  }
}

}  // namespace

double InnerProblem::max_quality() const {
  std::vector<double> values;
  values.reserve(similarity.size());
  for (int j = 0; j < size(); ++j)
    if (j != forbidden) values.push_back(similarity[j]);
  const auto top = std::min<std::size_t>(static_cast<std::size_t>(budget), values.size());
  std::partial_sort(values.begin(), values.begin() + top, values.end(), std::greater<>());
  return std::accumulate(values.begin(), values.begin() + top, 0.0);
}

void InnerProblem::validate() const {
  if (weights.size() != similarity.size())
    throw InvalidArgument("inner problem: weights and similarity lengths differ");
  if (forbidden < 0 || forbidden >= size())
    throw InvalidArgument("inner problem: forbidden index out of range");
  if (budget < 1 || budget + 1 > size())
    throw InvalidArgument("inner problem: requires 1 <= N and K >= N + 1");
  for (int j = 0; j < size(); ++j) {
    if (!std::isfinite(weights[j])) throw InvalidArgument("inner problem: non-finite weight");
  }
}

InnerSolution make_inner_solution(const InnerProblem& problem, std::vector<double> row) {
  InnerSolution s;
  double quality = 0.0;
  for (int j = 0; j < problem.size(); ++j) {
    s.objective += problem.weights[j] * row[j];
    quality += problem.similarity[j] * row[j];
    if (row[j] > 0.0 && row[j] < 1.0) ++s.fractional_count;
  }
  s.quality_slack = quality - problem.quality_threshold;
  s.row = std::move(row);
  return s;
}

InnerSolution solve_inner(const InnerProblem& problem) {
  problem.validate();
  const int k = problem.size();
  const double threshold = problem.quality_threshold;
  const double tol = quality_tolerance(threshold);
  GreedyOracle greedy(problem);

  auto low = greedy.select(0.0);
  double low_quality = greedy.quality(low);
  if (low_quality >= threshold - tol) return make_inner_solution(problem, binary_row(k, low));

  const double achievable = problem.max_quality();
  if (threshold > achievable + tol) throw_infeasible(problem, achievable);

  const auto [wmin, wmax] = std::minmax_element(problem.weights.begin(), problem.weights.end());
  double mu_low = 0.0;
  double mu_high = std::max(1.0, *wmax - *wmin);
  auto high = greedy.select(mu_high);
  for (int it = 0; greedy.quality(high) < threshold - tol; ++it) {
    if (it == kMaxDoublings) throw_infeasible(problem, greedy.quality(high));
    mu_low = mu_high;
    low = std::move(high);
    mu_high *= 2.0;
    high = greedy.select(mu_high);
  }
  low_quality = greedy.quality(low);

  for (int it = 0; it < kMaxBisections; ++it) {
    if (set_difference_size(low, high) <= 1) break;
    if (std::abs(greedy.quality(high) - threshold) < kResidualTolerance) break;
    const double mid = 0.5 * (mu_low + mu_high);
    if (!(mid > mu_low && mid < mu_high)) break;
    auto middle = greedy.select(mid);
    if (greedy.quality(middle) >= threshold - tol) {
      mu_high = mid;
      high = std::move(middle);
    } else {
      mu_low = mid;
      low = std::move(middle);
    }
  }
  return make_inner_solution(problem, exchange_walk(problem, std::move(low), mu_low));
}

}  // namespace nfrec
