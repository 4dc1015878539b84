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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace nfrec::testing {

Instance random_instance(int k, std::uint64_t seed, const RandomInstanceOptions& options) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix u = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j && unit(gen) < options.density) u(i, j) = unit(gen);
    }
  }
  Vector c(k);
  for (int i = 0; i < k; ++i) {
    if (options.graded_costs)
      c(i) = i < options.cached ? 0.0 : 1.0 + 9.0 * unit(gen);
    else
      c(i) = i < options.cached ? 0.0 : options.uncached_cost;
  }
  Vector p0(k);
  for (int i = 0; i < k; ++i) p0(i) = options.uniform_popularity ? 1.0 : 0.2 + unit(gen);
  p0 /= p0.sum();
  std::vector<int> cached(static_cast<std::size_t>(std::min(options.cached, k)));
  std::iota(cached.begin(), cached.end(), 0);
  return Instance(std::move(u), std::move(c), std::move(p0), std::move(cached));
}

double inner_vertex_optimum(const InnerProblem& problem) {
  // Columns: x_j for j != forbidden, then the surplus s of the quality row.
  std::vector<int> idx;
  for (int j = 0; j < problem.size(); ++j)
    if (j != problem.forbidden) idx.push_back(j);
  const int n = static_cast<int>(idx.size());
  const int cols = n + 1;
  auto a1 = [&](int col) { return col < n ? 1.0 : 0.0; };
  auto a2 = [&](int col) { return col < n ? problem.similarity[idx[col]] : -1.0; };
  auto weight = [&](int col) { return col < n ? problem.weights[idx[col]] : 0.0; };
  const double b1 = problem.budget, b2 = problem.quality_threshold;
  double best = std::numeric_limits<double>::infinity();
  const double tol = 1e-10;

  for (int p = 0; p < cols; ++p) {
    for (int q = p + 1; q < cols; ++q) {
      const double det = a1(p) * a2(q) - a1(q) * a2(p);
      if (std::abs(det) < 1e-12) continue;
      const int free_count = n - (p < n ? 1 : 0) - (q < n ? 1 : 0);
      std::vector<int> nonbasic;
      for (int col = 0; col < n; ++col)
        if (col != p && col != q) nonbasic.push_back(col);
      for (long mask = 0; mask < (1L << free_count); ++mask) {
        double r1 = b1, r2 = b2, obj = 0.0;
        for (int m = 0; m < free_count; ++m) {
          if (mask & (1L << m)) {
            r1 -= a1(nonbasic[m]);
            r2 -= a2(nonbasic[m]);
            obj += weight(nonbasic[m]);
          }
        }
        const double xp = (r1 * a2(q) - a1(q) * r2) / det;
        const double xq = (a1(p) * r2 - r1 * a2(p)) / det;
        auto in_bounds = [&](int col, double x) {
          return x >= -tol && (col == n || x <= 1.0 + tol);
        };
        if (!in_bounds(p, xp) || !in_bounds(q, xq)) continue;
        best = std::min(best, obj + weight(p) * xp + weight(q) * xq);
      }
    }
  }
  return best;
}

Matrix kernel_by_hand(const Instance& instance, const UserModel& model, const Policy& policy) {
  const int k = instance.size();
  Matrix p(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      p(i, j) = model.alpha / model.batch_size * policy(i, j) +
                (1.0 - model.alpha) * instance.popularity()(j);
  return p;
}

Vector dense_evaluation(const Instance& instance, const UserModel& model, const Policy& policy) {
  const int k = instance.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k) -
                      model.lambda * Eigen::MatrixXd(kernel_by_hand(instance, model, policy));
  return a.fullPivLu().solve(instance.cost());
}

Vector brute_force_optimal_values(const Instance& instance, const UserModel& model) {
  const int k = instance.size();
  Vector best = Vector::Constant(k, std::numeric_limits<double>::infinity());
  std::vector<int> choice(static_cast<std::size_t>(k), 0);
  auto target = [](int i, int c) { return c < i ? c : c + 1; };
  while (true) {
    Matrix r = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) r(i, target(i, choice[i])) = 1.0;
    Policy policy(std::move(r), 1);
    best = best.cwiseMin(dense_evaluation(instance, model, policy));
    int pos = 0;
    while (pos < k && ++choice[pos] == k - 1) choice[pos++] = 0;
    if (pos == k) break;
  }
  return best;
}

Vector two_state_values(double c0, double c1, double p0, double alpha, double lambda) {
  // P = [[ (1-a) p0, a + (1-a)(1-p0) ], [ a + (1-a) p0, (1-a)(1-p0) ]]
  const double p00 = (1 - alpha) * p0, p01 = alpha + (1 - alpha) * (1 - p0);
  const double p10 = alpha + (1 - alpha) * p0, p11 = (1 - alpha) * (1 - p0);
  const double a = 1 - lambda * p00, b = -lambda * p01;
  const double c = -lambda * p10, d = 1 - lambda * p11;
  const double det = a * d - b * c;
  Vector v(2);
  v << (d * c0 - b * c1) / det, (a * c1 - c * c0) / det;
  return v;
}

double sorted_top_sum(const Instance& instance, int i, int n) {
  std::vector<double> row;
  for (int j = 0; j < instance.size(); ++j)
    if (j != i) row.push_back(instance.similarity(i, j));
  std::sort(row.begin(), row.end(), std::greater<>());
  return std::accumulate(row.begin(), row.begin() + n, 0.0);
}

}  // namespace nfrec::testing
