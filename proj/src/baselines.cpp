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

#include "nfrec/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "nfrec/error.hpp"
#include "nfrec/quality.hpp"

namespace nfrec {
namespace {

void check_batch(const Instance& instance, int n) {
  if (n < 1 || n >= instance.size()) throw InvalidArgument("baseline: requires 1 <= N < K");
}

// All items except i, cheapest first (ties: lower index).
std::vector<int> cost_ranking(const Instance& instance, int i) {
  std::vector<int> order;
  order.reserve(instance.size() - 1);
  for (int j = 0; j < instance.size(); ++j)
    if (j != i) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return instance.cost(a) < instance.cost(b); });
  return order;
}

}  // namespace

Policy top_n_policy(const Instance& instance, int n) {
  check_batch(instance, n);
  Policy policy = Policy::zeros(instance.size(), n);
  for (int i = 0; i < instance.size(); ++i) {
    auto row = policy.mutable_row(i);
    for (int j : top_n_set(instance, i, n)) row[j] = 1.0;
  }
  return policy;
}

std::vector<int> lowest_cost_set(const Instance& instance, int i, int n) {
  instance.check_index(i);
  check_batch(instance, n);
  auto order = cost_ranking(instance, i);
  order.resize(n);
  return order;
}

Policy low_cost_policy(const Instance& instance, int n) {
  check_batch(instance, n);
  Policy policy = Policy::zeros(instance.size(), n);
  for (int i = 0; i < instance.size(); ++i) {
    auto row = policy.mutable_row(i);
    for (int j : lowest_cost_set(instance, i, n)) row[j] = 1.0;
  }
  return policy;
}

Policy q_mixed_policy(const Instance& instance, int n, double q) {
  check_batch(instance, n);
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("q_mixed_policy: q must lie in [0,1]");
  Policy policy = Policy::zeros(instance.size(), n);
  for (int i = 0; i < instance.size(); ++i) {
    auto row = policy.mutable_row(i);
    for (int j : top_n_set(instance, i, n)) row[j] += q;
    const auto ranking = cost_ranking(instance, i);
    for (int r = 0; r < n; ++r) row[ranking[r]] += 1.0 - q;

    double excess = 0.0;
    for (double& value : row) {
      if (value > 1.0) {
        excess += value - 1.0;
        value = 1.0;
      }
    }
    for (int j : ranking) {
      if (excess <= 0.0) break;
      const double room = 1.0 - row[j];
      const double moved = std::min(room, excess);
      row[j] += moved;
      excess -= moved;
    }
  }
  return policy;
}

}  // namespace nfrec
