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

#include "nfrec/quality.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

#include "nfrec/error.hpp"

namespace nfrec {

std::vector<int> top_n_set(const Instance& instance, int i, int n) {
  instance.check_index(i);
  const int k = instance.size();
  if (n < 1 || n >= k) throw InvalidArgument("top_n_set: requires 1 <= N < K");
  const auto u = instance.similarity_row(i);
  std::vector<int> candidates;
  candidates.reserve(k - 1);
  for (int j = 0; j < k; ++j)
    if (j != i) candidates.push_back(j);
  const auto better = [&](int a, int b) {
    if (u[a] != u[b]) return u[a] > u[b];
    if (instance.cost(a) != instance.cost(b)) return instance.cost(a) < instance.cost(b);
    return a < b;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + n, candidates.end(), better);
  candidates.resize(n);
  return candidates;
}

double q_max(const Instance& instance, int i, int n) {
  const auto top = top_n_set(instance, i, n);
  const auto u = instance.similarity_row(i);
  double total = 0.0;
  for (int j : top) total += u[j];
  return total;
}

double batch_quality(const Instance& instance, int i, std::span<const int> batch, double qmax) {
  if (qmax <= 0.0) {
    spdlog::debug("batch_quality: item {} has Qmax = 0, quality reported as 1", i);
    return 1.0;
  }
  const auto u = instance.similarity_row(i);
  double total = 0.0;
  for (int j : batch) total += u[j];
  return total / qmax;
}

double batch_quality(const Instance& instance, int i, std::span<const int> batch) {
  instance.check_index(i);
  std::vector<int> sorted(batch.begin(), batch.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("batch_quality: batch contains duplicates");
  for (int j : sorted) {
    instance.check_index(j);
    if (j == i) throw InvalidArgument("batch_quality: batch recommends the viewed item");
  }
  return batch_quality(instance, i, batch, q_max(instance, i, static_cast<int>(batch.size())));
}

}  // namespace nfrec
