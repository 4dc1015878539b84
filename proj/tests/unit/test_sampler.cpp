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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "nfrec/error.hpp"
#include "nfrec/quality.hpp"
#include "nfrec/random.hpp"
#include "nfrec/sampler.hpp"
#include "oracles.hpp"

namespace nfrec {
namespace {

std::vector<double> random_row(std::mt19937_64& gen, int k, int n) {
  // Capped-simplex point: rescale a random vector until it sums to n with
  // entries in [0,1].
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> r(k);
  for (auto& x : r) x = unit(gen);
  for (int it = 0; it < 200; ++it) {
    const double s = std::accumulate(r.begin(), r.end(), 0.0);
    for (auto& x : r) x = std::min(1.0, x * n / s);
  }
  const double s = std::accumulate(r.begin(), r.end(), 0.0);
  r[0] += n - s;
  return r;
}

TEST(Sampler, DeterministicRowAlwaysSameBatch) {
  const std::vector<double> row{0, 1, 0, 1, 1};
  BatchDistribution dist(row, 3);
  RandomStream stream(1, 0);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(sample_batch(dist, stream), (std::vector<int>{1, 3, 4}));
  const auto one = empirical_marginals(dist, 5, 1, stream);
  EXPECT_EQ(one, row);
}

TEST(Sampler, ThreeItemWorkedExample) {
  const std::vector<double> row{1.0, 0.5, 0.5};
  BatchDistribution dist(row, 2);
  RandomStream stream(2, 0);
  std::map<std::vector<int>, long> counts;
  const long draws = 10000;
  for (long t = 0; t < draws; ++t) ++counts[sample_batch(dist, stream)];
  EXPECT_EQ(counts.size(), 2u);
  const std::vector<int> first{0, 1}, second{0, 2};
  EXPECT_NEAR(counts[first] / double(draws), 0.5, 0.02);
  EXPECT_NEAR(counts[second] / double(draws), 0.5, 0.02);
  const auto m = empirical_marginals(dist, 3, draws, stream);
  EXPECT_NEAR(m[0], 1.0, 0.02);
  EXPECT_NEAR(m[1], 0.5, 0.02);
  EXPECT_NEAR(m[2], 0.5, 0.02);
}

TEST(Sampler, MarginalsMatchRow) {
  std::mt19937_64 gen(3);
  const auto row = random_row(gen, 30, 3);
  BatchDistribution dist(row, 3);
  RandomStream stream(3, 0);
  const auto m = empirical_marginals(dist, 30, 100000, stream);
  double worst = 0.0;
  for (int j = 0; j < 30; ++j) worst = std::max(worst, std::abs(m[j] - row[j]));
  EXPECT_LE(worst, 0.01);
  EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 3.0, 1e-9);
}

TEST(Sampler, ExactlyNDistinctItems) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    const auto row = random_row(gen, 25, n);
    BatchDistribution dist(row, n);
    RandomStream stream(4, trial);
    for (int t = 0; t < 500; ++t) {
      const auto b = sample_batch(dist, stream);
      EXPECT_EQ(static_cast<int>(b.size()), n);
      EXPECT_EQ(std::set<int>(b.begin(), b.end()).size(), b.size());
      for (int j : b) EXPECT_GT(row[j], 0.0);
    }
  }
}

TEST(Sampler, BoundaryOffsets) {
  const std::vector<double> row{0.25, 0.75, 1.0, 0.0, 1.0};
  BatchDistribution dist(row, 3);
  EXPECT_EQ(dist.batch_at(0.0), (std::vector<int>{0, 2, 4}));
  EXPECT_EQ(dist.batch_at(0.25), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(dist.batch_at(std::nextafter(1.0, 0.0)), (std::vector<int>{1, 2, 4}));
}

TEST(Sampler, RejectsBadRows) {
  const std::vector<double> short_row{0.5, 0.5, 0.5};
  EXPECT_THROW(BatchDistribution(short_row, 2), InvalidArgument);
  const std::vector<double> big{1.5, 0.5};
  EXPECT_THROW(BatchDistribution(big, 2), InvalidArgument);
}

TEST(Sampler, ExpectedQualityMatchesClosedForm) {
  const Instance inst = testing::random_instance(20, 5, {.density = 0.8});
  std::mt19937_64 gen(5);
  const int i = 3;
  auto row = random_row(gen, 20, 3);
  row[0] += row[i];
  row[i] = 0.0;
  if (row[0] > 1.0) {
    // Push any excess onto the next item with room.
    double excess = row[0] - 1.0;
    row[0] = 1.0;
    for (int j = 1; j < 20 && excess > 0; ++j) {
      if (j == i) continue;
      const double room = std::min(excess, 1.0 - row[j]);
      row[j] += room;
      excess -= room;
    }
  }
  const double qmax = q_max(inst, i, 3);
  double closed = 0.0;
  for (int j = 0; j < 20; ++j) closed += row[j] * inst.similarity(i, j);
  closed /= qmax;
  BatchDistribution dist(row, 3);
  RandomStream stream(5, 0);
  double total = 0.0;
  const long draws = 100000;
  for (long t = 0; t < draws; ++t) total += batch_quality(inst, i, sample_batch(dist, stream), qmax);
  EXPECT_NEAR(total / draws, closed, 0.01);
}

TEST(RandomStream, StreamsAreReproducibleAndDistinct) {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  for (int t = 0; t < 10; ++t) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  RandomStream d(42, 7);
  EXPECT_NE(d.uniform(), c.uniform());
}

}  // namespace
}  // namespace nfrec
