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

#include <cmath>
#include <sstream>

#include "nfrec/baselines.hpp"
#include "nfrec/error.hpp"
#include "nfrec/mdp.hpp"
#include "nfrec/simulator.hpp"
#include "oracles.hpp"

namespace nfrec {
namespace {

using testing::random_instance;

TEST(Session, LambdaZeroHasOneRequest) {
  const Instance inst = random_instance(10, 31);
  const SessionSimulator sim(inst, top_n_policy(inst, 2), {0.5, 0.0, 0.0, 2});
  for (std::uint64_t s = 0; s < 200; ++s) {
    RandomStream stream(1, s);
    const SessionTrace t = sim.simulate(stream);
    EXPECT_EQ(t.length(), 1);
    EXPECT_EQ(t.states.size(), 2u);
    EXPECT_EQ(t.qualities.size(), 2u);
    EXPECT_EQ(t.costs[0], inst.cost(t.states[1]));
  }
}

TEST(Session, MeanLengthWithinThreeStandardErrors) {
  const Instance inst = random_instance(10, 32);
  const UserModel model{0.5, 0.0, 0.8, 2};
  const Metrics m = run_monte_carlo(inst, top_n_policy(inst, 2), model, 20000, 5);
  // Geometric on {1,2,...} with mean 1/(1-lambda): variance lambda/(1-lambda)^2.
  const double se = std::sqrt(model.lambda) / (1 - model.lambda) / std::sqrt(20000.0);
  EXPECT_NEAR(m.mean_length, model.mean_session_length(), 3 * se);
}

TEST(Session, NoFollowingGivesPopularityDistribution) {
  const Instance inst = random_instance(20, 33);
  const UserModel model{0.0, 0.0, 0.5, 2};
  const SessionSimulator sim(inst, top_n_policy(inst, 2), model);
  RandomStream stream(6, 0);
  const long requests = 100000;
  const SessionTrace t = sim.simulate_from(0, requests, stream);
  std::vector<double> freq(20, 0.0);
  for (std::size_t s = 1; s < t.states.size(); ++s) freq[t.states[s]] += 1.0 / requests;
  double tv = 0.0;
  for (int j = 0; j < 20; ++j) tv += 0.5 * std::abs(freq[j] - inst.popularity()(j));
  EXPECT_LE(tv, 0.02);
  for (char f : t.followed) EXPECT_EQ(f, 0);
}

TEST(Session, AbsorbingCacheDrivesCostDown) {
  // Cached items 0 and 1 recommend each other; every other item recommends 0.
  const int k = 20;
  Matrix u = Matrix::Constant(k, k, 0.3);
  Vector c = Vector::Constant(k, 10.0);
  c(0) = c(1) = 0.0;
  Instance inst(u, c, uniform_popularity(k), {0, 1});
  Matrix r = Matrix::Zero(k, k);
  r(0, 1) = 1.0;
  for (int i = 1; i < k; ++i) r(i, 0) = 1.0;
  const UserModel model{0.999, 0.0, 0.999, 1};
  const Metrics m = run_monte_carlo(inst, Policy(r, 1), model, 200, 7);
  EXPECT_LT(m.mean_cost, 0.1);
  EXPECT_GT(m.hit_probability, 0.99);
}

TEST(MonteCarlo, NoRecommenderBaseline) {
  const Instance inst = random_instance(200, 34, {.cached = 2, .uniform_popularity = true});
  const Metrics m = run_monte_carlo(inst, top_n_policy(inst, 2), {0.0, 0.0, 0.96, 2}, 1000, 8);
  EXPECT_NEAR(m.mean_cost, 9.9, 0.1);
}

TEST(MonteCarlo, TopNQualityIsExactlyOne) {
  const Instance inst = random_instance(30, 35, {.density = 1.0});
  const Metrics m = run_monte_carlo(inst, top_n_policy(inst, 3), {0.7, 1.0, 0.9, 3}, 300, 9);
  EXPECT_EQ(m.mean_quality, 1.0);
}

TEST(MonteCarlo, BinaryCostIdentity) {
  const Instance inst = random_instance(30, 36, {.cached = 3});
  const Metrics m = run_monte_carlo(inst, q_mixed_policy(inst, 2, 0.5), {0.7, 0.5, 0.9, 2}, 500, 10);
  EXPECT_NEAR(m.mean_cost, 10.0 * (1.0 - m.hit_probability), 1e-9);
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
  const Instance inst = random_instance(30, 37);
  const Policy r = q_mixed_policy(inst, 2, 0.5);
  const UserModel model{0.7, 0.5, 0.9, 2};
  const Metrics a = run_monte_carlo(inst, r, model, 400, 11, 1);
  const Metrics b = run_monte_carlo(inst, r, model, 400, 11, 4);
  EXPECT_EQ(metrics_csv_row("x", model, a), metrics_csv_row("x", model, b));
}

TEST(MonteCarlo, QualityFloorHoldsOnAverage) {
  const Instance inst = random_instance(40, 38);
  const UserModel model{0.7, 0.6, 0.98, 2};
  const Metrics m = run_monte_carlo(inst, q_mixed_policy(inst, 2, 0.6), model, 2000, 12);
  EXPECT_GE(m.mean_quality, 0.6 - 0.02);
}

TEST(MonteCarlo, DiscountedCostMatchesEvaluation) {
  const Instance inst = random_instance(20, 39);
  const UserModel model{0.8, 0.5, 0.9, 2};
  const Policy r = q_mixed_policy(inst, 2, 0.5);
  const Vector v = evaluate_policy(inst, model, r);
  const int start = 5;
  const CostEstimate est = discounted_cost_from(inst, r, model, start, 20000, 13);
  const double expected = (v(start) - inst.cost(start)) / model.lambda;
  EXPECT_NEAR(est.mean, expected, 0.02 * expected);
  const CostEstimate session = session_cost_from(inst, r, model, start, 20000, 14);
  EXPECT_NEAR(session.mean, expected, 0.03 * expected);
}

TEST(MonteCarlo, RejectsMismatchedPolicy) {
  const Instance inst = random_instance(10, 40);
  const Instance other = random_instance(12, 40);
  EXPECT_THROW(run_monte_carlo(inst, top_n_policy(other, 2), {0.5, 0.0, 0.5, 2}, 10, 1), DataError);
  EXPECT_THROW(run_monte_carlo(inst, top_n_policy(inst, 2), {0.5, 0.0, 0.5, 3}, 10, 1), DataError);
}

TEST(RelativeGain, Arithmetic) {
  Metrics a, b;
  a.hit_probability = 0.3;
  b.hit_probability = 0.2;
  EXPECT_NEAR(relative_gain(a, b), 50.0, 1e-12);
  EXPECT_EQ(relative_gain(a, a), 0.0);
  b.hit_probability = 0.0;
  EXPECT_THROW(relative_gain(a, b), InvalidArgument);
}

TEST(Trace, WritesOneLinePerViewedItem) {
  const Instance inst = random_instance(10, 41);
  const SessionSimulator sim(inst, top_n_policy(inst, 2), {0.5, 0.0, 0.5, 2});
  RandomStream stream(1, 1);
  const SessionTrace t = sim.simulate_from(3, 4, stream);
  std::ostringstream os;
  t.write(os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.rfind("0 3 0 ", 0), 0u);
}

TEST(Metrics, CsvShape) {
  const auto header = metrics_csv_header();
  Metrics m;
  const auto row = metrics_csv_row("run", {0.5, 0.5, 0.9, 2}, m);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

}  // namespace
}  // namespace nfrec
