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

#include "nfrec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nfrec/error.hpp"
#include "nfrec/parallel.hpp"
#include "nfrec/quality.hpp"

namespace nfrec {
namespace {

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double standard_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

constexpr double kZ95 = 1.959963984540054;

}  // namespace

void SessionTrace::write(std::ostream& out) const {
  out << std::setprecision(17);
  for (std::size_t t = 0; t < states.size(); ++t) {
    out << t << ' ' << states[t] << ' ' << (t == 0 ? 0.0 : costs[t - 1]) << ' '
        << (t < qualities.size() ? qualities[t] : 0.0) << ' '
        << (t == 0 ? 0 : static_cast<int>(followed[t - 1])) << '\n';
  }
}

SessionSimulator::SessionSimulator(const Instance& instance, const Policy& policy,
                                   const UserModel& model)
    : instance_(instance), model_(model) {
  model_.validate();
  const int k = instance.size();
  if (policy.size() != k) throw DataError("simulator: policy and instance sizes differ");
  if (policy.batch_size() != model.batch_size)
    throw DataError("simulator: policy batch size differs from the user model");
  if (model.batch_size >= k) throw InvalidArgument("simulator: requires N < K");
  rows_.reserve(static_cast<std::size_t>(k));
  qmax_.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    rows_.emplace_back(policy.row(i), policy.batch_size());
    qmax_[i] = q_max(instance, i, policy.batch_size());
  }
  popularity_cdf_.resize(static_cast<std::size_t>(k));
  double total = 0.0;
  for (int i = 0; i < k; ++i) popularity_cdf_[i] = (total += instance.popularity()(i));
}

int SessionSimulator::draw_popular(RandomStream& stream) const {
  const double x = stream.uniform() * popularity_cdf_.back();
  const auto it = std::upper_bound(popularity_cdf_.begin(), popularity_cdf_.end(), x);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - popularity_cdf_.begin(),
                                                   instance_.size() - 1));
}

void SessionSimulator::view(int state, SessionTrace& trace, RandomStream& stream,
                            std::vector<int>& batch) const {
  batch = sample_batch(rows_[state], stream);
  trace.qualities.push_back(batch_quality(instance_, state, batch, qmax_[state]));
}

int SessionSimulator::next_state(const std::vector<int>& batch, RandomStream& stream,
                                 bool& followed) const {
  followed = stream.bernoulli(model_.alpha);
  if (followed) return batch[stream.below(batch.size())];
  return draw_popular(stream);
}

SessionTrace SessionSimulator::simulate(RandomStream& stream) const {
  SessionTrace trace;
  std::vector<int> batch;
  int state = draw_popular(stream);
  trace.states.push_back(state);
  view(state, trace, stream, batch);
  do {
    bool followed = false;
    state = next_state(batch, stream, followed);
    trace.states.push_back(state);
    trace.costs.push_back(instance_.cost(state));
    trace.followed.push_back(followed ? 1 : 0);
    view(state, trace, stream, batch);
  } while (stream.bernoulli(model_.lambda));
  return trace;
}

SessionTrace SessionSimulator::simulate_from(int start, long length, RandomStream& stream) const {
  instance_.check_index(start);
  SessionTrace trace;
  std::vector<int> batch;
  int state = start;
  trace.states.push_back(state);
  view(state, trace, stream, batch);
  for (long t = 0; t < length; ++t) {
    bool followed = false;
    state = next_state(batch, stream, followed);
    trace.states.push_back(state);
    trace.costs.push_back(instance_.cost(state));
    trace.followed.push_back(followed ? 1 : 0);
    view(state, trace, stream, batch);
  }
  return trace;
}

SessionTrace simulate_session(const Instance& instance, const Policy& policy,
                              const UserModel& model, RandomStream& stream) {
  return SessionSimulator(instance, policy, model).simulate(stream);
}

Metrics run_monte_carlo(const Instance& instance, const Policy& policy, const UserModel& model,
                        long sessions, std::uint64_t seed, int threads) {
  if (sessions < 1) throw InvalidArgument("run_monte_carlo: sessions must be >= 1");
  const SessionSimulator simulator(instance, policy, model);
  const auto n = static_cast<std::size_t>(sessions);
  std::vector<double> cost(n), quality(n), hit(n), length(n);
  parallel_for(static_cast<int>(sessions), threads, [&](int s) {
    RandomStream stream(seed, static_cast<std::uint64_t>(s));
    const SessionTrace trace = simulator.simulate(stream);
    double c = 0.0;
    double h = 0.0;
    for (std::size_t t = 1; t < trace.states.size(); ++t) {
      c += trace.costs[t - 1];
      if (instance.is_cached(trace.states[t])) h += 1.0;
    }
    double qsum = 0.0;
    for (double x : trace.qualities) qsum += x;
    const double l = trace.length();
    cost[s] = c / l;
    hit[s] = h / l;
    quality[s] = qsum / static_cast<double>(trace.qualities.size());
    length[s] = l;
  });

  MeanAccumulator ac, aq, ah, al;
  for (std::size_t s = 0; s < n; ++s) {
    ac.add(cost[s]);
    aq.add(quality[s]);
    ah.add(hit[s]);
    al.add(length[s]);
  }
  Metrics m;
  m.mean_cost = ac.mean();
  m.mean_quality = aq.mean();
  m.hit_probability = ah.mean();
  m.mean_length = al.mean();
  m.sessions = sessions;
  m.cost_half_width = kZ95 * ac.standard_error();
  m.quality_half_width = kZ95 * aq.standard_error();
  m.hit_half_width = kZ95 * ah.standard_error();
  return m;
}

double relative_gain(const Metrics& a, const Metrics& reference) {
  if (!(reference.hit_probability > 0.0))
    throw InvalidArgument("relative_gain: reference hit probability is zero");
  return (a.hit_probability - reference.hit_probability) / reference.hit_probability * 100.0;
}

CostEstimate session_cost_from(const Instance& instance, const Policy& policy,
                               const UserModel& model, int start, long sessions,
                               std::uint64_t seed) {
  if (sessions < 1) throw InvalidArgument("session_cost_from: sessions must be >= 1");
  const SessionSimulator simulator(instance, policy, model);
  MeanAccumulator acc;
  for (long s = 0; s < sessions; ++s) {
    RandomStream stream(seed, static_cast<std::uint64_t>(s));
    long length = 1;
    while (stream.bernoulli(model.lambda)) ++length;
    const SessionTrace trace = simulator.simulate_from(start, length, stream);
    double total = 0.0;
    for (double c : trace.costs) total += c;
    acc.add(total);
  }
  return {acc.mean(), acc.standard_error()};
}

CostEstimate discounted_cost_from(const Instance& instance, const Policy& policy,
                                  const UserModel& model, int start, long sessions,
                                  std::uint64_t seed, double truncation) {
  if (sessions < 1) throw InvalidArgument("discounted_cost_from: sessions must be >= 1");
  const SessionSimulator simulator(instance, policy, model);
  long horizon = 1;
  if (model.lambda > 0.0)
    horizon = std::max(1L, static_cast<long>(std::ceil(std::log(truncation) / std::log(model.lambda))));
  MeanAccumulator acc;
  for (long s = 0; s < sessions; ++s) {
    RandomStream stream(seed, static_cast<std::uint64_t>(s));
    const SessionTrace trace = simulator.simulate_from(start, horizon, stream);
    double total = 0.0;
    double weight = 1.0;
    for (double c : trace.costs) {
      total += weight * c;
      weight *= model.lambda;
    }
    acc.add(total);
  }
  return {acc.mean(), acc.standard_error()};
}

std::string metrics_csv_header() {
  return "experiment,lambda,q,alpha,n,mean_cost,mean_quality,hit_probability,sessions,"
         "cost_half_width,quality_half_width,hit_half_width";
}

std::string metrics_csv_row(const std::string& experiment, const UserModel& model,
                            const Metrics& m) {
  std::ostringstream os;
  os << std::setprecision(12) << experiment << ',' << model.lambda << ',' << model.q << ','
     << model.alpha << ',' << model.batch_size << ',' << m.mean_cost << ',' << m.mean_quality << ','
     << m.hit_probability << ',' << m.sessions << ',' << m.cost_half_width << ','
     << m.quality_half_width << ',' << m.hit_half_width;
  return os.str();
}

}  // namespace nfrec
