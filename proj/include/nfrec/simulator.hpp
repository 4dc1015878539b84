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
#include <iosfwd>
#include <string>
#include <vector>

#include "nfrec/instance.hpp"
#include "nfrec/policy.hpp"
#include "nfrec/random.hpp"
#include "nfrec/sampler.hpp"
#include "nfrec/user_model.hpp"

namespace nfrec {

/// One simulated session. states[0] is the entry item; states[1..L] are the
/// L requests. costs[t-1] = c(states[t]) for t >= 1, so the entry item is not
/// charged. qualities has one entry per viewed item (L + 1), the normalized
/// quality of the batch shown there. followed[t-1] tells whether request t
/// came from a recommendation click.
struct SessionTrace {
  std::vector<int> states;
  std::vector<double> costs;
  std::vector<double> qualities;
  std::vector<char> followed;

  int length() const { return static_cast<int>(costs.size()); }
  /// Writes one line per viewed item: "t state cost quality followed".
  void write(std::ostream& out) const;
};

struct Metrics {
  double mean_cost = 0.0;     ///< mean over sessions of the per-request cost
  double mean_quality = 0.0;  ///< mean over sessions of the per-view quality
  double hit_probability = 0.0;
  double mean_length = 0.0;
  long sessions = 0;
  double cost_half_width = 0.0;  ///< 95% normal-approximation half-widths
  double quality_half_width = 0.0;
  double hit_half_width = 0.0;
};

/// Precomputed per-row samplers and quality normalizers for a policy.
class SessionSimulator {
 public:
  SessionSimulator(const Instance& instance, const Policy& policy, const UserModel& model);

  /// Entry item drawn from p0; session length L >= 1 with P(L = l) =
  /// (1 - lambda) lambda^(l-1). At each viewed item a batch is sampled and
  /// scored; with probability alpha the user clicks a uniformly chosen batch
  /// item, otherwise jumps according to p0.
  SessionTrace simulate(RandomStream& stream) const;

  /// Same dynamics, started at `start`, for exactly `length` requests.
  SessionTrace simulate_from(int start, long length, RandomStream& stream) const;

  const Instance& instance() const { return instance_; }
  const UserModel& model() const { return model_; }

 private:
  int next_state(const std::vector<int>& batch, RandomStream& stream, bool& followed) const;
  int draw_popular(RandomStream& stream) const;
  void view(int state, SessionTrace& trace, RandomStream& stream, std::vector<int>& batch) const;

  const Instance& instance_;
  UserModel model_;
  std::vector<BatchDistribution> rows_;
  std::vector<double> qmax_;
  std::vector<double> popularity_cdf_;
};

SessionTrace simulate_session(const Instance& instance, const Policy& policy,
                              const UserModel& model, RandomStream& stream);

/// Monte Carlo over `sessions` sessions; session s uses stream (seed, s), so
/// results do not depend on the thread count.
Metrics run_monte_carlo(const Instance& instance, const Policy& policy, const UserModel& model,
                        long sessions, std::uint64_t seed, int threads = 1);

/// (hit_a - hit_ref) / hit_ref * 100. Throws InvalidArgument if hit_ref = 0.
double relative_gain(const Metrics& a, const Metrics& reference);

struct CostEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean total cost sum_{t=1..L} c(S_t) of random-length sessions from `start`.
CostEstimate session_cost_from(const Instance& instance, const Policy& policy,
                               const UserModel& model, int start, long sessions,
                               std::uint64_t seed);

/// Mean discounted cost sum_{t>=1} lambda^(t-1) c(S_t) from `start`, with the
/// horizon truncated once lambda^t falls below `truncation`.
CostEstimate discounted_cost_from(const Instance& instance, const Policy& policy,
                                  const UserModel& model, int start, long sessions,
                                  std::uint64_t seed, double truncation = 1e-12);

std::string metrics_csv_header();
/// experiment id, lambda, q, alpha, N, mean cost, mean quality, hit rate,
/// sessions, half-widths.
std::string metrics_csv_row(const std::string& experiment, const UserModel& model,
                            const Metrics& metrics);

}  // namespace nfrec
