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

#include <span>

#include "nfrec/instance.hpp"
#include "nfrec/policy.hpp"

namespace nfrec {

/// Behavioral parameters of a user session.
struct UserModel {
  double alpha = 0.0;   ///< probability of following a recommendation
  double q = 0.0;       ///< expected-quality floor, in [0,1]
  double lambda = 0.0;  ///< session continuation probability
  int batch_size = 1;   ///< N

  /// lambda = 1 - 1 / mean_length.
  static UserModel from_mean_length(double mean_length, double alpha, double q, int batch_size);

  double mean_session_length() const { return 1.0 / (1.0 - lambda); }

  /// Throws InvalidArgument unless alpha, lambda in [0,1), q in [0,1], N >= 1.
  void validate() const;
};

/// Click-through rule alpha_ij given the viewed item, the candidate, the
/// similarity row and the policy row.
class ClickModel {
 public:
  virtual ~ClickModel() = default;
  virtual double click_probability(int i, int j, std::span<const double> similarity_row,
                                   std::span<const double> policy_row) const = 0;
};

/// The curious user: every recommended item is clicked with probability
/// alpha / N regardless of its relevance.
class CuriousClick final : public ClickModel {
 public:
  CuriousClick(double alpha, int batch_size);
  explicit CuriousClick(const UserModel& model) : CuriousClick(model.alpha, model.batch_size) {}

  double click_probability(int, int, std::span<const double>,
                           std::span<const double>) const override {
    return per_item_;
  }

 private:
  double per_item_;
};

/// P_ij = a_ij r_ij + (1 - sum_l a_il r_il) p0(j). Throws ConsistencyError if
/// a row fails to sum to one.
Matrix transition_matrix(const Instance& instance, const Policy& policy, const UserModel& model,
                         const ClickModel& clicks);

/// Curious-user shorthand.
Matrix transition_matrix(const Instance& instance, const Policy& policy, const UserModel& model);

}  // namespace nfrec
