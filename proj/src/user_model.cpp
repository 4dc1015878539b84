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

#include "nfrec/user_model.hpp"

#include <cmath>
#include <sstream>

#include "nfrec/error.hpp"

namespace nfrec {

UserModel UserModel::from_mean_length(double mean_length, double alpha, double q, int batch_size) {
  if (!(mean_length >= 1.0)) throw InvalidArgument("mean session length must be >= 1");
  UserModel m{alpha, q, 1.0 - 1.0 / mean_length, batch_size};
  m.validate();
  return m;
}

void UserModel::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0,1)");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in [0,1)");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in [0,1]");
  if (batch_size < 1) throw InvalidArgument("batch size N must be >= 1");
}

CuriousClick::CuriousClick(double alpha, int batch_size) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0,1)");
  if (batch_size < 1) throw InvalidArgument("batch size N must be >= 1");
  per_item_ = alpha / batch_size;
}

Matrix transition_matrix(const Instance& instance, const Policy& policy, const UserModel& model,
                         const ClickModel& clicks) {
  model.validate();
  const int k = instance.size();
  if (policy.size() != k) throw InvalidArgument("transition_matrix: policy size mismatch");
  const Vector& p0 = instance.popularity();
  Matrix p(k, k);
  for (int i = 0; i < k; ++i) {
    const auto u = instance.similarity_row(i);
    const auto r = policy.row(i);
    double followed = 0.0;
    for (int j = 0; j < k; ++j) {
      const double a = clicks.click_probability(i, j, u, r);
      p(i, j) = a * r[j];
      followed += p(i, j);
    }
    if (!(followed < 1.0)) {
      std::ostringstream os;
      os << "transition_matrix: row " << i << " follows recommendations with probability "
         << followed << " (must be < 1)";
      throw InvalidArgument(os.str());
    }
    const double reset = 1.0 - followed;
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      p(i, j) += reset * p0(j);
      sum += p(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os.precision(17);
      os << "transition_matrix: row " << i << " sums to " << sum;
      throw ConsistencyError(os.str());
    }
  }
  return p;
}

Matrix transition_matrix(const Instance& instance, const Policy& policy, const UserModel& model) {
  return transition_matrix(instance, policy, model, CuriousClick(model));
}

}  // namespace nfrec
