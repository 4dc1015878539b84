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

#include "nfrec/policy.hpp"

#include <algorithm>
#include <cmath>

#include "nfrec/error.hpp"
#include "nfrec/quality.hpp"

namespace nfrec {

Policy::Policy(Matrix frequencies, int batch_size)
    : frequencies_(std::move(frequencies)), batch_size_(batch_size) {
  if (frequencies_.rows() != frequencies_.cols())
    throw InvalidArgument("policy: frequency matrix must be square");
  if (batch_size_ < 1) throw InvalidArgument("policy: batch size must be >= 1");
}

Policy Policy::zeros(int k, int batch_size) { return Policy(Matrix::Zero(k, k), batch_size); }

void Policy::set_row(int i, std::span<const double> values) {
  if (static_cast<int>(values.size()) != size())
    throw InvalidArgument("policy: row length mismatch");
  std::copy(values.begin(), values.end(), frequencies_.row(i).data());
}

std::vector<SparseEntry> Policy::support(int i) const {
  std::vector<SparseEntry> out;
  for (int j = 0; j < size(); ++j) {
    if (frequencies_(i, j) > 0.0) out.push_back({j, frequencies_(i, j)});
  }
  return out;
}

double Policy::max_abs_difference(const Policy& other) const {
  if (other.size() != size()) throw InvalidArgument("policy: size mismatch");
  return (frequencies_ - other.frequencies_).cwiseAbs().maxCoeff();
}

ValidationReport validate_policy(const Instance& instance, const Policy& policy, double q,
                                 double tolerance) {
  if (policy.size() != instance.size())
    throw InvalidArgument("validate_policy: policy and instance sizes differ");
  const int k = instance.size();
  const int n = policy.batch_size();
  ValidationReport report;
  report.rows.reserve(k);
  for (int i = 0; i < k; ++i) {
    RowViolation v;
    v.row = i;
    const auto r = policy.row(i);
    const auto u = instance.similarity_row(i);
    double sum = 0.0;
    double quality = 0.0;
    for (int j = 0; j < k; ++j) {
      sum += r[j];
      quality += r[j] * u[j];
      v.box = std::max({v.box, -r[j], r[j] - 1.0});
    }
    v.row_sum = std::abs(sum - n);
    v.diagonal = std::abs(r[i]);
    const double qmax = n < k ? q_max(instance, i, n) : 0.0;
    if (qmax > 0.0) {
      v.quality = std::max(0.0, q * qmax - quality);
      v.quality_ratio = quality / qmax;
    }
    v.ok = v.row_sum <= tolerance && v.box <= tolerance && v.diagonal <= tolerance &&
           v.quality <= tolerance;
    report.max_row_sum = std::max(report.max_row_sum, v.row_sum);
    report.max_box = std::max(report.max_box, v.box);
    report.max_diagonal = std::max(report.max_diagonal, v.diagonal);
    report.max_quality = std::max(report.max_quality, v.quality);
    if (!v.ok) ++report.failing_rows;
    report.rows.push_back(v);
  }
  report.passed = report.failing_rows == 0;
  return report;
}

}  // namespace nfrec
