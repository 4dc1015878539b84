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
#include <vector>

#include "nfrec/instance.hpp"

namespace nfrec {

/// Item-frequency recommendation policy: r_ij is the probability that item j
/// appears in the batch shown while item i is viewed. Rows sum to the batch
/// size N.
class Policy {
 public:
  Policy(Matrix frequencies, int batch_size);

  /// All-zero K x K policy for batch size N; rows are filled by the caller.
  static Policy zeros(int k, int batch_size);

  int size() const { return static_cast<int>(frequencies_.rows()); }
  int batch_size() const { return batch_size_; }

  const Matrix& frequencies() const { return frequencies_; }
  double operator()(int i, int j) const { return frequencies_(i, j); }

  std::span<const double> row(int i) const {
    return {frequencies_.row(i).data(), static_cast<std::size_t>(size())};
  }
  std::span<double> mutable_row(int i) {
    return {frequencies_.row(i).data(), static_cast<std::size_t>(size())};
  }
  void set_row(int i, std::span<const double> values);

  /// Entries of row i strictly greater than zero.
  std::vector<SparseEntry> support(int i) const;

  /// Largest |r_ij - other_ij| over all entries.
  double max_abs_difference(const Policy& other) const;

 private:
  Matrix frequencies_;
  int batch_size_;
};

struct RowViolation {
  int row = 0;
  double row_sum = 0.0;       ///< |sum_j r_ij - N|
  double box = 0.0;           ///< largest distance of an entry outside [0,1]
  double diagonal = 0.0;      ///< |r_ii|
  double quality = 0.0;       ///< max(0, q * Qmax_i - sum_j r_ij u_ij)
  double quality_ratio = 1.0; ///< sum_j r_ij u_ij / Qmax_i (1 when Qmax_i = 0)
  bool ok = true;
};

struct ValidationReport {
  std::vector<RowViolation> rows;
  double max_row_sum = 0.0;
  double max_box = 0.0;
  double max_diagonal = 0.0;
  double max_quality = 0.0;
  int failing_rows = 0;
  bool passed = true;
};

/// Checks budget, box, self-recommendation and expected-quality constraints
/// row by row at tolerance `tolerance`.
ValidationReport validate_policy(const Instance& instance, const Policy& policy, double q,
                                 double tolerance = 1e-9);

}  // namespace nfrec
