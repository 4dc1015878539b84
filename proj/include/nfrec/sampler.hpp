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

#include "nfrec/random.hpp"

namespace nfrec {

/// Turns one policy row (marginals r_j in [0,1] summing to N) into a sampler
/// of N-item batches whose inclusion probabilities are exactly r_j.
///
/// Systematic sampling: items are laid out on [0, N) in ascending index
/// order, each occupying an interval of length r_j; one offset phi ~ U[0,1)
/// selects the items covering phi, phi+1, ..., phi+N-1. Since no interval is
/// longer than one, the N items are distinct.
class BatchDistribution {
 public:
  BatchDistribution(std::span<const double> marginals, int batch_size);

  int batch_size() const { return batch_size_; }
  std::span<const int> items() const { return items_; }
  /// Prefix sums over items(), with a trailing total.
  std::span<const double> cumulative() const { return cumulative_; }

  /// The batch selected by offset phi in [0,1). Ascending item order.
  std::vector<int> batch_at(double phi) const;

 private:
  std::vector<int> items_;          // items with positive marginal
  std::vector<double> cumulative_;  // cumulative_[m] = sum of marginals of items_[0..m)
  int batch_size_;
};

/// One batch drawn with a fresh offset from `stream`.
std::vector<int> sample_batch(const BatchDistribution& distribution, RandomStream& stream);

/// Fraction of `draws` batches containing each item. Length `size`.
std::vector<double> empirical_marginals(const BatchDistribution& distribution, int size, long draws,
                                        RandomStream& stream);

}  // namespace nfrec
