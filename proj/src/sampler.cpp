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

#include "nfrec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nfrec/error.hpp"

namespace nfrec {

BatchDistribution::BatchDistribution(std::span<const double> marginals, int batch_size)
    : batch_size_(batch_size) {
  if (batch_size < 1) throw InvalidArgument("batch distribution: N must be >= 1");
  double total = 0.0;
  cumulative_.push_back(0.0);
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    const double r = marginals[j];
    if (!(r >= -1e-12 && r <= 1.0 + 1e-12))
      throw InvalidArgument("batch distribution: marginal outside [0,1]");
    if (r <= 0.0) continue;
    items_.push_back(static_cast<int>(j));
    total += std::min(r, 1.0);
    cumulative_.push_back(total);
  }
  if (std::abs(total - batch_size) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "batch distribution: marginals sum to " << total << ", expected " << batch_size;
    throw InvalidArgument(os.str());
  }
}

std::vector<int> BatchDistribution::batch_at(double phi) const {
  std::vector<int> batch;
  batch.reserve(static_cast<std::size_t>(batch_size_));
  const auto count = static_cast<std::ptrdiff_t>(items_.size());
  std::ptrdiff_t m = -1;
  for (int slot = 0; slot < batch_size_; ++slot) {
    const double point = phi + slot;
    // First interval whose upper end exceeds the point.
    std::ptrdiff_t found =
        std::upper_bound(cumulative_.begin() + 1 + (m + 1), cumulative_.end(), point) -
        cumulative_.begin() - 1;
    // phi + slot can round onto an interval boundary; positions must stay
    // strictly increasing and leave room for the remaining slots.
    found = std::clamp(found, m + 1, count - (batch_size_ - slot));
    m = found;
    batch.push_back(items_[static_cast<std::size_t>(m)]);
  }
  return batch;
}

std::vector<int> sample_batch(const BatchDistribution& distribution, RandomStream& stream) {
  return distribution.batch_at(stream.uniform());
}

std::vector<double> empirical_marginals(const BatchDistribution& distribution, int size, long draws,
                                        RandomStream& stream) {
  if (draws < 1) throw InvalidArgument("empirical_marginals: draws must be >= 1");
  std::vector<double> counts(static_cast<std::size_t>(size), 0.0);
  for (long d = 0; d < draws; ++d) {
    for (int j : sample_batch(distribution, stream)) counts[j] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(draws);
  return counts;
}

}  // namespace nfrec
