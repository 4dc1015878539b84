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

#include "nfrec/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "nfrec/error.hpp"

namespace nfrec {

Instance::Instance(Matrix similarity, Vector cost, Vector popularity, std::vector<int> cached)
    : similarity_(std::move(similarity)),
      cost_(std::move(cost)),
      popularity_(std::move(popularity)),
      cached_(std::move(cached)) {
  const auto k = cost_.size();
  if (k < 1) throw InvalidArgument("instance: empty catalog");
  if (similarity_.rows() != k || similarity_.cols() != k)
    throw InvalidArgument("instance: similarity matrix must be K x K with K = len(cost)");
  if (popularity_.size() != k) throw InvalidArgument("instance: popularity must have length K");

  similarity_.diagonal().setZero();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double u = similarity_(i, j);
      if (!(u >= 0.0 && u <= 1.0)) {
        std::ostringstream os;
        os << "instance: similarity u(" << i << "," << j << ") = " << u << " outside [0,1]";
        throw InvalidArgument(os.str());
      }
    }
  }

  long double total = 0.0L;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(popularity_(i) > 0.0))
      throw InvalidArgument("instance: popularity must be strictly positive everywhere");
    total += popularity_(i);
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "instance: popularity sums to " << static_cast<double>(total) << ", expected 1";
    throw InvalidArgument(os.str());
  }

  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(cost_(i) >= 0.0) || !std::isfinite(cost_(i)))
      throw InvalidArgument("instance: costs must be finite and non-negative");
  }

  std::sort(cached_.begin(), cached_.end());
  if (std::adjacent_find(cached_.begin(), cached_.end()) != cached_.end())
    throw InvalidArgument("instance: duplicate cached index");
  cached_mask_.assign(static_cast<std::size_t>(k), 0);
  for (int c : cached_) {
    if (c < 0 || c >= k) throw InvalidArgument("instance: cached index out of range");
    cached_mask_[c] = 1;
  }
  if (!cached_.empty() && static_cast<Eigen::Index>(cached_.size()) < k) {
    double max_cached = 0.0;
    double min_uncached = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (cached_mask_[i])
        max_cached = std::max(max_cached, cost_(i));
      else
        min_uncached = std::min(min_uncached, cost_(i));
    }
    if (max_cached > min_uncached)
      throw InvalidArgument("instance: a cached item costs more than an uncached one");
  }

  neighbors_.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (similarity_(i, j) > 0.0)
        neighbors_[i].push_back({static_cast<int>(j), similarity_(i, j)});
    }
    edge_count_ += neighbors_[i].size();
  }
}

void Instance::check_index(int i) const {
  if (i < 0 || i >= size())
    throw InvalidArgument("content index " + std::to_string(i) + " out of range");
}

Vector uniform_popularity(int k) { return Vector::Constant(k, 1.0 / k); }

}  // namespace nfrec
