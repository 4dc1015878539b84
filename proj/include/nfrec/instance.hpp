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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nfrec {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct SparseEntry {
  int index;
  double value;
};

/// A content catalog: similarity matrix U, delivery costs c, popularity p0
/// and the cached set. Immutable once built; safe to share across threads.
///
/// Invariants checked on construction:
///   u_ij in [0,1] and u_ii = 0 (the diagonal is forced to zero);
///   p0 sums to 1 within 1e-12 and is strictly positive;
///   c_i >= 0 and every cached item costs no more than any uncached one.
class Instance {
 public:
  Instance(Matrix similarity, Vector cost, Vector popularity, std::vector<int> cached);

  int size() const { return static_cast<int>(cost_.size()); }

  const Matrix& similarity() const { return similarity_; }
  double similarity(int i, int j) const { return similarity_(i, j); }
  std::span<const double> similarity_row(int i) const {
    return {similarity_.row(i).data(), static_cast<std::size_t>(size())};
  }
  /// Nonzero entries of row i of U, ascending by index.
  std::span<const SparseEntry> neighbors(int i) const { return neighbors_[i]; }
  std::size_t edge_count() const { return edge_count_; }

  const Vector& cost() const { return cost_; }
  double cost(int i) const { return cost_(i); }
  const Vector& popularity() const { return popularity_; }

  /// Cached indices, ascending.
  const std::vector<int>& cached() const { return cached_; }
  bool is_cached(int i) const { return cached_mask_[i] != 0; }

  void check_index(int i) const;

 private:
  Matrix similarity_;
  Vector cost_;
  Vector popularity_;
  std::vector<int> cached_;
  std::vector<char> cached_mask_;
  std::vector<std::vector<SparseEntry>> neighbors_;
  std::size_t edge_count_ = 0;
};

/// Uniform popularity vector of length k.
Vector uniform_popularity(int k);

}  // namespace nfrec
