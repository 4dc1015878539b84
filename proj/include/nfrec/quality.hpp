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

/// The N items j != i with the largest u_ij. Ties are broken by lower cost,
/// then lower index, so the result is fully deterministic. Returned in rank
/// order (most similar first).
std::vector<int> top_n_set(const Instance& instance, int i, int n);

/// Maximum batch quality: the sum of u_ij over top_n_set(i, n).
double q_max(const Instance& instance, int i, int n);

/// Normalized quality of a concrete batch shown at item i. Returns 1.0 when
/// Qmax_i = 0 (an isolated item: the quality floor is vacuous).
double batch_quality(const Instance& instance, int i, std::span<const int> batch);

/// Same as batch_quality with a precomputed Qmax_i.
double batch_quality(const Instance& instance, int i, std::span<const int> batch, double qmax);

}  // namespace nfrec
