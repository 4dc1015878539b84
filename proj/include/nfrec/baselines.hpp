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

#include <vector>

#include "nfrec/instance.hpp"
#include "nfrec/policy.hpp"

namespace nfrec {

/// Top-N: every row recommends top_n_set(i, N) deterministically.
Policy top_n_policy(const Instance& instance, int n);

/// N cheapest items other than i; cost ties go to the lower index.
std::vector<int> lowest_cost_set(const Instance& instance, int i, int n);

/// Low Cost: every row recommends lowest_cost_set(i, N).
Policy low_cost_policy(const Instance& instance, int n);

/// q-Mixed: q * (Top-N row) + (1 - q) * (Low Cost row). Entries pushed above
/// one are capped and the excess moves down the low-cost ranking.
Policy q_mixed_policy(const Instance& instance, int n, double q);

}  // namespace nfrec
