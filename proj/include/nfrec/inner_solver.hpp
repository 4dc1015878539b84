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

namespace nfrec {

/// Per-state improvement subproblem:
///
///   minimize    sum_j weights[j] * r[j]
///   subject to  sum_j r[j] = budget
///               sum_j similarity[j] * r[j] >= quality_threshold
///               0 <= r[j] <= 1,  r[forbidden] = 0
///
/// The spans are borrowed; they must outlive the call.
struct InnerProblem {
  std::span<const double> weights;
  std::span<const double> similarity;
  int forbidden = 0;
  int budget = 1;
  double quality_threshold = 0.0;

  int size() const { return static_cast<int>(weights.size()); }
  /// Largest achievable sum of similarities (top `budget` entries, forbidden excluded).
  double max_quality() const;
  void validate() const;
};

struct InnerSolution {
  std::vector<double> row;
  double objective = 0.0;
  double quality_slack = 0.0;  ///< sum_j u_j r_j - quality_threshold
  int fractional_count = 0;    ///< entries strictly inside (0,1)
};

/// Optimal basic solution of an InnerProblem with at most two fractional
/// entries.
///
/// The quality constraint is relaxed with a multiplier mu >= 0; for fixed mu
/// the relaxed problem is solved by taking the `budget` smallest scores
/// weights[j] - mu * similarity[j] (ties: lower similarity, then lower index).
/// If mu = 0 already meets the quality floor the result is that greedy set.
/// Otherwise mu is bracketed by doubling and bisection until the greedy sets
/// at the two ends differ by at most one exchange, after which the breakpoints
/// of the piecewise-linear dual are walked exactly: each breakpoint swaps one
/// low-similarity item for a higher one, and the swap that crosses the floor is
/// taken fractionally so the constraint binds exactly.
///
/// Throws InfeasibleError when quality_threshold exceeds max_quality().
InnerSolution solve_inner(const InnerProblem& problem);

/// Builds an InnerSolution (objective, slack, fractional count) for a row.
InnerSolution make_inner_solution(const InnerProblem& problem, std::vector<double> row);

}  // namespace nfrec
