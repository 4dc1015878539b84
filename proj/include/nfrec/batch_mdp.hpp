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

#include "nfrec/mdp.hpp"

namespace nfrec {

/// Reference solver over explicit batches: every state's action set is the
/// set of N-subsets of the other items, and the improvement step solves the
/// two-constraint LP over batch frequencies exactly (the optimum mixes at
/// most two batches). Cost grows with binom(K-1, N); used for timing
/// comparisons and as a cross-check of the item-frequency solver.
struct BatchMdpOptions {
  EvaluationOptions evaluation;
  double max_batches_per_state = 2e6;  ///< refuse to enumerate beyond this
  int max_iterations = 200;
};

struct BatchMdpResult {
  Policy policy;  ///< item frequencies implied by the batch mixtures
  Vector values;
  int iterations = 0;
  bool converged = false;
  double batches_per_state = 0.0;
  std::size_t batches_enumerated = 0;
  double evaluation_seconds = 0.0;
  double improvement_seconds = 0.0;
  double seconds = 0.0;
};

/// binom(n, k) as a double (no overflow for large arguments).
double binomial(int n, int k);

/// Throws InvalidArgument when binom(K-1, N) exceeds the cap and SolverError
/// when the iteration cap is hit.
BatchMdpResult solve_batch_mdp(const Instance& instance, const UserModel& model,
                               const BatchMdpOptions& options = {});

}  // namespace nfrec
