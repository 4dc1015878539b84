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

#include "nfrec/inner_solver.hpp"
#include "nfrec/instance.hpp"

namespace nfrec {

/// Dense LP in bounded-variable standard form:
///   minimize c'x  subject to  A x = b,  lower <= x <= upper.
/// Upper bounds may be +infinity; lower bounds must be finite.
struct BoundedLp {
  Vector cost;
  Matrix constraints;
  Vector rhs;
  Vector lower;
  Vector upper;
};

struct BoundedLpResult {
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};

/// Two-phase bounded-variable primal simplex on a dense tableau with Bland's
/// entering/leaving rule. Intended for small problems (cross-checks, tests).
/// Throws SolverError if infeasible, unbounded, or if the pivot count exceeds
/// `max_pivots` (0 selects a default proportional to the problem size).
BoundedLpResult solve_bounded_simplex(const BoundedLp& lp, int max_pivots = 0);

/// Solves an InnerProblem with the generic simplex above; independent of
/// solve_inner. Limited to K <= 200.
InnerSolution simplex_oracle(const InnerProblem& problem);

}  // namespace nfrec
