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

#include <memory>
#include <string>
#include <vector>

#include "nfrec/error.hpp"
#include "nfrec/instance.hpp"
#include "nfrec/policy.hpp"
#include "nfrec/user_model.hpp"

namespace nfrec {

enum class EvaluationMethod {
  kAuto,       ///< direct below `direct_limit` states, iterative above
  kDirect,     ///< dense LU of I - lambda*(alpha/N)*R plus a rank-one correction
  kIterative,  ///< fixed-point sweeps over the sparse support of R
};

struct EvaluationOptions {
  double tolerance = 1e-9;  ///< bound on ||v - c - lambda P v||_inf
  EvaluationMethod method = EvaluationMethod::kAuto;
  int direct_limit = 4000;
  long max_sweeps = 50'000'000;
};

/// Structured product P v for the curious user:
/// (alpha/N) R v + (1 - alpha) (p0 . v) 1.
Vector apply_transition(const Instance& instance, const UserModel& model, const Policy& policy,
                        const Vector& values);

/// ||v - c - lambda P v||_inf.
double evaluation_residual(const Instance& instance, const UserModel& model, const Policy& policy,
                           const Vector& values);

/// Expected discounted cost-to-go v = c + lambda P v of a fixed policy.
/// Throws InvalidArgument if lambda >= 1 and SolverError when the requested
/// tolerance is not reached.
Vector evaluate_policy(const Instance& instance, const UserModel& model, const Policy& policy,
                       const EvaluationOptions& options = {});

struct Improvement {
  Policy policy;
  Vector row_objectives;  ///< min over feasible rows of sum_j r_ij v(j)
};

/// Greedy step: row i solves the inner problem with weights `values`,
/// similarity row i, forbidden index i and floor q * Qmax_i.
Improvement improve_policy(const Instance& instance, const UserModel& model, const Vector& values,
                           int threads = 0);

struct PolicyIterationConfig {
  EvaluationOptions evaluation;
  double improvement_threshold = 1e-7;
  int max_iterations = 200;
  int threads = 0;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  double bellman_residual = 0.0;
  double evaluation_seconds = 0.0;
  double improvement_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<double> objective_trace;  ///< p0 . v after each evaluation

  std::string to_key_value() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

struct PolicyIterationResult {
  Policy policy;
  Vector values;
  SolveReport report;
};

/// Raised when the iteration cap is hit; carries the best pair found so far.
class PolicyIterationError : public SolverError {
 public:
  PolicyIterationError(const std::string& what, PolicyIterationResult best)
      : SolverError(what), best_(std::make_shared<PolicyIterationResult>(std::move(best))) {}
  const PolicyIterationResult& best() const { return *best_; }

 private:
  std::shared_ptr<const PolicyIterationResult> best_;
};

/// Policy iteration from the q-Mixed policy. Stops when no value moves by
/// more than `improvement_threshold` or the policy stops changing (1e-9).
/// A row is only replaced if the new row is strictly better under the current
/// values, which keeps the objective trace monotone.
PolicyIterationResult policy_iteration(const Instance& instance, const UserModel& model,
                                       const PolicyIterationConfig& config = {});

/// One-step-lookahead optimum: every row minimizes sum_j r_ij c_j.
Policy myopic_solve(const Instance& instance, const UserModel& model, int threads = 0);

/// (1 - lambda) * (p0 . v); tends to the long-run cost per request as
/// lambda -> 1.
double time_average_cost(const Instance& instance, const UserModel& model, const Policy& policy,
                         const EvaluationOptions& options = {});

/// max_i |v(i) - c_i - lambda * min_r sum_j P_ij(r) v(j)|, given the row minima
/// of the improvement step at `values`.
double bellman_optimality_residual(const Instance& instance, const UserModel& model,
                                   const Vector& values, const Vector& row_objectives);

}  // namespace nfrec
