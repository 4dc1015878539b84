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

#include "nfrec/mdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <spdlog/spdlog.h>

#include "nfrec/baselines.hpp"
#include "nfrec/inner_solver.hpp"
#include "nfrec/parallel.hpp"
#include "nfrec/quality.hpp"

namespace nfrec {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_dimensions(const Instance& instance, const UserModel& model, const Policy& policy) {
  model.validate();
  if (policy.size() != instance.size())
    throw InvalidArgument("policy and instance sizes differ");
}

std::vector<std::vector<SparseEntry>> policy_support(const Policy& policy) {
  std::vector<std::vector<SparseEntry>> rows(static_cast<std::size_t>(policy.size()));
  for (int i = 0; i < policy.size(); ++i) rows[i] = policy.support(i);
  return rows;
}

// Direct route. With A = I - lambda*(alpha/N)*R and beta = lambda*(1-alpha),
// (I - lambda P) = A - beta * 1 p0', so by Sherman-Morrison
//   v = y + beta * (p0.y / (1 - beta * p0.z)) * z,  A y = rhs,  A z = 1.
class DirectEvaluator {
 public:
  DirectEvaluator(const Instance& instance, const UserModel& model, const Policy& policy)
      : p0_(instance.popularity()), beta_(model.lambda * (1.0 - model.alpha)) {
    const int k = instance.size();
    const double scale = model.lambda * model.alpha / model.batch_size;
    Matrix a = -scale * policy.frequencies();
    a.diagonal().array() += 1.0;
    lu_.compute(a);
    z_ = lu_.solve(Vector::Ones(k));
    denominator_ = 1.0 - beta_ * p0_.dot(z_);
  }

  Vector solve(const Vector& rhs) const {
    Vector y = lu_.solve(rhs);
    return y + (beta_ * p0_.dot(y) / denominator_) * z_;
  }

 private:
  const Vector& p0_;
  double beta_;
  Eigen::PartialPivLU<Matrix> lu_;
  Vector z_;
  double denominator_ = 1.0;
};

Vector evaluate_direct(const Instance& instance, const UserModel& model, const Policy& policy,
                       const EvaluationOptions& options) {
  DirectEvaluator solver(instance, model, policy);
  Vector v = solver.solve(instance.cost());
  for (int refinement = 0; refinement < 4; ++refinement) {
    const Vector residual =
        instance.cost() + model.lambda * apply_transition(instance, model, policy, v) - v;
    if (residual.cwiseAbs().maxCoeff() <= options.tolerance) return v;
    v += solver.solve(residual);
  }
  const double residual = evaluation_residual(instance, model, policy, v);
  if (residual > options.tolerance) {
    std::ostringstream os;
    os << "evaluate_policy: direct solve residual " << residual << " exceeds tolerance "
       << options.tolerance;
    throw SolverError(os.str());
  }
  return v;
}

Vector evaluate_iterative(const Instance& instance, const UserModel& model, const Policy& policy,
                          const EvaluationOptions& options) {
  const auto support = policy_support(policy);
  const Vector& c = instance.cost();
  const Vector& p0 = instance.popularity();
  const double follow = model.alpha / model.batch_size;
  const double reset = 1.0 - model.alpha;
  const int k = instance.size();
  Vector v = c;
  Vector next(k);
  double diff = 0.0;
  for (long sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double mean = reset * p0.dot(v);
    diff = 0.0;
    for (int i = 0; i < k; ++i) {
      double rv = 0.0;
      for (const auto& e : support[i]) rv += e.value * v(e.index);
      next(i) = c(i) + model.lambda * (follow * rv + mean);
      diff = std::max(diff, std::abs(next(i) - v(i)));
    }
    v.swap(next);
    // `diff` is the residual of the previous iterate; the current one is at
    // most lambda times that.
    if (diff <= options.tolerance) return v;
  }
  std::ostringstream os;
  os << "evaluate_policy: fixed-point iteration stopped after " << options.max_sweeps
     << " sweeps with residual " << diff;
  throw SolverError(os.str());
}

}  // namespace

Vector apply_transition(const Instance& instance, const UserModel& model, const Policy& policy,
                        const Vector& values) {
  const double follow = model.alpha / model.batch_size;
  const double mean = (1.0 - model.alpha) * instance.popularity().dot(values);
  Vector out = follow * (policy.frequencies() * values);
  out.array() += mean;
  return out;
}

double evaluation_residual(const Instance& instance, const UserModel& model, const Policy& policy,
                           const Vector& values) {
  const Vector r = values - instance.cost() - model.lambda * apply_transition(instance, model, policy, values);
  return r.cwiseAbs().maxCoeff();
}

Vector evaluate_policy(const Instance& instance, const UserModel& model, const Policy& policy,
                       const EvaluationOptions& options) {
  if (!(model.lambda < 1.0)) throw InvalidArgument("evaluate_policy: requires lambda < 1");
  check_dimensions(instance, model, policy);
  if (model.lambda == 0.0) return instance.cost();
  const bool direct = options.method == EvaluationMethod::kDirect ||
                      (options.method == EvaluationMethod::kAuto &&
                       instance.size() <= options.direct_limit);
  return direct ? evaluate_direct(instance, model, policy, options)
                : evaluate_iterative(instance, model, policy, options);
}

Improvement improve_policy(const Instance& instance, const UserModel& model, const Vector& values,
                           int threads) {
  model.validate();
  const int k = instance.size();
  const int n = model.batch_size;
  if (n >= k) throw InvalidArgument("improve_policy: requires N < K");
  if (values.size() != k) throw InvalidArgument("improve_policy: value vector length mismatch");
  if (!values.allFinite()) throw InvalidArgument("improve_policy: values must be finite");

  Improvement out{Policy::zeros(k, n), Vector::Zero(k)};
  const std::span<const double> weights(values.data(), static_cast<std::size_t>(k));
  parallel_for(k, threads, [&](int i) {
    InnerProblem problem;
    problem.weights = weights;
    problem.similarity = instance.similarity_row(i);
    problem.forbidden = i;
    problem.budget = n;
    problem.quality_threshold = model.q * q_max(instance, i, n);
    try {
      auto solution = solve_inner(problem);
      out.policy.set_row(i, solution.row);
      out.row_objectives(i) = solution.objective;
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("state " + std::to_string(i) + ": " + e.what(), e.achievable_max());
    } catch (const SolverError& e) {
      throw SolverError("state " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

double bellman_optimality_residual(const Instance& instance, const UserModel& model,
                                   const Vector& values, const Vector& row_objectives) {
  const double follow = model.alpha / model.batch_size;
  const double mean = (1.0 - model.alpha) * instance.popularity().dot(values);
  double worst = 0.0;
  for (int i = 0; i < instance.size(); ++i) {
    const double rhs =
        instance.cost(i) + model.lambda * (follow * row_objectives(i) + mean);
    worst = std::max(worst, std::abs(values(i) - rhs));
  }
  return worst;
}

PolicyIterationResult policy_iteration(const Instance& instance, const UserModel& model,
                                       const PolicyIterationConfig& config) {
  model.validate();
  const int k = instance.size();
  if (model.batch_size >= k) throw InvalidArgument("policy_iteration: requires N < K");
  const auto start = Clock::now();

  SolveReport report;
  Policy policy = q_mixed_policy(instance, model.batch_size, model.q);
  if (!validate_policy(instance, policy, model.q).passed)
    policy = top_n_policy(instance, model.batch_size);

  auto evaluate = [&](const Policy& p) {
    const auto t0 = Clock::now();
    Vector v = evaluate_policy(instance, model, p, config.evaluation);
    report.evaluation_seconds += seconds_since(t0);
    report.objective_trace.push_back(instance.popularity().dot(v));
    return v;
  };
  auto improve = [&](const Vector& v) {
    const auto t0 = Clock::now();
    auto result = improve_policy(instance, model, v, config.threads);
    report.improvement_seconds += seconds_since(t0);
    return result;
  };

  Vector values = evaluate(policy);
  Improvement step = improve(values);
  bool step_is_current = true;

  while (true) {
    if (report.iterations >= config.max_iterations) {
      report.total_seconds = seconds_since(start);
      std::ostringstream os;
      os << "policy_iteration: no convergence within " << config.max_iterations << " iterations";
      throw PolicyIterationError(os.str(), {policy, values, report});
    }
    ++report.iterations;

    // Keep incumbent rows unless the new row is strictly better.
    const double tol = 1e-11 * (1.0 + values.cwiseAbs().maxCoeff());
    Policy next = policy;
    for (int i = 0; i < k; ++i) {
      const auto r = policy.row(i);
      double incumbent = 0.0;
      for (int j = 0; j < k; ++j) incumbent += r[j] * values(j);
      if (step.row_objectives(i) < incumbent - tol) next.set_row(i, step.policy.row(i));
    }
    const bool unchanged = next.max_abs_difference(policy) <= 1e-9;
    if (unchanged) {
      report.converged = true;
      break;
    }
    Vector next_values = evaluate(next);
    const double delta = (next_values - values).cwiseAbs().maxCoeff();
    policy = std::move(next);
    values = std::move(next_values);
    step_is_current = false;
    spdlog::debug("policy_iteration: round {} objective {:.12g} max change {:.3g}",
                  report.iterations, report.objective_trace.back(), delta);
    if (delta < config.improvement_threshold) {
      report.converged = true;
      break;
    }
    step = improve(values);
    step_is_current = true;
  }

  if (!step_is_current) step = improve(values);
  report.bellman_residual =
      bellman_optimality_residual(instance, model, values, step.row_objectives);
  report.total_seconds = seconds_since(start);
  return {std::move(policy), std::move(values), std::move(report)};
}

Policy myopic_solve(const Instance& instance, const UserModel& model, int threads) {
  return improve_policy(instance, model, instance.cost(), threads).policy;
}

double time_average_cost(const Instance& instance, const UserModel& model, const Policy& policy,
                         const EvaluationOptions& options) {
  const Vector v = evaluate_policy(instance, model, policy, options);
  return (1.0 - model.lambda) * instance.popularity().dot(v);
}

std::string SolveReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "iterations " << iterations << '\n'
     << "converged " << (converged ? 1 : 0) << '\n'
     << "bellman_residual " << bellman_residual << '\n'
     << "evaluation_seconds " << evaluation_seconds << '\n'
     << "improvement_seconds " << improvement_seconds << '\n'
     << "total_seconds " << total_seconds << '\n'
     << "objective_trace";
  for (double x : objective_trace) os << ' ' << x;
  os << '\n';
  return os.str();
}

std::string SolveReport::csv_header() {
  return "iterations,converged,bellman_residual,evaluation_seconds,improvement_seconds,"
         "total_seconds,final_objective";
}

std::string SolveReport::to_csv_row() const {
  std::ostringstream os;
  os << std::setprecision(17) << iterations << ',' << (converged ? 1 : 0) << ','
     << bellman_residual << ',' << evaluation_seconds << ',' << improvement_seconds << ','
     << total_seconds << ',' << (objective_trace.empty() ? 0.0 : objective_trace.back());
  return os.str();
}

}  // namespace nfrec
