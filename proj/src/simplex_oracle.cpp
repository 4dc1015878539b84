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

#include "nfrec/simplex_oracle.hpp"

#include <cmath>
#include <limits>

#include "nfrec/error.hpp"

namespace nfrec {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Tableau {
 public:
  Tableau(Matrix a, Vector b, Vector lower, Vector upper, std::vector<int> basis)
      : t_(std::move(a)), lower_(std::move(lower)), upper_(std::move(upper)),
        basis_(std::move(basis)) {
    const auto n = t_.cols();
    x_ = lower_;
    at_upper_.assign(static_cast<std::size_t>(n), 0);
    is_basic_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t r = 0; r < basis_.size(); ++r) is_basic_[basis_[r]] = static_cast<int>(r);
    // Basis columns are identity on entry; basic values follow from A x = b.
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      double v = b(static_cast<Eigen::Index>(r));
      for (Eigen::Index j = 0; j < n; ++j)
        if (is_basic_[j] < 0) v -= t_(static_cast<Eigen::Index>(r), j) * x_(j);
      x_(basis_[r]) = v;
    }
  }

  // Minimizes cost'x from the current basis. Returns pivot count.
  int optimize(const Vector& cost, int max_pivots, int pivots) {
    const auto m = t_.rows();
    const auto n = t_.cols();
    while (true) {
      int entering = -1;
      double direction = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (is_basic_[j] >= 0 || lower_(j) == upper_(j)) continue;
        double d = cost(j);
        for (Eigen::Index r = 0; r < m; ++r) d -= cost(basis_[r]) * t_(r, j);
        if (!at_upper_[j] && d < -kCostTol) {
          entering = static_cast<int>(j);
          direction = 1.0;
          break;
        }
        if (at_upper_[j] && d > kCostTol) {
          entering = static_cast<int>(j);
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return pivots;
      if (++pivots > max_pivots)
        throw SolverError("bounded simplex: pivot limit reached (possible cycling)");

      // Moving x_e by direction*step changes basic r by -direction*step*t(r,e).
      double step = upper_(entering) - lower_(entering);
      int leaving_row = -1;
      for (Eigen::Index r = 0; r < m; ++r) {
        const double rate = direction * t_(r, entering);
        const int var = basis_[r];
        double limit = kInf;
        if (rate > kPivotTol)
          limit = (x_(var) - lower_(var)) / rate;
        else if (rate < -kPivotTol && std::isfinite(upper_(var)))
          limit = (upper_(var) - x_(var)) / -rate;
        else
          continue;
        limit = std::max(limit, 0.0);
        if (limit < step || (limit == step && leaving_row >= 0 && var < basis_[leaving_row])) {
          step = limit;
          leaving_row = static_cast<int>(r);
        }
      }
      if (!std::isfinite(step)) throw SolverError("bounded simplex: unbounded objective");

      x_(entering) += direction * step;
      for (Eigen::Index r = 0; r < m; ++r) x_(basis_[r]) -= direction * step * t_(r, entering);

      if (leaving_row < 0) {
        at_upper_[entering] = direction > 0 ? 1 : 0;
        continue;
      }
      const int leaving = basis_[leaving_row];
      const double rate = direction * t_(leaving_row, entering);
      at_upper_[leaving] = rate < 0 ? 1 : 0;
      x_(leaving) = at_upper_[leaving] ? upper_(leaving) : lower_(leaving);
      pivot(leaving_row, entering);
      is_basic_[leaving] = -1;
      is_basic_[entering] = leaving_row;
      basis_[leaving_row] = entering;
      at_upper_[entering] = 0;
    }
  }

  void fix_to_zero(int var) { upper_(var) = lower_(var) = 0.0; }
  const Vector& x() const { return x_; }
  const std::vector<int>& basis() const { return basis_; }

  // Pivots a zero-valued basic variable out of the basis where possible.
  void drive_out(int row, int first_excluded) {
    for (Eigen::Index j = 0; j < first_excluded; ++j) {
      if (is_basic_[j] >= 0 || std::abs(t_(row, j)) <= kPivotTol) continue;
      const int leaving = basis_[row];
      pivot(row, static_cast<int>(j));
      is_basic_[leaving] = -1;
      is_basic_[j] = row;
      basis_[row] = static_cast<int>(j);
      at_upper_[j] = 0;
      return;
    }
  }

 private:
  void pivot(int row, int col) {
    const double p = t_(row, col);
    t_.row(row) /= p;
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f != 0.0) t_.row(r) -= f * t_.row(row);
    }
  }

  Matrix t_;
  Vector lower_;
  Vector upper_;
  Vector x_;
  std::vector<int> basis_;
  std::vector<char> at_upper_;
  std::vector<int> is_basic_;
};

}  // namespace

BoundedLpResult solve_bounded_simplex(const BoundedLp& lp, int max_pivots) {
  const auto m = lp.constraints.rows();
  const auto n = lp.constraints.cols();
  if (lp.cost.size() != n || lp.lower.size() != n || lp.upper.size() != n || lp.rhs.size() != m)
    throw InvalidArgument("bounded simplex: dimension mismatch");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower(j)) || lp.upper(j) < lp.lower(j))
      throw InvalidArgument("bounded simplex: invalid bounds");
  }
  if (max_pivots <= 0) max_pivots = static_cast<int>(50 * (n + m) + 100);

  // Phase one: artificial columns n..n+m-1 with signs chosen so that the
  // all-lower-bound start is feasible.
  Matrix a(m, n + m);
  a.setZero();
  a.leftCols(n) = lp.constraints;
  Vector rhs = lp.rhs;
  Vector residual = lp.rhs - lp.constraints * lp.lower;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (residual(r) < 0) {
      a.row(r) *= -1.0;
      rhs(r) *= -1.0;
    }
    a(r, n + r) = 1.0;
  }
  Vector lower(n + m), upper(n + m);
  lower << lp.lower, Vector::Zero(m);
  upper << lp.upper, Vector::Constant(m, kInf);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[r] = static_cast<int>(n + r);

  Tableau tableau(a, rhs, lower, upper, basis);
  Vector phase1(n + m);
  phase1 << Vector::Zero(n), Vector::Ones(m);
  int pivots = tableau.optimize(phase1, max_pivots, 0);
  const double infeasibility = tableau.x().tail(m).sum();
  if (infeasibility > 1e-9 * std::max(1.0, lp.rhs.cwiseAbs().maxCoeff()))
    throw SolverError("bounded simplex: problem is infeasible");

  for (Eigen::Index r = 0; r < m; ++r) {
    if (tableau.basis()[r] >= n) tableau.drive_out(static_cast<int>(r), static_cast<int>(n));
  }
  for (Eigen::Index j = n; j < n + m; ++j) tableau.fix_to_zero(static_cast<int>(j));

  Vector phase2(n + m);
  phase2 << lp.cost, Vector::Zero(m);
  pivots = tableau.optimize(phase2, max_pivots, pivots);

  BoundedLpResult result;
  result.x = tableau.x().head(n);
  result.objective = lp.cost.dot(result.x);
  result.pivots = pivots;
  return result;
}

InnerSolution simplex_oracle(const InnerProblem& problem) {
  problem.validate();
  const int k = problem.size();
  if (k > 200) throw InvalidArgument("simplex_oracle: limited to K <= 200");

  // Variables: r_j for j != forbidden, then the quality surplus s >= 0.
  std::vector<int> columns;
  for (int j = 0; j < k; ++j)
    if (j != problem.forbidden) columns.push_back(j);
  const auto n = static_cast<Eigen::Index>(columns.size()) + 1;

  BoundedLp lp;
  lp.cost = Vector::Zero(n);
  lp.constraints = Matrix::Zero(2, n);
  lp.rhs = Vector(2);
  lp.lower = Vector::Zero(n);
  lp.upper = Vector::Ones(n);
  for (Eigen::Index c = 0; c + 1 < n; ++c) {
    const int j = columns[c];
    lp.cost(c) = problem.weights[j];
    lp.constraints(0, c) = 1.0;
    lp.constraints(1, c) = problem.similarity[j];
  }
  lp.constraints(1, n - 1) = -1.0;
  lp.upper(n - 1) = kInf;
  lp.rhs << problem.budget, problem.quality_threshold;

  BoundedLpResult result;
  try {
    result = solve_bounded_simplex(lp);
  } catch (const SolverError& e) {
    if (std::string(e.what()).find("infeasible") != std::string::npos)
      throw InfeasibleError(e.what(), problem.max_quality());
    throw;
  }
  std::vector<double> row(k, 0.0);
  for (Eigen::Index c = 0; c + 1 < n; ++c) {
    double v = result.x(c);
    if (std::abs(v) < 1e-13) v = 0.0;
    if (std::abs(v - 1.0) < 1e-13) v = 1.0;
    row[columns[c]] = v;
  }
  return make_inner_solution(problem, std::move(row));
}

}  // namespace nfrec
