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

// Python bindings. Matrices cross as NumPy arrays (copied).

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nfrec/baselines.hpp"
#include "nfrec/batch_mdp.hpp"
#include "nfrec/error.hpp"
#include "nfrec/ingest.hpp"
#include "nfrec/inner_solver.hpp"
#include "nfrec/io.hpp"
#include "nfrec/mdp.hpp"
#include "nfrec/sampler.hpp"
#include "nfrec/simulator.hpp"

namespace py = pybind11;
using namespace nfrec;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["bellman_residual"] = r.bellman_residual;
  d["evaluation_seconds"] = r.evaluation_seconds;
  d["improvement_seconds"] = r.improvement_seconds;
  d["total_seconds"] = r.total_seconds;
  d["objective_trace"] = r.objective_trace;
  return d;
}

PolicyIterationConfig solver_config(double tolerance, double epsilon, int max_iterations,
                                    int threads) {
  PolicyIterationConfig c;
  c.evaluation.tolerance = tolerance;
  c.improvement_threshold = epsilon;
  c.max_iterations = max_iterations;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Network-friendly recommendation solvers";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  auto data = py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<IngestError>(m, "IngestError", data.ptr());
  auto solver = py::register_exception<SolverError>(m, "SolverError", error.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", solver.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", solver.ptr());

  py::class_<Instance>(m, "Instance")
      .def(py::init<Matrix, Vector, Vector, std::vector<int>>(), py::arg("similarity"),
           py::arg("cost"), py::arg("popularity"), py::arg("cached"))
      .def_property_readonly("size", &Instance::size)
      .def_property_readonly("similarity", py::overload_cast<>(&Instance::similarity, py::const_))
      .def_property_readonly("cost", py::overload_cast<>(&Instance::cost, py::const_))
      .def_property_readonly("popularity", &Instance::popularity)
      .def_property_readonly("cached", &Instance::cached)
      .def_property_readonly("edge_count", &Instance::edge_count)
      .def("__len__", &Instance::size);

  py::class_<UserModel>(m, "UserModel")
      .def(py::init([](double alpha, double q, double lambda, int n) {
             UserModel u{alpha, q, lambda, n};
             u.validate();
             return u;
           }),
           py::arg("alpha"), py::arg("q"), py::arg("lam"), py::arg("n"))
      .def_static("from_mean_length", &UserModel::from_mean_length, py::arg("mean_length"),
                  py::arg("alpha"), py::arg("q"), py::arg("n"))
      .def_readonly("alpha", &UserModel::alpha)
      .def_readonly("q", &UserModel::q)
      .def_readonly("lam", &UserModel::lambda)
      .def_readonly("n", &UserModel::batch_size)
      .def_property_readonly("mean_session_length", &UserModel::mean_session_length)
      .def("__repr__", [](const UserModel& u) {
        return "UserModel(alpha=" + std::to_string(u.alpha) + ", q=" + std::to_string(u.q) +
               ", lam=" + std::to_string(u.lambda) + ", n=" + std::to_string(u.batch_size) + ")";
      });

  py::class_<Policy>(m, "Policy")
      .def(py::init<Matrix, int>(), py::arg("frequencies"), py::arg("n"))
      .def_property_readonly("frequencies", &Policy::frequencies)
      .def_property_readonly("n", &Policy::batch_size)
      .def_property_readonly("size", &Policy::size)
      .def("max_abs_difference", &Policy::max_abs_difference)
      .def(
          "validate",
          [](const Policy& p, const Instance& inst, double q, double tolerance) {
            const ValidationReport r = validate_policy(inst, p, q, tolerance);
            py::dict d;
            d["passed"] = r.passed;
            d["failing_rows"] = r.failing_rows;
            d["max_row_sum"] = r.max_row_sum;
            d["max_box"] = r.max_box;
            d["max_diagonal"] = r.max_diagonal;
            d["max_quality"] = r.max_quality;
            return d;
          },
          py::arg("instance"), py::arg("q"), py::arg("tolerance") = 1e-9);

  m.def("top_n", &top_n_policy, py::arg("instance"), py::arg("n"));
  m.def("low_cost", &low_cost_policy, py::arg("instance"), py::arg("n"));
  m.def("q_mixed", &q_mixed_policy, py::arg("instance"), py::arg("n"), py::arg("q"));
  m.def("myopic", &myopic_solve, py::arg("instance"), py::arg("model"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "evaluate",
      [](const Instance& inst, const UserModel& model, const Policy& p, double tolerance) {
        EvaluationOptions o;
        o.tolerance = tolerance;
        return evaluate_policy(inst, model, p, o);
      },
      py::arg("instance"), py::arg("model"), py::arg("policy"), py::arg("tolerance") = 1e-9,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve",
      [](const Instance& inst, const UserModel& model, double tolerance, double epsilon,
         int max_iterations, int threads) {
        PolicyIterationResult r = [&] {
          py::gil_scoped_release release;
          return policy_iteration(inst, model,
                                  solver_config(tolerance, epsilon, max_iterations, threads));
        }();
        return py::make_tuple(r.policy, r.values, report_dict(r.report));
      },
      py::arg("instance"), py::arg("model"), py::arg("tolerance") = 1e-9,
      py::arg("epsilon") = 1e-7, py::arg("max_iterations") = 200, py::arg("threads") = 0,
      "Policy iteration. Returns (policy, values, report).");

  m.def(
      "solve_batch",
      [](const Instance& inst, const UserModel& model, double max_batches_per_state) {
        BatchMdpOptions o;
        o.max_batches_per_state = max_batches_per_state;
        BatchMdpResult r = [&] {
          py::gil_scoped_release release;
          return solve_batch_mdp(inst, model, o);
        }();
        py::dict d;
        d["iterations"] = r.iterations;
        d["batches_per_state"] = r.batches_per_state;
        d["batches_enumerated"] = r.batches_enumerated;
        d["seconds"] = r.seconds;
        return py::make_tuple(r.policy, r.values, d);
      },
      py::arg("instance"), py::arg("model"), py::arg("max_batches_per_state") = 2e6,
      "Exact batch-enumeration solve. Returns (policy, values, report).");

  m.def(
      "time_average_cost",
      [](const Instance& inst, const UserModel& model, const Policy& p) {
        return time_average_cost(inst, model, p);
      },
      py::arg("instance"), py::arg("model"), py::arg("policy"),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_inner",
      [](std::vector<double> weights, std::vector<double> similarity, int forbidden, int budget,
         double quality_threshold) {
        InnerProblem p{weights, similarity, forbidden, budget, quality_threshold};
        const InnerSolution s = solve_inner(p);
        return py::make_tuple(s.row, s.objective);
      },
      py::arg("weights"), py::arg("similarity"), py::arg("forbidden"), py::arg("budget"),
      py::arg("quality_threshold"), "One-row LP. Returns (row, objective).");

  m.def(
      "sample_batches",
      [](std::vector<double> marginals, int n, long draws, std::uint64_t seed) {
        const BatchDistribution dist(marginals, n);
        RandomStream stream(seed, 0);
        std::vector<std::vector<int>> out;
        out.reserve(static_cast<std::size_t>(draws));
        for (long d = 0; d < draws; ++d) out.push_back(sample_batch(dist, stream));
        return out;
      },
      py::arg("marginals"), py::arg("n"), py::arg("draws"), py::arg("seed"));

  m.def(
      "simulate",
      [](const Instance& inst, const Policy& p, const UserModel& model, long sessions,
         std::uint64_t seed, int threads) {
        Metrics x;
        {
          py::gil_scoped_release release;
          x = run_monte_carlo(inst, p, model, sessions, seed, threads);
        }
        py::dict d;
        d["mean_cost"] = x.mean_cost;
        d["mean_quality"] = x.mean_quality;
        d["hit_probability"] = x.hit_probability;
        d["mean_length"] = x.mean_length;
        d["sessions"] = x.sessions;
        d["cost_half_width"] = x.cost_half_width;
        d["quality_half_width"] = x.quality_half_width;
        d["hit_half_width"] = x.hit_half_width;
        return d;
      },
      py::arg("instance"), py::arg("policy"), py::arg("model"), py::arg("sessions") = 1000,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "synthetic",
      [](int k, std::uint64_t seed, double cache_ratio) {
        return apply_caching(build_synthetic(k, seed).instance, cache_ratio);
      },
      py::arg("k"), py::arg("seed"), py::arg("cache_ratio") = 0.01);
  m.def("apply_caching", &apply_caching, py::arg("instance"), py::arg("ratio"),
        py::arg("cost_uncached") = 10.0, py::arg("cost_cached") = 0.0);

  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("save_instance", &save_instance, py::arg("path"), py::arg("instance"));
  m.def("load_policy", &load_policy, py::arg("path"));
  m.def("save_policy", &save_policy, py::arg("path"), py::arg("policy"));
}
