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

#include <stdexcept>
#include <string>

namespace nfrec {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (files, traces, dimensions).
class DataError : public Error {
 public:
  using Error::Error;
};

/// An ingestion pipeline produced nothing usable.
class IngestError : public DataError {
 public:
  using DataError::DataError;
};

/// A numerical routine failed to converge or produced an inconsistent result.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A computed object violated an invariant it must satisfy by construction.
class ConsistencyError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// The per-state subproblem has no feasible point.
class InfeasibleError : public SolverError {
 public:
  InfeasibleError(const std::string& what, double achievable_max)
      : SolverError(what), achievable_max_(achievable_max) {}

  double achievable_max() const { return achievable_max_; }

 private:
  double achievable_max_;
};

}  // namespace nfrec
