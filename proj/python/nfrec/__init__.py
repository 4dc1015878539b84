# Copyright 2026 The nfrec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Network-friendly recommendations: policy solvers, baselines and simulation."""

from ._core import (
    ConsistencyError,
    DataError,
    Error,
    InfeasibleError,
    IngestError,
    Instance,
    InvalidArgument,
    Policy,
    SolverError,
    UserModel,
    apply_caching,
    evaluate,
    load_instance,
    load_policy,
    low_cost,
    myopic,
    q_mixed,
    sample_batches,
    save_instance,
    save_policy,
    simulate,
    solve,
    solve_batch,
    solve_inner,
    synthetic,
    time_average_cost,
    top_n,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
