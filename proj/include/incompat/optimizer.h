// Copyright 2026 The incompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INCOMPAT_OPTIMIZER_H
#define INCOMPAT_OPTIMIZER_H

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace incompat {

struct OptimizerConfig {
    int starts = 32;
    double penalty_weight = 1e6;
    double tol = 1e-8;
    int max_iter = 2000;
    uint64_t seed = 0;
    /// Stop the multistart as soon as a feasible value at or below this is found.
    double stop_below = -std::numeric_limits<double>::infinity();
};

struct MinResult {
    double value = 0;
    std::vector<double> point;
    double feasibility_violation = 0;
    /// Nelder-Mead iterations summed over all starts.
    int iterations = 0;
    int evaluations = 0;
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    size_t dims() const {
        return lo.size();
    }
};

using Objective = std::function<double(std::span<const double>)>;
/// Inequality constraint, satisfied when the returned value is <= 0.
using Constraint = std::function<double(std::span<const double>)>;

/// Deterministic multistart minimization over a box with inequality
/// constraints whose feasible set is star-shaped around the origin.
///
/// Each start runs a Nelder-Mead descent on the exterior quadratic penalty
/// f + w * sum(max(0, g)^2), is pulled back into the feasible set along the
/// segment towards the origin, and is then polished by a feasible-only
/// descent. The origin itself is always a candidate, so the returned value
/// never exceeds objective(0).
///
/// Throws NonFinite if the objective is not finite at the origin and
/// SolverFailure if the origin violates a constraint.
MinResult minimize(
    const Objective &objective, const std::vector<Constraint> &constraints, const Box &box, const OptimizerConfig &cfg);

/// Low-discrepancy point in [0,1)^dims (Halton, prime bases).
std::vector<double> halton_point(uint64_t index, size_t dims);

struct Bracket {
    double lo = 0;
    double hi = 0;
    int evaluations = 0;
};

/// Bisects a predicate that flips once on [lo, hi] down to a bracket no
/// wider than tol. Throws NotBracketed if pred(lo) == pred(hi).
Bracket bisect_threshold(const std::function<bool(double)> &pred, double lo, double hi, double tol);

}  // namespace incompat

#endif
