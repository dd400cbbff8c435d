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

#include "incompat/optimizer.h"

#include <algorithm>
#include <cmath>

#include "incompat/errors.h"
#include "incompat/nelder_mead.h"

namespace incompat {

namespace {

constexpr int kPrimes[detail::kMaxDims] = {2, 3, 5, 7, 11, 13, 17, 19};

struct FunctionProblem {
    const Objective &objective_fn;
    const std::vector<Constraint> &constraints;
    size_t k;

    std::span<const double> view(const detail::Point &p) const {
        return {p.data(), k};
    }
    double objective(const detail::Point &p) const {
        return objective_fn(view(p));
    }
    double penalty(const detail::Point &p) const {
        double s = 0;
        for (const auto &g : constraints) {
            double v = g(view(p));
            if (v > 0) {
                s += v * v;
            }
        }
        return s;
    }
    double violation(const detail::Point &p) const {
        double worst = 0;
        for (const auto &g : constraints) {
            worst = std::max(worst, g(view(p)));
        }
        return worst;
    }
};

}  // namespace

std::vector<double> halton_point(uint64_t index, size_t dims) {
    std::vector<double> out(dims);
    for (size_t d = 0; d < dims; d++) {
        uint64_t base = kPrimes[d % detail::kMaxDims];
        double f = 1, r = 0;
        uint64_t i = index;
        while (i > 0) {
            f /= static_cast<double>(base);
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        out[d] = r;
    }
    return out;
}

MinResult minimize(
    const Objective &objective, const std::vector<Constraint> &constraints, const Box &box, const OptimizerConfig &cfg) {
    if (box.lo.size() != box.hi.size()) {
        throw Error(ErrorKind::ShapeMismatch, "box bounds differ in length");
    }
    FunctionProblem problem{objective, constraints, box.dims()};
    return detail::minimize_problem(problem, box, cfg);
}

Bracket bisect_threshold(const std::function<bool(double)> &pred, double lo, double hi, double tol) {
    Bracket b{lo, hi, 2};
    bool at_lo = pred(lo);
    if (at_lo == pred(hi)) {
        throw Error(ErrorKind::NotBracketed, "predicate has the same value at both ends");
    }
    while (b.hi - b.lo > tol) {
        double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) {
            break;
        }
        b.evaluations++;
        if (pred(mid) == at_lo) {
            b.lo = mid;
        } else {
            b.hi = mid;
        }
    }
    return b;
}

}  // namespace incompat
