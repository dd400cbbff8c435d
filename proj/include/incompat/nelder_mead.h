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

#ifndef INCOMPAT_NELDER_MEAD_H
#define INCOMPAT_NELDER_MEAD_H

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "incompat/errors.h"
#include "incompat/optimizer.h"

namespace incompat::detail {

inline constexpr size_t kMaxDims = 8;
using Point = std::array<double, kMaxDims>;

struct DescentStats {
    int iterations = 0;
    int evaluations = 0;
};

/// Plain Nelder-Mead on fun over the box [lo, hi]; trial points are clamped
/// into the box. Returns the best vertex and its value.
template <typename Fun>
std::pair<Point, double> nelder_mead(
    const Fun &fun,
    size_t k,
    const Point &x0,
    const Point &step,
    const Point &lo,
    const Point &hi,
    int max_iter,
    double ftol,
    double xtol,
    DescentStats &stats) {
    std::array<Point, kMaxDims + 1> x{};
    std::array<double, kMaxDims + 1> f{};
    auto clamp_eval = [&](Point &p) {
        for (size_t j = 0; j < k; j++) {
            p[j] = std::clamp(p[j], lo[j], hi[j]);
        }
        stats.evaluations++;
        return fun(p);
    };
    x[0] = x0;
    f[0] = clamp_eval(x[0]);
    for (size_t i = 1; i <= k; i++) {
        x[i] = x0;
        double s = step[i - 1];
        x[i][i - 1] = x0[i - 1] + s > hi[i - 1] ? x0[i - 1] - s : x0[i - 1] + s;
        f[i] = clamp_eval(x[i]);
    }
    std::array<size_t, kMaxDims + 1> order{};
    for (int iter = 0; iter < max_iter; iter++) {
        stats.iterations++;
        std::iota(order.begin(), order.begin() + k + 1, 0);
        std::stable_sort(order.begin(), order.begin() + k + 1, [&](size_t a, size_t b) { return f[a] < f[b]; });
        size_t best = order[0], worst = order[k], second = order[k - 1];
        double spread = 0;
        for (size_t i = 0; i <= k; i++) {
            for (size_t j = 0; j < k; j++) {
                spread = std::max(spread, std::abs(x[i][j] - x[best][j]));
            }
        }
        if (std::abs(f[worst] - f[best]) <= ftol && spread <= xtol) {
            break;
        }
        if (spread <= 1e-15) {
            break;
        }
        Point c{};
        for (size_t i = 0; i <= k; i++) {
            if (i == worst) {
                continue;
            }
            for (size_t j = 0; j < k; j++) {
                c[j] += x[i][j] / static_cast<double>(k);
            }
        }
        auto along = [&](double coef) {
            Point p{};
            for (size_t j = 0; j < k; j++) {
                p[j] = c[j] + coef * (x[worst][j] - c[j]);
            }
            return p;
        };
        Point xr = along(-1.0);
        double fr = clamp_eval(xr);
        if (fr < f[best]) {
            Point xe = along(-2.0);
            double fe = clamp_eval(xe);
            if (fe < fr) {
                x[worst] = xe;
                f[worst] = fe;
            } else {
                x[worst] = xr;
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            x[worst] = xr;
            f[worst] = fr;
            continue;
        }
        bool outside = fr < f[worst];
        Point xc = outside ? along(-0.5) : along(0.5);
        double fc = clamp_eval(xc);
        if ((outside && fc <= fr) || (!outside && fc < f[worst])) {
            x[worst] = xc;
            f[worst] = fc;
            continue;
        }
        for (size_t i = 0; i <= k; i++) {
            if (i == best) {
                continue;
            }
            for (size_t j = 0; j < k; j++) {
                x[i][j] = x[best][j] + 0.5 * (x[i][j] - x[best][j]);
            }
            f[i] = clamp_eval(x[i]);
        }
    }
    size_t best = 0;
    for (size_t i = 1; i <= k; i++) {
        if (f[i] < f[best]) {
            best = i;
        }
    }
    return {x[best], f[best]};
}

/// Moves an infeasible x back into the feasible set. Problems may supply
/// their own repair(Point&); the default bisects along the segment to the
/// (feasible) origin.
template <typename Problem>
void repair_point(const Problem &problem, Point &x, const Point &origin, size_t k) {
    if (problem.violation(x) <= 0) {
        return;
    }
    if constexpr (requires { problem.repair(x); }) {
        problem.repair(x);
    } else {
        double a = 0, b = 1;
        for (int it = 0; it < 50; it++) {
            double mid = 0.5 * (a + b);
            Point p{};
            for (size_t j = 0; j < k; j++) {
                p[j] = origin[j] + mid * (x[j] - origin[j]);
            }
            if (problem.violation(p) > 0) {
                b = mid;
            } else {
                a = mid;
            }
        }
        for (size_t j = 0; j < k; j++) {
            x[j] = origin[j] + a * (x[j] - origin[j]);
        }
    }
}

/// A problem exposes objective(p), and violations via
/// penalty(p) = sum(max(0, g)^2) and violation(p) = max(0, max g).
template <typename Problem>
MinResult minimize_problem(const Problem &problem, const Box &box, const OptimizerConfig &cfg) {
    const size_t k = box.dims();
    if (k == 0 || k > kMaxDims) {
        throw Error(ErrorKind::OutOfRange, "minimize supports 1 to 8 parameters");
    }
    Point lo{}, hi{}, step{}, small{};
    for (size_t j = 0; j < k; j++) {
        lo[j] = box.lo[j];
        hi[j] = box.hi[j];
        step[j] = 0.1 * (hi[j] - lo[j]);
        small[j] = 1e-3 * (hi[j] - lo[j]);
    }
    Point origin{};
    for (size_t j = 0; j < k; j++) {
        origin[j] = std::clamp(0.0, lo[j], hi[j]);
    }
    if (problem.violation(origin) > 0) {
        throw Error(ErrorKind::SolverFailure, "the origin must be feasible");
    }
    double f_origin = problem.objective(origin);
    if (!std::isfinite(f_origin)) {
        throw Error(ErrorKind::NonFinite, "objective is not finite at the feasible origin");
    }

    const double w = cfg.penalty_weight;
    const double ftol = cfg.tol * 1e-4;
    const double xtol = 1e-10;
    auto finite_or_inf = [](double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); };
    auto penalized = [&](const Point &p) { return finite_or_inf(problem.objective(p) + w * problem.penalty(p)); };
    auto barrier = [&](const Point &p) {
        if (problem.violation(p) > 0) {
            return std::numeric_limits<double>::infinity();
        }
        return finite_or_inf(problem.objective(p));
    };

    MinResult result;
    Point best = origin;
    double best_value = f_origin;
    DescentStats stats;
    stats.evaluations = 1;
    if (best_value <= cfg.stop_below) {
        result.value = best_value;
        result.point.assign(best.begin(), best.begin() + k);
        result.evaluations = 1;
        return result;
    }

    int starts = std::max(cfg.starts, 1);
    for (int s = 0; s < starts; s++) {
        Point x0 = origin;
        if (s > 0) {
            auto h = halton_point(cfg.seed * static_cast<uint64_t>(starts) + static_cast<uint64_t>(s), k);
            for (size_t j = 0; j < k; j++) {
                x0[j] = lo[j] + h[j] * (hi[j] - lo[j]);
            }
        }
        auto [x, fx] = nelder_mead(penalized, k, x0, step, lo, hi, cfg.max_iter, ftol, xtol, stats);
        for (int restart = 0; restart < 2; restart++) {
            std::tie(x, fx) = nelder_mead(penalized, k, x, small, lo, hi, cfg.max_iter, ftol, xtol, stats);
        }
        repair_point(problem, x, origin, k);
        std::tie(x, fx) = nelder_mead(barrier, k, x, small, lo, hi, cfg.max_iter, ftol, xtol, stats);
        if (fx < best_value) {
            best_value = fx;
            best = x;
        }
        if (best_value <= cfg.stop_below) {
            break;
        }
    }

    result.value = best_value;
    result.point.assign(best.begin(), best.begin() + k);
    result.feasibility_violation = problem.violation(best);
    result.iterations = stats.iterations;
    result.evaluations = stats.evaluations;
    return result;
}

}  // namespace incompat::detail

#endif
