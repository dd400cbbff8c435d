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

#include <cmath>

#include "gtest/gtest.h"

#include "incompat/bloch.h"
#include "incompat/errors.h"
#include "incompat/jointness.h"

using namespace incompat;

TEST(halton_point, first_values) {
    auto p1 = halton_point(1, 3);
    ASSERT_DOUBLE_EQ(p1[0], 0.5);
    ASSERT_DOUBLE_EQ(p1[1], 1.0 / 3);
    ASSERT_DOUBLE_EQ(p1[2], 0.2);
    auto p5 = halton_point(5, 2);
    ASSERT_DOUBLE_EQ(p5[0], 0.625);
    ASSERT_DOUBLE_EQ(p5[1], 7.0 / 9);
    for (double v : halton_point(0, 4)) {
        ASSERT_EQ(v, 0);
    }
}

TEST(minimize, unconstrained_quadratic) {
    auto f = [](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2 * (x[1] + 0.7) * (x[1] + 0.7) + 1; };
    auto r = minimize(f, {}, {{-2, -2}, {2, 2}}, {});
    ASSERT_NEAR(r.value, 1, 1e-10);
    ASSERT_NEAR(r.point[0], 0.3, 1e-5);
    ASSERT_NEAR(r.point[1], -0.7, 1e-5);
    ASSERT_EQ(r.feasibility_violation, 0);
    ASSERT_GT(r.evaluations, 0);
}

TEST(minimize, minimum_on_box_edge) {
    auto f = [](std::span<const double> x) { return x[0] + x[1] + x[2]; };
    auto r = minimize(f, {}, {{-1, -0.5, -0.25}, {1, 1, 1}}, {});
    ASSERT_NEAR(r.value, -1.75, 1e-9);
}

TEST(minimize, disk_constraint) {
    auto f = [](std::span<const double> x) { return x[0] + x[1]; };
    Constraint disk = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] - 1; };
    auto r = minimize(f, {disk}, {{-3, -3}, {3, 3}}, {});
    ASSERT_NEAR(r.value, -std::sqrt(2.0), 1e-6);
    ASSERT_LE(r.feasibility_violation, 0);
    ASSERT_GE(r.value, -std::sqrt(2.0) - 1e-12);
}

TEST(minimize, multimodal_needs_restarts) {
    // Deeper well away from the origin.
    auto f = [](std::span<const double> x) {
        double a = (x[0] - 0.1) * (x[0] - 0.1), b = (x[0] + 1.5) * (x[0] + 1.5);
        return std::min(a, b - 0.5);
    };
    auto r = minimize(f, {}, {{-2}, {2}}, {});
    ASSERT_NEAR(r.value, -0.5, 1e-9);
    ASSERT_NEAR(r.point[0], -1.5, 1e-4);
}

TEST(minimize, never_worse_than_origin) {
    auto f = [](std::span<const double> x) { return std::abs(x[0]) + std::abs(x[1]); };
    Constraint c = [](std::span<const double> x) { return x[0] - x[1] * x[1]; };
    auto r = minimize(f, {c}, {{-1, -1}, {1, 1}}, {});
    ASSERT_LE(r.value, 0);
}

TEST(minimize, deterministic) {
    auto f = [](std::span<const double> x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]) + 0.1 * x[2]; };
    OptimizerConfig cfg;
    cfg.seed = 7;
    auto a = minimize(f, {}, {{-2, -2, -2}, {2, 2, 2}}, cfg);
    auto b = minimize(f, {}, {{-2, -2, -2}, {2, 2, 2}}, cfg);
    ASSERT_EQ(a.value, b.value);
    ASSERT_EQ(a.point, b.point);
    ASSERT_EQ(a.evaluations, b.evaluations);
}

TEST(minimize, stop_below_exits_early) {
    auto f = [](std::span<const double> x) { return x[0] * x[0] - 1; };
    OptimizerConfig cfg;
    cfg.stop_below = 0;
    auto r = minimize(f, {}, {{-1}, {1}}, cfg);
    ASSERT_EQ(r.evaluations, 1);
    ASSERT_EQ(r.value, -1);
}

TEST(minimize, errors) {
    auto f = [](std::span<const double>) { return 0.0; };
    try {
        minimize(f, {}, {{-1, 2}, {1}}, {});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::ShapeMismatch);
    }
    try {
        minimize([](std::span<const double>) { return NAN; }, {}, {{-1}, {1}}, {});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::NonFinite);
    }
    try {
        minimize(f, {[](std::span<const double>) { return 1.0; }}, {{-1}, {1}}, {});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::SolverFailure);
    }
    ASSERT_THROW(minimize(f, {}, {{}, {}}, {}), Error);
    ASSERT_THROW(minimize(f, {}, {std::vector<double>(9, -1), std::vector<double>(9, 1)}, {}), Error);
}

TEST(bisect_threshold, mub_threshold) {
    auto b = bisect_threshold([](double t) { return !is_compatible(make_mub_pair(t)); }, 0, 1, 1e-9);
    ASSERT_LE(b.hi - b.lo, 1e-9);
    ASSERT_NEAR(0.5 * (b.lo + b.hi), 1 / std::sqrt(2.0), 1e-8);
    ASSERT_GT(b.evaluations, 2);
}

TEST(bisect_threshold, not_bracketed) {
    try {
        bisect_threshold([](double) { return true; }, 0, 1, 1e-3);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::NotBracketed);
    }
}
