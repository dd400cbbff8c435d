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

#include "incompat/restriction.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "incompat/errors.h"
#include "test_util.h"

using namespace incompat;
using namespace incompat::testing;

namespace {

constexpr double kPi = std::numbers::pi;

QubitObservable random_observable(std::mt19937_64 &rng, double min_norm = 0) {
    std::uniform_real_distribution<double> u(0, 1);
    Vec3 a = random_unit(rng) * (min_norm + (1 - min_norm) * u(rng));
    double n = a.norm();
    return QubitObservable::make(n + u(rng) * (2 - 2 * n), a);
}

bool povm_ok(double bias, const Vec3 &v) {
    double n = v.norm();
    return n <= bias + kPovmSlack && bias <= 2 - n + kPovmSlack;
}

/// Brute-force min F over a grid of (lambda1, lambda2[, xi1, xi2]) with the
/// POVM constraints checked directly.
double grid_min_F(const ObservablePair &p, const Vec3 &n, double r, const Vec3 &m, double step, bool with_xi) {
    const QubitObservable *o[2] = {&p.first, &p.second};
    std::vector<double> axis;
    for (double v = -2; v <= 2 + 1e-12; v += step) {
        axis.push_back(v);
    }
    std::vector<double> xis = with_xi ? axis : std::vector<double>{0};
    // Feasible tilde (bias, vector) lists per observable.
    std::vector<std::pair<double, Vec3>> feasible[2];
    for (int i = 0; i < 2; i++) {
        for (double lam : axis) {
            for (double xi : xis) {
                double b = o[i]->bias() - lam * r;
                Vec3 v = o[i]->bloch() + n * lam + m * xi;
                if (povm_ok(b, v)) {
                    feasible[i].push_back({b, v});
                }
            }
        }
    }
    double best = 1e300;
    for (const auto &[b1, v1] : feasible[0]) {
        for (const auto &[b2, v2] : feasible[1]) {
            best = std::min(best, busch_F_value(b1, v1, b2, v2));
        }
    }
    return std::max(best, -1.0);
}

StateSetLine line_in_xy(double r, double phi) {
    return StateSetLine::make(r, {std::cos(phi), std::sin(phi), 0}, kUnitZ);
}

}  // namespace

TEST(tilde_observable, examples) {
    auto o = make_unbiased({0.6, 0, 0});
    auto plane = StateSetPlane::make(0, kUnitZ);
    ASSERT_EQ(tilde_observable(o, plane, 0), o);
    auto t = tilde_observable(o, plane, 0.1);
    ASSERT_DOUBLE_EQ(t.bias(), 1);
    ASSERT_EQ(t.bloch(), (Vec3{0.6, 0, 0.1}));
    try {
        tilde_observable(make_unbiased(kUnitX), plane, 0.1);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::Infeasible);
    }
    auto line = StateSetLine::make(0.5, kUnitX, kUnitZ);
    auto tl = tilde_observable(make_unbiased({0, 0.3, 0}), line, 0.2, -0.1);
    ASSERT_DOUBLE_EQ(tl.bias(), 0.9);
    ASSERT_EQ(tl.bloch(), (Vec3{0.2, 0.3, -0.1}));
}

TEST(tilde_observable, statistics_agree_on_section) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0, 1), lam(-2, 2);
    double worst = 0;
    int built = 0;
    while (built < 200) {
        auto o = random_observable(rng);
        auto plane = StateSetPlane::make(u(rng), random_unit(rng));
        auto [e1, e2] = orthonormal_complement(plane.n);
        auto line = StateSetLine::make(plane.r, plane.n, e1);
        double l = lam(rng), xi = lam(rng);
        QubitObservable tp, tl;
        try {
            tp = tilde_observable(o, plane, l);
            tl = tilde_observable(o, line, l, xi);
        } catch (const Error &) {
            continue;
        }
        built++;
        for (int k = 0; k < 100; k++) {
            Vec3 sp = plane.point(u(rng), 2 * kPi * u(rng));
            Vec3 sl = line.point(2 * u(rng) - 1);
            ASSERT_NEAR(sl.dot(e1), 0, 1e-12);
            for (auto [state, tilde] : {std::pair{sp, tp}, std::pair{sl, tl}}) {
                Mat2 rho = density(state);
                double want = trace_product(rho, half_pauli_matrix(o.bias(), o.bloch())).real();
                double got = trace_product(rho, half_pauli_matrix(tilde.bias(), tilde.bloch())).real();
                worst = std::max(worst, std::abs(want - got));
            }
        }
    }
    ASSERT_LT(worst, 1e-12);
}

TEST(s0_compatible_plane, mub_examples) {
    auto p = make_mub_pair(1);
    auto xz = s0_compatible_plane(p, StateSetPlane::make(0, kUnitY));
    ASSERT_TRUE(xz.compatible);
    auto xy = s0_compatible_plane(p, StateSetPlane::make(0, kUnitZ));
    ASSERT_FALSE(xy.compatible);
    ASSERT_NEAR(xy.min_F, 1, 1e-9);
}

TEST(s0_compatible_plane, certificate_replays) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0, 1);
    int compatible = 0;
    for (int k = 0; k < 200; k++) {
        ObservablePair p{random_observable(rng, 0.6), random_observable(rng, 0.6)};
        auto s = StateSetPlane::make(0.8 * u(rng), random_unit(rng));
        auto v = s0_compatible_plane(p, s);
        ASSERT_LE(v.min_F, std::max(busch_F(p).F, -1.0) + 1e-12);
        ASSERT_GE(v.min_F, -1);
        ASSERT_EQ(v.certificate_quality, 0);
        if (!v.compatible) {
            continue;
        }
        compatible++;
        auto t1 = tilde_observable(p.first, s, v.argmin.lambda1);
        auto t2 = tilde_observable(p.second, s, v.argmin.lambda2);
        ASSERT_TRUE(is_compatible({t1, t2}));
    }
    ASSERT_GT(compatible, 20);
}

TEST(s0_compatible_plane, compatible_pair_everywhere) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 100; k++) {
        auto p = ObservablePair{make_unbiased({0.5, 0, 0}), make_unbiased({0, 0.5, 0.1})};
        auto v = s0_compatible_plane(p, StateSetPlane::make(u(rng), random_unit(rng)));
        ASSERT_TRUE(v.compatible);
    }
}

TEST(s0_compatible, degenerate_sets) {
    auto p = make_mub_pair(1);
    auto pl = s0_compatible_plane(p, StateSetPlane::make(1, kUnitZ));
    ASSERT_TRUE(pl.compatible);
    ASSERT_EQ(pl.min_F, -1);
    auto li = s0_compatible_line(p, StateSetLine::make(1, kUnitZ, kUnitX));
    ASSERT_TRUE(li.compatible);
    ASSERT_TRUE(s0_compatible(p, StateSetLine::make(1, kUnitY, kUnitX)).compatible);
}

TEST(s0_compatible_line, pinned_xi_matches_plane_and_grid) {
    auto p = make_mub_pair(1);
    for (double phi : {kPi / 4, 0.3, kPi / 8}) {
        for (double r : {0.0, 0.2, 0.5, 0.7, 0.9}) {
            auto line = line_in_xy(r, phi);
            auto pinned = s0_compatible_line(p, line, {}, kDefaultTolF, false);
            auto plane = s0_compatible_plane(p, StateSetPlane::make(r, line.n));
            ASSERT_EQ(pinned.compatible, plane.compatible) << phi << " " << r;
            ASSERT_NEAR(pinned.min_F, plane.min_F, 1e-6);
            ASSERT_EQ(pinned.argmin.xi1, 0);
            double grid = grid_min_F(p, line.n, r, line.m, 1e-2, false);
            ASSERT_GE(grid, pinned.min_F - 1e-9) << phi << " " << r;
            if (grid <= 0) {
                ASSERT_TRUE(pinned.compatible);
            }
            if (pinned.compatible) {
                ASSERT_LT(grid, 0.05) << phi << " " << r;
            }
        }
    }
}

TEST(s0_compatible_line, xi_search_matches_coarse_grid) {
    auto p = make_mub_pair(1);
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
        auto line = line_in_xy(r, kPi / 4);
        auto full = s0_compatible_line(p, line);
        auto pinned = s0_compatible_line(p, line, {}, kDefaultTolF, false);
        ASSERT_LE(full.min_F, pinned.min_F + 1e-9);
        double grid = grid_min_F(p, line.n, r, line.m, 0.1, true);
        ASSERT_GE(grid, full.min_F - 1e-9) << r;
        if (grid <= 0) {
            ASSERT_TRUE(full.compatible) << r;
        }
    }
}

TEST(s0_compatible_line, mub_diagonal_lines) {
    auto p = make_mub_pair(1);
    // A semidefinite feasibility program for a joint POVM of the restricted
    // statistics puts the transition between r = 0.5 and r = 0.55.
    ASSERT_TRUE(s0_compatible_line(p, line_in_xy(0.5, kPi / 4)).compatible);
    ASSERT_FALSE(s0_compatible_line(p, line_in_xy(0.55, kPi / 4)).compatible);
    ASSERT_FALSE(s0_compatible_line(p, line_in_xy(0.95, kPi / 4)).compatible);
}

TEST(s0_compatible, monotone_under_inclusion) {
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(0, 1);
    int plane_compatible = 0, nested = 0;
    while (nested < 500) {
        ObservablePair p{random_observable(rng, 0.5), random_observable(rng, 0.5)};
        auto plane = StateSetPlane::make(0.9 * u(rng), random_unit(rng));
        auto [e1, e2] = orthonormal_complement(plane.n);
        double c = (2 * u(rng) - 1) * 0.9 * std::sqrt(1 - plane.r * plane.r);
        Vec3 p0 = plane.n * plane.r + e1 * c;
        if (p0.norm() < 1e-3) {
            continue;
        }
        nested++;
        auto line = StateSetLine::make(p0.norm(), p0.normalized(), p0.cross(e2).normalized());
        ASSERT_TRUE(line.contains(p0));
        ASSERT_TRUE(plane.contains(line.point(0.7)));
        auto vp = s0_compatible_plane(p, plane);
        auto vl = s0_compatible_line(p, line);
        if (is_compatible(p)) {
            ASSERT_TRUE(vp.compatible);
        }
        if (vp.compatible) {
            plane_compatible++;
            ASSERT_TRUE(vl.compatible) << vp.min_F << " " << vl.min_F;
        }
    }
    ASSERT_GT(plane_compatible, 50);
}

TEST(s0R_slack, examples) {
    for (double t : {0.3, 0.8, 1.0}) {
        auto p = make_mub_pair(t);
        ASSERT_NEAR(s0R_slack(p.first.bloch(), p.second.bloch(), StateSetR::make(kUnitX)), 2 * t - 2, 1e-12);
        ASSERT_TRUE(s0R_compatible_unbiased(p.first.bloch(), p.second.bloch(), StateSetR::make(kUnitX)));
        bool z = s0R_compatible_unbiased(p.first.bloch(), p.second.bloch(), StateSetR::make(kUnitZ));
        ASSERT_EQ(z, t <= 1 / std::sqrt(2.0));
    }
    ASSERT_THROW(s0R_slack({1.1, 0, 0}, {}, StateSetR::make(kUnitZ)), Error);
}

TEST(s0R_compatible_unbiased, agrees_with_solver) {
    std::mt19937_64 rng(55);
    int compared = 0, compatible = 0;
    for (int k = 0; k < 1000; k++) {
        Vec3 a1 = random_in_ball(rng), a2 = random_in_ball(rng);
        auto s = StateSetR::make(random_unit(rng));
        double slack = s0R_slack(a1, a2, s);
        if (std::abs(slack) <= 1e-6) {
            continue;
        }
        compared++;
        auto v = s0_compatible_plane({make_unbiased(a1), make_unbiased(a2)}, s.as_plane());
        ASSERT_EQ(v.compatible, slack <= 0) << a1 << " " << a2 << " " << s.n << " " << v.min_F;
        compatible += v.compatible;
    }
    ASSERT_GT(compared, 990);
    ASSERT_GT(compatible, 100);
    ASSERT_LT(compatible, compared - 100);
}

TEST(s0_compatible, swap_covariance) {
    std::mt19937_64 rng(56);
    std::uniform_real_distribution<double> u(0, 1);
    int compared = 0;
    for (int k = 0; k < 500; k++) {
        auto p = make_mub_pair(0.7 + 0.3 * u(rng));
        StateSet s, swapped;
        if (k % 2 == 0) {
            auto pl = StateSetPlane::make(u(rng), random_unit(rng));
            s = pl;
            swapped = StateSetPlane::make(pl.r, swap_xy(pl.n));
        } else {
            Vec3 n = random_unit(rng);
            auto [m, unused] = orthonormal_complement(n);
            auto li = StateSetLine::make(u(rng), n, m);
            s = li;
            swapped = StateSetLine::make(li.r, swap_xy(li.n), swap_xy(li.m));
        }
        auto a = s0_compatible(p, s), b = s0_compatible(p, swapped);
        if (std::abs(a.min_F) < 1e-6 || std::abs(b.min_F) < 1e-6) {
            continue;
        }
        compared++;
        ASSERT_EQ(a.compatible, b.compatible) << format_state_set(s);
    }
    ASSERT_GT(compared, 400);
}
