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

#include "incompat/boundary.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "incompat/errors.h"
#include "incompat/jointness.h"
#include "incompat/restriction.h"

using namespace incompat;

namespace {

constexpr double kPi = std::numbers::pi;

InPlanePair mub(double t) {
    return InPlanePair::make(t, t, 0, kPi / 2);
}

InPlanePair random_incompatible(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> mag(0.5, 1), ang(-kPi, kPi);
    while (true) {
        auto p = InPlanePair::make(mag(rng), mag(rng), ang(rng), ang(rng));
        if (p.incompatible()) {
            return p;
        }
    }
}

Vec3 normal(double phi, double theta) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

TEST(in_plane_pair, construction) {
    auto p = InPlanePair::make(0.5, 0.8, kPi / 2, 0);
    ASSERT_NEAR((p.first() - Vec3{0, 0.5, 0}).norm(), 0, 1e-15);
    ASSERT_NEAR((p.second() - Vec3{0.8, 0, 0}).norm(), 0, 1e-15);
    ASSERT_THROW(InPlanePair::make(0, 0.5, 0, 0), Error);
    ASSERT_THROW(InPlanePair::make(1.2, 0.5, 0, 0), Error);
    ASSERT_TRUE(mub(0.8).incompatible());
    ASSERT_FALSE(mub(0.7).incompatible());
}

TEST(coefficients, mub_closed_form) {
    for (double t : {0.75, 0.9, 1.0}) {
        for (int k = 0; k < 50; k++) {
            double phi = -kPi + 0.13 * k;
            auto c = coefficients(mub(t), phi);
            double cs = std::cos(phi) * std::sin(phi);
            ASSERT_NEAR(c.L, std::pow(t, 4) * cs * cs, 1e-12);
            ASSERT_NEAR(c.M, t * t, 1e-12);
            ASSERT_NEAR(c.N, 1 - 2 * t * t, 1e-12);
            auto d = coefficients(mub(t), phi + kPi);
            ASSERT_NEAR(d.L, c.L, 1e-12);
            ASSERT_NEAR(d.M, c.M, 1e-12);
            ASSERT_NEAR(d.N, c.N, 1e-12);
        }
    }
}

TEST(coefficients, random_pair_bounds) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mag(0.05, 1), ang(-kPi, kPi);
    for (int k = 0; k < 1000; k++) {
        auto p = InPlanePair::make(mag(rng), mag(rng), ang(rng), ang(rng));
        double phi = ang(rng);
        auto c = coefficients(p, phi);
        double lower = std::abs(p.a1_mag * std::cos(phi - p.alpha1)) - std::abs(p.a2_mag * std::cos(phi - p.alpha2));
        ASSERT_GE(c.L, 0);
        ASSERT_GE(c.M, lower * lower - 1e-12);
        if (p.incompatible()) {
            ASSERT_LT(c.N, 0);
        }
    }
}

TEST(sum_diff_frame, parallelogram_law) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mag(0.05, 1), ang(-kPi, kPi);
    for (int k = 0; k < 1000; k++) {
        auto p = InPlanePair::make(mag(rng), mag(rng), ang(rng), ang(rng));
        auto fr = sum_diff_frame(p);
        ASSERT_NEAR(fr.sum_mag * fr.sum_mag + fr.diff_mag * fr.diff_mag,
                    2 * (p.a1_mag * p.a1_mag + p.a2_mag * p.a2_mag), 1e-10);
        Vec3 s = p.first() + p.second();
        ASSERT_NEAR(fr.sum_mag, s.norm(), 1e-12);
        if (fr.sum_mag > 1e-9) {
            ASSERT_NEAR(std::cos(fr.omega_sum) * fr.sum_mag, s.x, 1e-12);
            ASSERT_NEAR(std::sin(fr.omega_sum) * fr.sum_mag, s.y, 1e-12);
        }
    }
}

TEST(f_value, lemma_properties) {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 200; k++) {
        auto p = random_incompatible(rng);
        for (int i = 0; i < 20; i++) {
            double phi = -kPi + 2 * kPi * i / 20;
            ASSERT_LT(f_value(p, phi, 0), 0);
            ASSERT_NEAR(f_value(p, phi, 0), coefficients(p, phi).N, 1e-12);
            ASSERT_GE(f_value(p, phi, kPi / 2), -1e-10);
            double prev = f_value(p, phi, 0);
            for (int j = 1; j <= 50; j++) {
                double theta = kPi / 2 * j / 50;
                double f = f_value(p, phi, theta);
                ASSERT_GT(f, prev);
                prev = f;
                ASSERT_NEAR(f_value(p, phi, kPi - theta), f, 1e-12);
                ASSERT_NEAR(f_value(p, phi + kPi, theta), f, 1e-12);
            }
        }
    }
}

TEST(g_value, examples) {
    auto p = mub(1);
    ASSERT_NEAR(g_value(p, 0.4, 0), 2 - 2 * std::sqrt(2.0), 1e-12);
    ASSERT_LT(g_value(p, 0.4, 0), 0);
    ASSERT_GT(g_value(mub(0.7), 0.4, 0), 0);
    ASSERT_NEAR(g_value(p, kPi / 4, 2 * (std::sqrt(2.0) - 1)), 0, 1e-12);
}

TEST(g_value, sign_matches_f_and_projection) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> mag(0.05, 1), ang(-kPi, kPi), unit(0, 1);
    int compared = 0;
    for (int k = 0; k < 10000; k++) {
        auto p = InPlanePair::make(mag(rng), mag(rng), ang(rng), ang(rng));
        double phi = ang(rng), X = unit(rng);
        double g = g_value(p, phi, X);
        if (std::abs(g) <= 1e-7) {
            continue;
        }
        compared++;
        double theta = std::asin(std::sqrt(X));
        ASSERT_EQ(g > 0, f_value(p, phi, theta) > 0);
        bool compat = s0R_compatible_unbiased(p.first(), p.second(), StateSetR::make(normal(phi, theta)));
        ASSERT_EQ(g > 0, compat);
    }
    ASSERT_GT(compared, 9900);
}

TEST(boundary_root, examples) {
    ASSERT_NEAR(boundary_root(mub(0.9), 0), (2 * 0.81 - 1) / 0.81, 1e-12);
    ASSERT_NEAR(boundary_root(mub(0.9), 0), 0.76543, 1e-5);
    ASSERT_NEAR(boundary_root(mub(1), kPi / 4), 2 * (std::sqrt(2.0) - 1), 1e-12);
    try {
        boundary_root(mub(0.6), 0.3);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::NoRoot);
    }
}

TEST(boundary_root, residuals_and_g_root) {
    std::mt19937_64 rng(45);
    for (int k = 0; k < 50; k++) {
        auto p = random_incompatible(rng);
        for (int i = 0; i < 720; i++) {
            double phi = kPi * i / 720;
            double x0 = boundary_root(p, phi);
            ASSERT_GT(x0, 0);
            ASSERT_LE(x0, 1);
            ASSERT_LE(std::abs(coefficients(p, phi).eval(x0)), 1e-10);
            if (x0 < 1 - 1e-9) {
                ASSERT_NEAR(g_value(p, phi, x0), 0, 1e-7);
            }
        }
    }
}

TEST(region_CA, mub_symmetries) {
    auto curve = region_CA(mub(1), 720);
    ASSERT_EQ(curve.samples.size(), 720u);
    size_t argmin = 0;
    for (size_t i = 0; i < curve.samples.size(); i++) {
        ASSERT_TRUE(curve.samples[i].x0.has_value());
        ASSERT_NEAR(curve.samples[i].phi, kPi * static_cast<double>(i) / 720, 1e-15);
        if (*curve.samples[i].x0 < *curve.samples[argmin].x0) {
            argmin = i;
        }
    }
    ASSERT_EQ(argmin, 180u);
    ASSERT_NEAR(*curve.samples[argmin].x0, 2 * (std::sqrt(2.0) - 1), 1e-12);
    for (int i = 0; i < 360; i++) {
        double phi = kPi * i / 720;
        ASSERT_NEAR(boundary_root(mub(1), phi), boundary_root(mub(1), phi + kPi / 2), 1e-12);
        ASSERT_NEAR(boundary_root(mub(1), phi), boundary_root(mub(1), -phi), 1e-12);
    }
}

TEST(region_CA, rotation_shifts_curve) {
    std::mt19937_64 rng(46);
    for (int k = 0; k < 20; k++) {
        auto p = random_incompatible(rng);
        int shift = static_cast<int>(rng() % 90);
        double delta = kPi * shift / 180;
        auto q = InPlanePair::make(p.a1_mag, p.a2_mag, p.alpha1 + delta, p.alpha2 + delta);
        auto cp = region_CA(p, 180), cq = region_CA(q, 180);
        for (int i = 0; i < 180; i++) {
            ASSERT_NEAR(*cq.samples[(i + shift) % 180].x0, *cp.samples[i].x0, 1e-10);
        }
    }
}

TEST(region_CA, compatible_pair_has_no_roots) {
    auto curve = region_CA(mub(0.5), 16);
    for (const auto &s : curve.samples) {
        ASSERT_FALSE(s.x0.has_value());
    }
    ASSERT_TRUE(region_contains(mub(0.5), 0.2, 0));
}

TEST(region_contains, orientation) {
    auto p = mub(1);
    // Normal along z: the xy-plane, where the MUB pair is incompatible.
    ASSERT_FALSE(region_contains(p, 0.3, 0));
    ASSERT_FALSE(region_contains(p, 0.3, kPi));
    // Normal in the xy-plane: through-origin planes containing z are compatible.
    ASSERT_TRUE(region_contains(p, 0.3, kPi / 2));
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> ang(0, kPi);
    for (int k = 0; k < 2000; k++) {
        double phi = 2 * ang(rng), theta = ang(rng);
        double slack = s0R_slack(p.first(), p.second(), StateSetR::make(normal(phi, theta)));
        if (std::abs(slack) < 1e-9) {
            continue;
        }
        ASSERT_EQ(region_contains(p, phi, theta), slack <= 0);
    }
}
