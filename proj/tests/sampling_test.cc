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

#include "incompat/sampling.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "incompat/errors.h"
#include "test_util.h"

using namespace incompat;
using namespace incompat::testing;

namespace {

std::vector<Vec3> section_states(std::mt19937_64 &rng, const StateSetR &s, int count) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Vec3> out;
    auto plane = s.as_plane();
    for (int k = 0; k < count; k++) {
        out.push_back(plane.point(std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
    }
    return out;
}

}  // namespace

TEST(behavior_of, examples) {
    auto p = make_mub_pair(1);
    auto mixed = behavior_of({make_unbiased({0.6, 0, 0}), make_unbiased({})}, {{}});
    ASSERT_DOUBLE_EQ(mixed.probs[0][0][0], 0.5);
    ASSERT_DOUBLE_EQ(mixed.probs[0][1][1], 0.5);
    Vec3 a{0.3, -0.4, 0};
    auto aligned = behavior_of({make_unbiased(a), make_unbiased(a)}, {a.normalized()});
    ASSERT_NEAR(aligned.probs[0][0][0], (1 + a.norm()) / 2, 1e-15);
    auto b = behavior_of(p, {kUnitX, kUnitY});
    ASSERT_EQ(b.states(), 2u);
    ASSERT_NEAR(b.probs[0][0][0], 1, 1e-15);
    ASSERT_NEAR(b.probs[1][1][0], 1, 1e-15);
    ASSERT_NEAR(b.probs[0][1][0], 0.5, 1e-15);
    ASSERT_NEAR(b.probs[1][0][0], 0.5, 1e-15);
    ASSERT_THROW(behavior_of(p, {{1, 1, 0}}), Error);
}

TEST(behavior_of, columns_are_distributions) {
    std::mt19937_64 rng(71);
    std::vector<Vec3> states;
    for (int k = 0; k < 100; k++) {
        states.push_back(random_in_ball(rng));
    }
    ObservablePair p{QubitObservable::make(1.3, {0.2, 0.5, 0}), QubitObservable::make(0.6, {0, 0, -0.5})};
    auto b = behavior_of(p, states);
    for (size_t j = 0; j < states.size(); j++) {
        for (int i = 0; i < 2; i++) {
            ASSERT_GE(b.probs[j][i][0], 0);
            ASSERT_LE(b.probs[j][i][0], 1);
            ASSERT_NEAR(b.probs[j][i][0] + b.probs[j][i][1], 1, 1e-12);
            const auto &o = i == 0 ? p.first : p.second;
            double want = trace_product(density(states[j]), half_pauli_matrix(o.bias(), o.bloch())).real();
            ASSERT_NEAR(b.probs[j][i][0], want, 1e-12);
        }
    }
}

TEST(synthesize_cc, mub_examples) {
    auto p = make_mub_pair(1);
    auto sx = StateSetR::make(kUnitX);
    auto c = synthesize_cc(p, sx);
    ASSERT_TRUE(c.has_value());
    ASSERT_LT(c->validity_error(), 1e-12);
    std::mt19937_64 rng(72);
    auto states = section_states(rng, sx, 50);
    ASSERT_LT(verify_strategy(*c, behavior_of(p, states), states), 1e-9);
    ASSERT_FALSE(synthesize_cc(p, StateSetR::make(kUnitZ)).has_value());
    ASSERT_THROW(synthesize_cc({QubitObservable::make(1.2, {}), make_unbiased({})}, sx), Error);
}

TEST(synthesize_cc, compatible_pair_uses_its_own_joint) {
    std::mt19937_64 rng(73);
    auto p = make_mub_pair(0.6);
    auto c = synthesize_cc(p, StateSetR::make(random_unit(rng)));
    ASSERT_TRUE(c.has_value());
    std::vector<Vec3> states;
    for (int k = 0; k < 50; k++) {
        states.push_back(random_in_ball(rng));
    }
    // Reproduces the pair on every state, not only on the section.
    ASSERT_LT(verify_strategy(*c, behavior_of(p, states), states), 1e-9);
}

TEST(verify_strategy, examples) {
    auto p = make_mub_pair(1);
    std::vector<Vec3> eig{kUnitX, -kUnitX, kUnitY, -kUnitY};
    CCStrategy uniform;
    uniform.alice = {{2, {}}};
    uniform.kernel = {{{{0.5, 0.5}, {0.5, 0.5}}}};
    ASSERT_LT(uniform.validity_error(), 1e-15);
    ASSERT_GE(verify_strategy(uniform, behavior_of(p, eig), eig), 0.25);

    CCStrategy split;
    split.alice = {{1, {}}, {1, {}}};
    split.kernel = {{{{0.3, 0.7}, {0.9, 0.1}}}, {{{0.7, 0.3}, {0.1, 0.9}}}};
    auto trivial = behavior_of(ObservablePair{}, eig);
    ASSERT_NEAR(verify_strategy(split, trivial, eig), 0, 1e-15);
    ASSERT_THROW(verify_strategy(split, trivial, {kUnitX}), Error);

    CCStrategy broken = split;
    broken.alice[0].scalar = 1.5;
    ASSERT_GT(broken.validity_error(), 0.1);
}

TEST(certify_non_cc, examples) {
    auto p = make_mub_pair(1);
    auto cert = certify_non_cc(p, StateSetPlane::make(0, kUnitZ));
    ASSERT_TRUE(cert.has_value());
    ASSERT_GT(cert->min_F, 0);
    auto again = certify_non_cc(p, StateSetPlane::make(0, kUnitZ));
    ASSERT_EQ(again->min_F, cert->min_F);
    ASSERT_FALSE(certify_non_cc(make_mub_pair(0.6), StateSetPlane::make(0, kUnitZ)).has_value());
    ASSERT_FALSE(certify_non_cc(p, StateSetPlane::make(0, kUnitX)).has_value());
}

TEST(sampling, exactly_one_of_strategy_or_certificate) {
    std::mt19937_64 rng(74);
    int strategies = 0, certificates = 0;
    for (int k = 0; k < 200; k++) {
        Vec3 a1 = random_in_ball(rng), a2 = random_in_ball(rng);
        auto s = StateSetR::make(random_unit(rng));
        ObservablePair p{make_unbiased(a1), make_unbiased(a2)};
        auto c = synthesize_cc(p, s);
        auto cert = certify_non_cc(p, s.as_plane());
        if (std::abs(s0R_slack(a1, a2, s)) <= 1e-6) {
            continue;
        }
        ASSERT_NE(c.has_value(), cert.has_value()) << a1 << " " << a2 << " " << s.n;
        if (c) {
            strategies++;
            auto states = section_states(rng, s, 50);
            ASSERT_LT(verify_strategy(*c, behavior_of(p, states), states), 1e-9);
        } else {
            certificates++;
        }
    }
    ASSERT_GT(strategies, 20);
    ASSERT_GT(certificates, 20);
}

TEST(strategy_json, round_trip) {
    auto c = synthesize_cc(make_mub_pair(1), StateSetR::make(kUnitX));
    auto j = strategy_to_json(*c);
    ASSERT_TRUE(j.contains("effects"));
    ASSERT_TRUE(j.contains("kernel"));
    auto back = strategy_from_json(nlohmann::json::parse(j.dump()));
    ASSERT_EQ(back.alice.size(), c->alice.size());
    for (size_t z = 0; z < back.alice.size(); z++) {
        ASSERT_EQ(back.alice[z].scalar, c->alice[z].scalar);
        ASSERT_EQ(back.alice[z].vec, c->alice[z].vec);
        ASSERT_EQ(back.kernel[z], c->kernel[z]);
    }
    ASSERT_THROW(strategy_from_json(nlohmann::json::parse(R"({"effects": 3})")), std::exception);
}
