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

#include <algorithm>
#include <cmath>

#include "incompat/errors.h"
#include "incompat/jointness.h"

namespace incompat {

double CCStrategy::validity_error() const {
    double err = 0;
    HalfPauli sum;
    for (const auto &e : alice) {
        err = std::max(err, -e.min_eigenvalue());
        sum = sum + e;
    }
    // The sum must equal I, i.e. scalar 2 and zero vector in the half-Pauli form.
    err = std::max({err, 0.5 * std::abs(sum.scalar - 2), 0.5 * sum.vec.norm()});
    for (const auto &per_z : kernel) {
        for (const auto &row : per_z) {
            err = std::max({err, -row[0], -row[1], std::abs(row[0] + row[1] - 1)});
        }
    }
    return err;
}

Behavior behavior_of(const ObservablePair &p, const std::vector<Vec3> &states) {
    Behavior b;
    b.probs.reserve(states.size());
    for (const auto &s : states) {
        if (!(s.norm() <= 1 + kPovmSlack)) {
            throw Error(ErrorKind::OutOfRange, "state " + s.str() + " lies outside the Bloch ball");
        }
        std::array<std::array<double, 2>, 2> col;
        int i = 0;
        for (const QubitObservable *o : {&p.first, &p.second}) {
            double plus = std::clamp(o->effect_plus().expectation(s), 0.0, 1.0);
            col[i++] = {plus, 1 - plus};
        }
        b.probs.push_back(col);
    }
    return b;
}

std::optional<CCStrategy> synthesize_cc(const ObservablePair &p, const StateSetR &s) {
    if (!p.unbiased()) {
        throw Error(ErrorKind::DomainError, "strategies are synthesized for unbiased pairs only");
    }
    Vec3 a1 = p.first.bloch(), a2 = p.second.bloch();
    CCStrategy c;
    if (a1.norm() <= kPovmSlack && a2.norm() <= kPovmSlack) {
        // Nothing to communicate: Bob flips fair coins.
        c.alice.push_back({2, {}});
        c.kernel.push_back({{{0.5, 0.5}, {0.5, 0.5}}});
        return c;
    }
    if (!unbiased_compat(a1, a2)) {
        if (!s0R_compatible_unbiased(a1, a2, s)) {
            return std::nullopt;
        }
        // On the plane a_i and its projection give the same statistics.
        a1 = project_onto_R(s, a1);
        a2 = project_onto_R(s, a2);
    }
    JointObservable4 g = synthesize_joint_unbiased(a1, a2);
    for (int mu : {+1, -1}) {
        for (int nu : {+1, -1}) {
            c.alice.push_back(g.at(mu, nu));
            std::array<std::array<double, 2>, 2> h;
            h[0] = {mu > 0 ? 1.0 : 0.0, mu > 0 ? 0.0 : 1.0};
            h[1] = {nu > 0 ? 1.0 : 0.0, nu > 0 ? 0.0 : 1.0};
            c.kernel.push_back(h);
        }
    }
    return c;
}

double verify_strategy(const CCStrategy &c, const Behavior &b, const std::vector<Vec3> &states) {
    if (b.states() != states.size() || c.alice.size() != c.kernel.size()) {
        throw Error(ErrorKind::ShapeMismatch, "behavior, states and strategy disagree in size");
    }
    double worst = 0;
    for (size_t j = 0; j < states.size(); j++) {
        for (int i = 0; i < 2; i++) {
            for (int x = 0; x < 2; x++) {
                double replay = 0;
                for (size_t z = 0; z < c.alice.size(); z++) {
                    replay += c.alice[z].expectation(states[j]) * c.kernel[z][i][x];
                }
                worst = std::max(worst, std::abs(b.probs[j][i][x] - replay));
            }
        }
    }
    return worst;
}

std::optional<Certificate> certify_non_cc(const ObservablePair &p, const StateSet &s, const OptimizerConfig &opt, double tol_F) {
    S0Verdict v = s0_compatible(p, s, opt, tol_F);
    if (v.compatible) {
        return std::nullopt;
    }
    return Certificate{s, v.min_F, v.argmin};
}

nlohmann::json strategy_to_json(const CCStrategy &c) {
    nlohmann::json effects = nlohmann::json::array();
    for (const auto &e : c.alice) {
        effects.push_back({{"bias", e.scalar}, {"bloch", {e.vec.x, e.vec.y, e.vec.z}}});
    }
    return {{"effects", effects}, {"kernel", c.kernel}};
}

CCStrategy strategy_from_json(const nlohmann::json &j) {
    CCStrategy c;
    try {
        for (const auto &e : j.at("effects")) {
            const auto &v = e.at("bloch");
            c.alice.push_back({e.at("bias").get<double>(), {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()}});
        }
        c.kernel = j.at("kernel").get<std::vector<std::array<std::array<double, 2>, 2>>>();
    } catch (const nlohmann::json::exception &ex) {
        throw Error(ErrorKind::ParseError, std::string("bad strategy JSON: ") + ex.what());
    }
    if (c.alice.size() != c.kernel.size()) {
        throw Error(ErrorKind::ShapeMismatch, "strategy needs one kernel entry per effect");
    }
    return c;
}

}  // namespace incompat
