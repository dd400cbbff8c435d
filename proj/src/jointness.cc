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

#include "incompat/jointness.h"

#include <algorithm>
#include <cmath>

#include "incompat/errors.h"

namespace incompat {

namespace {

BuschDiagnostics compute(double b1, const Vec3 &a1, double b2, const Vec3 &a2) {
    BuschDiagnostics d;
    double dot12 = a1.dot(a2);
    d.gamma = dot12 - (b1 - 1) * (b2 - 1);
    double cross2 = a1.cross(a2).norm2();
    if (cross2 < kParallelCutoff * kParallelCutoff) {
        d.degenerate_parallel = true;
        d.F = -1;
        return d;
    }
    // (a2^0 + gamma a1^0 - gamma - 1) regrouped so unbiased inputs give exact zeros.
    double k2 = (b2 - 1) + d.gamma * (b1 - 1);
    double k1 = (b1 - 1) + d.gamma * (b2 - 1);
    d.alpha = (k2 * a2.norm2() - k1 * dot12) / cross2;
    d.beta = (k1 * a1.norm2() - k2 * dot12) / cross2;
    d.g = a1 * d.alpha + a2 * d.beta;
    Vec3 s = a1 + a2;
    Vec3 t = a1 - a2;
    d.norm_term = (s + d.g).norm() + (s - d.g).norm() + (t + d.g).norm() + (t - d.g).norm() - 4;
    d.F = std::min({1 - std::abs(d.alpha), 1 - std::abs(d.beta), d.norm_term});
    return d;
}

}  // namespace

BuschDiagnostics busch_F(const QubitObservable &a1, const QubitObservable &a2) {
    return compute(a1.bias(), a1.bloch(), a2.bias(), a2.bloch());
}

BuschDiagnostics busch_F(const ObservablePair &p) {
    return busch_F(p.first, p.second);
}

double busch_F_value(double bias1, const Vec3 &a1, double bias2, const Vec3 &a2) {
    return compute(bias1, a1, bias2, a2).F;
}

BuschDiagnostics busch_F_raw(double bias1, const Vec3 &a1, double bias2, const Vec3 &a2) {
    return compute(bias1, a1, bias2, a2);
}

CompatVerdict check_compatibility(const ObservablePair &p, double tol_F) {
    CompatVerdict v;
    v.diagnostics = busch_F(p);
    v.compatible = v.diagnostics.degenerate_parallel || v.diagnostics.F <= tol_F;
    v.boundary = !v.diagnostics.degenerate_parallel && std::abs(v.diagnostics.F) <= tol_F;
    return v;
}

bool is_compatible(const ObservablePair &p, double tol_F) {
    return check_compatibility(p, tol_F).compatible;
}

double unbiased_slack(const Vec3 &a1, const Vec3 &a2) {
    return (a1 + a2).norm() + (a1 - a2).norm() - 2;
}

bool unbiased_compat(const Vec3 &a1, const Vec3 &a2) {
    if (!(a1.norm() <= 1 + kPovmSlack) || !(a2.norm() <= 1 + kPovmSlack)) {
        throw Error(ErrorKind::OutOfRange, "unbiased Bloch vectors must have norm <= 1");
    }
    return unbiased_slack(a1, a2) <= kPovmSlack;
}

HalfPauli JointObservable4::first_marginal(int mu) const {
    return at(mu, +1) + at(mu, -1);
}

HalfPauli JointObservable4::second_marginal(int nu) const {
    return at(+1, nu) + at(-1, nu);
}

double JointObservable4::min_eigenvalue() const {
    double m = effects[0][0].min_eigenvalue();
    for (const auto &row : effects) {
        for (const auto &e : row) {
            m = std::min(m, e.min_eigenvalue());
        }
    }
    return m;
}

JointObservable4 synthesize_joint_unbiased(const Vec3 &a1, const Vec3 &a2) {
    double lo = (a1 + a2).norm() - 1;
    double hi = 1 - (a1 - a2).norm();
    if (lo > hi + kPovmSlack) {
        throw Error(ErrorKind::Incompatible, "no joint observable: |a1+a2| + |a1-a2| > 2");
    }
    JointObservable4 j;
    j.c = std::clamp(0.5 * (lo + hi), std::min(lo, hi), hi);
    for (int mu : {+1, -1}) {
        for (int nu : {+1, -1}) {
            HalfPauli e{0.5 * (1 + mu * nu * j.c), (a1 * mu + a2 * nu) * 0.5};
            j.effects[mu > 0 ? 0 : 1][nu > 0 ? 0 : 1] = e;
        }
    }
    return j;
}

double depolarizing_threshold(double t) {
    return 0.5 * (1 - t + std::sqrt((1 - t) * (1 + 3 * t)));
}

bool depolarizing_compat(double a_norm, double t) {
    if (!(a_norm >= 0 && a_norm <= 1) || !(t >= 0 && t <= 1)) {
        throw Error(ErrorKind::OutOfRange, "depolarizing check needs |a| and t in [0, 1]");
    }
    return a_norm <= depolarizing_threshold(t) + kPovmSlack;
}

}  // namespace incompat
