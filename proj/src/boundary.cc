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

#include "incompat/errors.h"

namespace incompat {

InPlanePair InPlanePair::make(double a1_mag, double a2_mag, double alpha1, double alpha2) {
    if (!(a1_mag > 0 && a1_mag <= 1) || !(a2_mag > 0 && a2_mag <= 1)) {
        throw Error(ErrorKind::OutOfRange, "in-plane magnitudes must lie in (0, 1]");
    }
    return {a1_mag, a2_mag, alpha1, alpha2};
}

Vec3 InPlanePair::first() const {
    return {a1_mag * std::cos(alpha1), a1_mag * std::sin(alpha1), 0};
}

Vec3 InPlanePair::second() const {
    return {a2_mag * std::cos(alpha2), a2_mag * std::sin(alpha2), 0};
}

bool InPlanePair::incompatible() const {
    return coefficients(*this, 0).N < 0;
}

BoundaryCoefficients coefficients(const InPlanePair &p, double phi) {
    double a1s = p.a1_mag * p.a1_mag, a2s = p.a2_mag * p.a2_mag;
    double c1 = std::cos(phi - p.alpha1), c2 = std::cos(phi - p.alpha2);
    double cd = std::cos(p.alpha1 - p.alpha2);
    BoundaryCoefficients k;
    k.L = a1s * a2s * c1 * c1 * c2 * c2;
    k.M = a1s * c1 * c1 + a2s * c2 * c2 - 2 * a1s * a2s * cd * c1 * c2;
    k.N = a1s * a2s * cd * cd - a1s - a2s + 1;
    return k;
}

SumDiffFrame sum_diff_frame(const InPlanePair &p) {
    Vec3 s = p.first() + p.second();
    Vec3 d = p.first() - p.second();
    return {s.norm(), d.norm(), std::atan2(s.y, s.x), std::atan2(d.y, d.x)};
}

double f_value(const InPlanePair &p, double phi, double theta) {
    double s = std::sin(theta);
    return coefficients(p, phi).eval(s * s);
}

double g_value(const InPlanePair &p, double phi, double X) {
    SumDiffFrame fr = sum_diff_frame(p);
    double cs = std::cos(phi - fr.omega_sum), cdf = std::cos(phi - fr.omega_diff);
    double r1 = 1 - X * cs * cs, r2 = 1 - X * cdf * cdf;
    if (r1 < -1e-12 || r2 < -1e-12) {
        throw Error(ErrorKind::DomainError, "g is undefined for X > 1");
    }
    return 2 - fr.sum_mag * std::sqrt(std::max(r1, 0.0)) - fr.diff_mag * std::sqrt(std::max(r2, 0.0));
}

double boundary_root(const InPlanePair &p, double phi) {
    BoundaryCoefficients k = coefficients(p, phi);
    if (k.N >= 0) {
        throw Error(ErrorKind::NoRoot, "pair is compatible on every plane at this azimuth");
    }
    // Rationalized form of (-M + sqrt(M^2 - 4LN)) / 2L; reduces to -N/M as L -> 0.
    double den = k.M + std::sqrt(k.M * k.M - 4 * k.L * k.N);
    if (!(den > 0)) {
        throw Error(ErrorKind::NoRoot, "boundary equation has no positive root");
    }
    return std::min(-2 * k.N / den, 1.0);
}

BoundaryCurve region_CA(const InPlanePair &p, int grid) {
    BoundaryCurve curve;
    curve.samples.reserve(std::max(grid, 0));
    for (int k = 0; k < grid; k++) {
        BoundarySample s;
        s.phi = std::numbers::pi * k / grid;
        if (coefficients(p, s.phi).N < 0) {
            s.x0 = boundary_root(p, s.phi);
        }
        curve.samples.push_back(s);
    }
    return curve;
}

bool region_contains(const InPlanePair &p, double phi, double theta) {
    if (coefficients(p, phi).N >= 0) {
        return true;
    }
    double s = std::sin(theta);
    return s * s >= boundary_root(p, phi);
}

}  // namespace incompat
