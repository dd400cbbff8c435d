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

#ifndef INCOMPAT_BOUNDARY_H
#define INCOMPAT_BOUNDARY_H

#include <optional>
#include <vector>

#include "incompat/bloch.h"

namespace incompat {

/// Unbiased pair with Bloch vectors a_i (cos alpha_i, sin alpha_i, 0).
struct InPlanePair {
    double a1_mag = 1;
    double a2_mag = 1;
    double alpha1 = 0;
    double alpha2 = 0;

    /// Throws OutOfRange unless both magnitudes lie in (0, 1].
    static InPlanePair make(double a1_mag, double a2_mag, double alpha1, double alpha2);
    Vec3 first() const;
    Vec3 second() const;
    bool incompatible() const;
};

/// f(phi, theta) = L sin^4(theta) + M sin^2(theta) + N, with the plane normal
/// n = (sin theta cos phi, sin theta sin phi, cos theta).
struct BoundaryCoefficients {
    double L = 0;
    double M = 0;
    double N = 0;

    double eval(double X) const {
        return (L * X + M) * X + N;
    }
};

/// Magnitudes and polar angles of a1 + a2 and a1 - a2.
struct SumDiffFrame {
    double sum_mag = 0;
    double diff_mag = 0;
    double omega_sum = 0;
    double omega_diff = 0;
};

BoundaryCoefficients coefficients(const InPlanePair &p, double phi);
SumDiffFrame sum_diff_frame(const InPlanePair &p);

/// Nonnegative exactly when the pair is compatible on the through-origin
/// plane with normal n(phi, theta).
double f_value(const InPlanePair &p, double phi, double theta);
/// 2 - |a1+a2| sqrt(1 - X cos^2(phi - omega_+)) - |a1-a2| sqrt(1 - X cos^2(phi - omega_-)).
/// Throws DomainError if a radicand is below -1e-12.
double g_value(const InPlanePair &p, double phi, double X);

/// Unique root X0 in (0, 1] of L X^2 + M X + N. Throws NoRoot when N >= 0.
double boundary_root(const InPlanePair &p, double phi);

struct BoundarySample {
    double phi = 0;
    /// Absent when the pair is compatible on every plane at this azimuth.
    std::optional<double> x0;
};

/// X0 sampled at phi_k = k pi / grid, k = 0..grid-1. The compatible region is
/// {sin^2(theta) >= X0(phi)}, extended by f(phi, theta) = f(phi, pi - theta)
/// and f(phi, theta) = f(phi + pi, theta).
struct BoundaryCurve {
    std::vector<BoundarySample> samples;
};

BoundaryCurve region_CA(const InPlanePair &p, int grid);
/// Membership in the compatible region, evaluated from the root at phi.
bool region_contains(const InPlanePair &p, double phi, double theta);

}  // namespace incompat

#endif
