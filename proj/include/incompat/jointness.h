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

#ifndef INCOMPAT_JOINTNESS_H
#define INCOMPAT_JOINTNESS_H

#include <array>

#include "incompat/bloch.h"

namespace incompat {

/// Default threshold on the compatibility functional F.
inline constexpr double kDefaultTolF = 1e-9;

/// Below this |a1 x a2| the pair is treated as commuting.
inline constexpr double kParallelCutoff = 1e-10;

/// Intermediate quantities of the two-observable joint measurability test.
///
/// F = min{1 - |alpha|, 1 - |beta|, sum_nu |a1 + a2 + nu g| + sum_nu |a1 - a2 + nu g| - 4}
/// and the pair is compatible iff F <= 0.
struct BuschDiagnostics {
    double gamma = 0;
    double alpha = 0;
    double beta = 0;
    Vec3 g;
    /// The third term, sum of the four norms minus 4.
    double norm_term = 0;
    double F = -1;
    bool degenerate_parallel = false;
};

BuschDiagnostics busch_F(const QubitObservable &a1, const QubitObservable &a2);
BuschDiagnostics busch_F(const ObservablePair &p);

/// Just the F value; hot path for the restriction solver.
double busch_F_value(double bias1, const Vec3 &a1, double bias2, const Vec3 &a2);
/// Diagnostics for raw parameters, without checking that they form valid observables.
BuschDiagnostics busch_F_raw(double bias1, const Vec3 &a1, double bias2, const Vec3 &a2);

struct CompatVerdict {
    bool compatible = false;
    /// |F| <= tol_F: the verdict sits on the boundary of the compatible set.
    bool boundary = false;
    BuschDiagnostics diagnostics;
};

CompatVerdict check_compatibility(const ObservablePair &p, double tol_F = kDefaultTolF);
bool is_compatible(const ObservablePair &p, double tol_F = kDefaultTolF);

/// |a1 + a2| + |a1 - a2| - 2; the unbiased pair is compatible iff this is <= 0.
double unbiased_slack(const Vec3 &a1, const Vec3 &a2);

/// Throws OutOfRange if either vector is longer than 1.
bool unbiased_compat(const Vec3 &a1, const Vec3 &a2);

/// Joint POVM G(mu, nu) on outcomes {+,-}^2, index 0 for '+' and 1 for '-'.
struct JointObservable4 {
    std::array<std::array<HalfPauli, 2>, 2> effects;
    /// Correlation parameter of the construction.
    double c = 0;

    const HalfPauli &at(int mu, int nu) const {
        return effects[mu > 0 ? 0 : 1][nu > 0 ? 0 : 1];
    }
    /// sum_nu G(mu, nu)
    HalfPauli first_marginal(int mu) const;
    /// sum_mu G(mu, nu)
    HalfPauli second_marginal(int nu) const;
    double min_eigenvalue() const;
};

/// G(mu, nu) = [(1 + mu nu c) I + (mu a1 + nu a2).sigma] / 4 with c the midpoint
/// of [|a1 + a2| - 1, 1 - |a1 - a2|]. Throws Incompatible when that interval is empty.
JointObservable4 synthesize_joint_unbiased(const Vec3 &a1, const Vec3 &a2);

/// Unbiased observable with |a| = a_norm vs. depolarizing channel of visibility t.
bool depolarizing_compat(double a_norm, double t);
double depolarizing_threshold(double t);

}  // namespace incompat

#endif
