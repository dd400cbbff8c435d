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

#ifndef INCOMPAT_RESTRICTION_H
#define INCOMPAT_RESTRICTION_H

#include "incompat/bloch.h"
#include "incompat/jointness.h"
#include "incompat/optimizer.h"
#include "incompat/statesets.h"

namespace incompat {

/// Shifts (lambda_i, xi_i) of the observables that agree with a pair on a
/// state set. xi is only meaningful for line sets.
struct RestrictionParams {
    double lambda1 = 0;
    double lambda2 = 0;
    double xi1 = 0;
    double xi2 = 0;
};

struct S0Verdict {
    bool compatible = false;
    double min_F = 0;
    RestrictionParams argmin;
    /// Constraint violation at argmin (0 when strictly feasible).
    double certificate_quality = 0;
    int evaluations = 0;
};

/// Observable with bias a0 - lambda r and Bloch vector a + lambda n; it has
/// the same statistics as o on every state of the plane section.
/// Throws Infeasible if the result is not a valid POVM.
QubitObservable tilde_observable(const QubitObservable &o, const StateSetPlane &s, double lambda);
/// Line version: Bloch vector a + lambda n + xi m.
QubitObservable tilde_observable(const QubitObservable &o, const StateSetLine &s, double lambda, double xi);

/// Minimizes the compatibility functional F over all tilde pairs; min_F is
/// floored at -1 since F diverges next to parallel tilde vectors. Sections
/// that collapse to a single state (r = 1) are reported compatible with
/// min_F = -1 without running the solver.
S0Verdict s0_compatible_plane(
    const ObservablePair &p, const StateSetPlane &s, const OptimizerConfig &opt = {}, double tol_F = kDefaultTolF);
/// With search_xi = false the xi shifts are pinned to 0, which reduces the
/// search to that of the plane {s.n = r}.
S0Verdict s0_compatible_line(
    const ObservablePair &p,
    const StateSetLine &s,
    const OptimizerConfig &opt = {},
    double tol_F = kDefaultTolF,
    bool search_xi = true);
S0Verdict s0_compatible(
    const ObservablePair &p, const StateSet &s, const OptimizerConfig &opt = {}, double tol_F = kDefaultTolF);

/// |P(a1 + a2)| + |P(a1 - a2)| - 2 with P the projection onto the plane
/// through the origin. Throws OutOfRange for vectors longer than 1.
double s0R_slack(const Vec3 &a1, const Vec3 &a2, const StateSetR &s);
bool s0R_compatible_unbiased(const Vec3 &a1, const Vec3 &a2, const StateSetR &s);

}  // namespace incompat

#endif
