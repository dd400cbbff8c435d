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

#ifndef INCOMPAT_SAMPLING_H
#define INCOMPAT_SAMPLING_H

#include <array>
#include <optional>
#include <vector>

#include "json.hpp"

#include "incompat/bloch.h"
#include "incompat/restriction.h"
#include "incompat/statesets.h"

namespace incompat {

/// P(x | j, i) stored as probs[j][i][x], with x = 0 for '+' and 1 for '-'.
struct Behavior {
    std::vector<std::array<std::array<double, 2>, 2>> probs;

    size_t states() const {
        return probs.size();
    }
};

/// Alice measures M and sends the outcome z; Bob answers x with probability
/// kernel[z][i][x] when asked about observable i.
struct CCStrategy {
    std::vector<HalfPauli> alice;
    std::vector<std::array<std::array<double, 2>, 2>> kernel;

    /// Largest violation of positivity, completeness or kernel normalization.
    double validity_error() const;
};

/// Throws OutOfRange for a state outside the Bloch ball.
Behavior behavior_of(const ObservablePair &p, const std::vector<Vec3> &states);

/// Strategy reproducing the unbiased pair on every state of the
/// through-origin plane, built from the joint of the projected pair; absent
/// when the pair is incompatible there. Throws DomainError for biased pairs.
std::optional<CCStrategy> synthesize_cc(const ObservablePair &p, const StateSetR &s);

/// max |P(x|j,i) - sum_z Tr[rho_j M(z)] h(x|i,z)|. Throws ShapeMismatch when
/// the behavior and state list sizes differ.
double verify_strategy(const CCStrategy &c, const Behavior &b, const std::vector<Vec3> &states);

/// Evidence that no classical-communication strategy reproduces the pair on
/// the set: the minimized functional stays above tol_F.
struct Certificate {
    StateSet set;
    double min_F = 0;
    RestrictionParams argmin;
};

std::optional<Certificate> certify_non_cc(
    const ObservablePair &p, const StateSet &s, const OptimizerConfig &opt = {}, double tol_F = kDefaultTolF);

/// {"effects": [{"bias":, "bloch": [..]}, ...], "kernel": [[[h(+|1,z), h(-|1,z)], [...]], ...]}
nlohmann::json strategy_to_json(const CCStrategy &c);
CCStrategy strategy_from_json(const nlohmann::json &j);

}  // namespace incompat

#endif
