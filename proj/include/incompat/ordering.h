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

#ifndef INCOMPAT_ORDERING_H
#define INCOMPAT_ORDERING_H

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "incompat/bloch.h"
#include "incompat/errors.h"
#include "incompat/jointness.h"
#include "incompat/optimizer.h"
#include "incompat/statesets.h"

namespace incompat {

/// Effort knobs for the order searches. Witnesses need the lesser pair's
/// functional above tol_F + witness_margin on a set where the greater pair's
/// functional is at most tol_F.
struct SearchConfig {
    /// Fibonacci normals for the through-origin plane search.
    int normals = 4000;
    /// Local refinement of the best grid normals when the grid finds nothing.
    int refine_candidates = 8;
    /// Normals and distances of the plane max-min scan.
    int plane_normals = 2000;
    std::vector<double> plane_radii = default_radii();
    /// Normals, directions per normal and distances of the line max-min scan.
    int line_normals = 400;
    int line_dirs = 8;
    std::vector<double> line_radii = default_radii();
    bool scan_planes = true;
    bool scan_lines = true;
    /// Solver settings used inside scans and for witness replay.
    OptimizerConfig scan_opt{.starts = 8};
    OptimizerConfig replay_opt{.starts = 64};
    /// Lambda grid of the convex-decomposition test.
    int convex_grid = 1000;
    double tol_F = kDefaultTolF;
    double witness_margin = 1e-9;
    /// Bisection tolerance for threshold extraction.
    double bisect_tol = 5e-4;
    /// Run max-min scans at the lower end of each threshold bracket.
    bool confirm_thresholds = true;
    /// Upper bound on scanned state sets per order check; 0 means unlimited.
    long max_state_sets = 0;
    int jobs = 1;

    static std::vector<double> default_radii();
};

/// Effort spent by a search, so verdicts can be reproduced.
struct SearchBudget {
    int normals = 0;
    long plane_sets = 0;
    long line_sets = 0;
    long solver_calls = 0;
};

enum class OrderKind { RefutedByWitness, SufficientConvex, SufficientPostProcessing, ConsistentUpToBudget };
std::string_view order_kind_name(OrderKind k);

struct OrderVerdict {
    OrderKind kind = OrderKind::ConsistentUpToBudget;
    /// Set on which the lesser pair is incompatible and the greater is not.
    std::optional<StateSet> witness;
    /// min F of the lesser and greater pair on the witness.
    double witness_lesser_F = 0;
    double witness_greater_F = 0;
    /// Largest lesser min F over scanned sets where the greater pair is
    /// compatible; values at or below tol_F are early-exit upper bounds.
    double max_min_F = -1;
    std::string note;
    SearchBudget budget;
};

/// Thrown when a search hits SearchConfig::max_state_sets. The partial
/// verdict covers the sets scanned before the limit.
class BudgetExceeded : public Error {
   public:
    BudgetExceeded(const std::string &msg, OrderVerdict partial)
        : Error(ErrorKind::BudgetExceeded, msg), partial_(std::move(partial)) {
    }
    const OrderVerdict &partial() const {
        return partial_;
    }

   private:
    OrderVerdict partial_;
};

/// The pair (t x, t (cos theta y + sin theta z)).
ObservablePair make_B_mub(double t, double theta);
/// The sharp mutually unbiased pair (x, y).
ObservablePair make_A_mub();

/// 1/t - 1 + sqrt(2 - 1/t^2) <= cos(theta), or the corner (t, theta) = (1, 0).
/// Throws OutOfRange unless 1/sqrt(2) < t <= 1 and 0 <= theta <= pi/2.
bool convex_region_blue(double t, double theta);
/// Sweeps lambda = k / grid looking for a compatible N with B = lambda A + (1 - lambda) N.
bool convex_region_oracle(double t, double theta, int grid);

/// p[y][x] = p(y | x), index 0 for '+'.
using StochasticMatrix = std::array<std::array<double, 2>, 2>;
/// Matrix with b(y) = sum_x p(y | x) a(x), if one exists.
std::optional<StochasticMatrix> post_processing_check(const QubitObservable &b, const QubitObservable &a);

/// Mixing weight lambda in (0, 1] with lesser = lambda greater + (1 - lambda) N,
/// N a compatible pair, if one is found on a grid of the given size.
std::optional<double> convex_decomposition(const ObservablePair &lesser, const ObservablePair &greater, int grid);

/// Through-origin plane where the unbiased `lesser` pair is incompatible and
/// `greater` is compatible. Scans `grid` Fibonacci normals, then polishes the
/// best `refine` candidates with a local search when the grid finds nothing.
std::optional<StateSetR> sR_witness_search(
    const ObservablePair &lesser, const ObservablePair &greater, int grid, int refine = 8, double margin = 1e-9);

struct ScanOutcome {
    double max_min_F = -1;
    std::optional<StateSet> argmax;
    long sets = 0;
    long solver_calls = 0;
    bool truncated = false;
};

/// Max over plane (resp. line) sets with `greater` compatible of the
/// lesser pair's min F. Deterministic for any job count.
ScanOutcome maxmin_plane_scan(
    const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg, long max_sets = 0);
ScanOutcome maxmin_line_scan(
    const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg, long max_sets = 0);

/// Sufficient conditions, then the through-origin witness search, then
/// max-min scans. ConsistentUpToBudget is evidence, not a proof.
/// Throws BudgetExceeded when cfg.max_state_sets is hit.
OrderVerdict order_check(const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg);

/// Replays a witness through the restriction solver.
bool verify_witness(
    const ObservablePair &lesser, const ObservablePair &greater, const StateSet &witness, const SearchConfig &cfg);

struct ThresholdResult {
    double theta = 0;
    double tmax = 1;
    double lo = 1;
    double hi = 1;
    /// Max-min scans at t = lo found no witness.
    bool confirmed = false;
    /// Scan outcome at t = lo, recorded when a confirmation ran.
    std::optional<OrderVerdict> confirmation;
};

/// Largest t for which make_B_mub(t, theta) has no through-origin witness
/// against make_A_mub(), bisected to cfg.bisect_tol; tmax is the bracket
/// midpoint. When no witness exists even at t = 1 the bracket is [1, 1].
ThresholdResult tmax_for_theta(double theta, const SearchConfig &cfg);

enum class RegionLabel { Blue, Gray, White, OrderedNew };
std::string_view region_label_name(RegionLabel l);

struct RegionClass {
    RegionLabel label = RegionLabel::White;
    double t = 0;
    double theta = 0;
    std::optional<StateSetR> witness;
};

/// Blue: convex decomposition; Gray: through-origin witness against the
/// sharp pair; OrderedNew: t <= tmax(theta) with the threshold confirmed by
/// scans; White otherwise. Pass a precomputed threshold to avoid recomputing
/// it for every t in a column.
RegionClass classify_region(double t, double theta, const SearchConfig &cfg, const ThresholdResult *column = nullptr);

struct DimensionReport {
    int chi_inc = 4;
    int chi_com = 1;
    std::optional<StateSet> inc_witness;
    std::optional<StateSet> com_witness;
    SearchBudget budget;
};

/// Search-based bounds on the incompatibility and compatibility dimensions.
/// Throws DomainError for a compatible pair.
DimensionReport dimensions(const ObservablePair &p, const SearchConfig &cfg);

enum class EquivalenceKind { DistinctWithWitness, IndistinguishableUpToBudget };

struct EquivalenceResult {
    EquivalenceKind kind = EquivalenceKind::IndistinguishableUpToBudget;
    OrderVerdict a_below_b;
    OrderVerdict b_below_a;
};

EquivalenceResult equivalence_probe(const ObservablePair &a, const ObservablePair &b, const SearchConfig &cfg);

}  // namespace incompat

#endif
