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

#include "incompat/ordering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "incompat/nelder_mead.h"
#include "incompat/parallel.h"
#include "incompat/restriction.h"

namespace incompat {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool same_pair(const ObservablePair &a, const ObservablePair &b) {
    auto close = [](const QubitObservable &x, const QubitObservable &y) {
        return std::abs(x.bias() - y.bias()) <= kPovmSlack && (x.bloch() - y.bloch()).norm() <= kPovmSlack;
    };
    return close(a.first, b.first) && close(a.second, b.second);
}

ObservablePair swapped(const ObservablePair &p) {
    return {p.second, p.first};
}

void check_region_args(double t, double theta) {
    if (!(t > kInvSqrt2 && t <= 1) || !(theta >= 0 && theta <= std::numbers::pi / 2 + 1e-12)) {
        throw Error(ErrorKind::OutOfRange, "region needs 1/sqrt(2) < t <= 1 and 0 <= theta <= pi/2");
    }
}

Vec3 normal_from_angles(double phi, double theta) {
    return AngleParam{phi, theta}.to_normal();
}

/// Positive exactly when n separates the pairs: lesser incompatible, greater compatible.
double separation(const Vec3 &l1, const Vec3 &l2, const Vec3 &g1, const Vec3 &g2, const Vec3 &n) {
    StateSetR s{n};
    double lesser = project_onto_R(s, l1 + l2).norm() + project_onto_R(s, l1 - l2).norm() - 2;
    double greater = project_onto_R(s, g1 + g2).norm() + project_onto_R(s, g1 - g2).norm() - 2;
    return std::min(lesser, -greater);
}

struct SetResult {
    bool greater_compatible = false;
    double lesser_F = -std::numeric_limits<double>::infinity();
    int calls = 0;
};

SetResult evaluate_set(const ObservablePair &lesser, const ObservablePair &greater, const StateSet &s, const SearchConfig &cfg) {
    SetResult r;
    OptimizerConfig early = cfg.scan_opt;
    early.stop_below = cfg.tol_F;
    r.calls = 1;
    if (!s0_compatible(greater, s, early, cfg.tol_F).compatible) {
        return r;
    }
    r.greater_compatible = true;
    r.calls = 2;
    r.lesser_F = s0_compatible(lesser, s, early, cfg.tol_F).min_F;
    return r;
}

template <typename SetAt>
ScanOutcome run_scan(
    const ObservablePair &lesser,
    const ObservablePair &greater,
    const SearchConfig &cfg,
    long total,
    long max_sets,
    SetAt &&set_at) {
    ScanOutcome out;
    long count = total;
    if (max_sets > 0 && count > max_sets) {
        count = max_sets;
        out.truncated = true;
    }
    std::vector<SetResult> results(static_cast<size_t>(std::max(count, 0L)));
    parallel_for(results.size(), cfg.jobs, [&](size_t i) {
        results[i] = evaluate_set(lesser, greater, set_at(static_cast<long>(i)), cfg);
    });
    out.sets = count;
    long best = -1;
    for (size_t i = 0; i < results.size(); i++) {
        out.solver_calls += results[i].calls;
        if (!results[i].greater_compatible) {
            continue;
        }
        if (best < 0 || results[i].lesser_F > results[static_cast<size_t>(best)].lesser_F) {
            best = static_cast<long>(i);
        }
    }
    if (best >= 0) {
        out.max_min_F = results[static_cast<size_t>(best)].lesser_F;
        out.argmax = set_at(best);
    }
    return out;
}

OrderVerdict refuted(const StateSet &w, double lesser_F, double greater_F, std::string note) {
    OrderVerdict v;
    v.kind = OrderKind::RefutedByWitness;
    v.witness = w;
    v.witness_lesser_F = lesser_F;
    v.witness_greater_F = greater_F;
    v.note = std::move(note);
    return v;
}

}  // namespace

std::vector<double> SearchConfig::default_radii() {
    std::vector<double> r;
    for (int k = 0; k < 20; k++) {
        r.push_back(0.05 * k);
    }
    return r;
}

std::string_view order_kind_name(OrderKind k) {
    switch (k) {
        case OrderKind::RefutedByWitness:
            return "refuted_by_witness";
        case OrderKind::SufficientConvex:
            return "sufficient_convex";
        case OrderKind::SufficientPostProcessing:
            return "sufficient_post_processing";
        case OrderKind::ConsistentUpToBudget:
            return "consistent_up_to_budget";
    }
    return "unknown";
}

std::string_view region_label_name(RegionLabel l) {
    switch (l) {
        case RegionLabel::Blue:
            return "blue";
        case RegionLabel::Gray:
            return "gray";
        case RegionLabel::White:
            return "white";
        case RegionLabel::OrderedNew:
            return "ordered_new";
    }
    return "unknown";
}

ObservablePair make_B_mub(double t, double theta) {
    if (!(t >= 0 && t <= 1)) {
        throw Error(ErrorKind::OutOfRange, "t must lie in [0, 1]");
    }
    return {make_unbiased(kUnitX * t), make_unbiased(Vec3{0, std::cos(theta), std::sin(theta)} * t)};
}

ObservablePair make_A_mub() {
    return make_mub_pair(1.0);
}

bool convex_region_blue(double t, double theta) {
    check_region_args(t, theta);
    if (t == 1 && theta == 0) {
        return true;
    }
    return 1 / t - 1 + std::sqrt(std::max(0.0, 2 - 1 / (t * t))) <= std::cos(theta);
}

bool convex_region_oracle(double t, double theta, int grid) {
    check_region_args(t, theta);
    if (t == 1 && theta == 0) {
        return true;
    }
    double ct = t * std::cos(theta), st = t * std::sin(theta);
    for (int k = 1; k < grid; k++) {
        double lam = static_cast<double>(k) / grid;
        Vec3 n1{(t - lam) / (1 - lam), 0, 0};
        Vec3 n2{0, (ct - lam) / (1 - lam), st / (1 - lam)};
        if (n1.norm() <= 1 + kPovmSlack && n2.norm() <= 1 + kPovmSlack && unbiased_compat(n1, n2)) {
            return true;
        }
    }
    return false;
}

std::optional<StochasticMatrix> post_processing_check(const QubitObservable &b, const QubitObservable &a) {
    // b(+) = p(+|-) I + k a(+) with k = p(+|+) - p(+|-).
    double k = 0;
    double a2 = a.bloch().norm2();
    if (a2 > kPovmSlack * kPovmSlack) {
        k = b.bloch().dot(a.bloch()) / a2;
    }
    if ((b.bloch() - a.bloch() * k).norm() > 1e-12) {
        return std::nullopt;
    }
    double pm = 0.5 * (b.bias() - k * a.bias());
    double pp = pm + k;
    auto in_unit = [](double x) { return x >= -1e-12 && x <= 1 + 1e-12; };
    if (!in_unit(pm) || !in_unit(pp)) {
        return std::nullopt;
    }
    pp = std::clamp(pp, 0.0, 1.0);
    pm = std::clamp(pm, 0.0, 1.0);
    StochasticMatrix m;
    m[0] = {pp, pm};
    m[1] = {1 - pp, 1 - pm};
    return m;
}

std::optional<double> convex_decomposition(const ObservablePair &lesser, const ObservablePair &greater, int grid) {
    if (same_pair(lesser, greater)) {
        return 1.0;
    }
    auto rest = [](const QubitObservable &b, const QubitObservable &a, double lam, double &bias, Vec3 &vec) {
        bias = (b.bias() - lam * a.bias()) / (1 - lam);
        vec = (b.bloch() - a.bloch() * lam) / (1 - lam);
        double n = vec.norm();
        return n <= bias + kPovmSlack && bias + n <= 2 + kPovmSlack;
    };
    for (int k = 1; k < grid; k++) {
        double lam = static_cast<double>(k) / grid;
        double b1, b2;
        Vec3 v1, v2;
        if (!rest(lesser.first, greater.first, lam, b1, v1) || !rest(lesser.second, greater.second, lam, b2, v2)) {
            continue;
        }
        if (busch_F_value(b1, v1, b2, v2) <= kDefaultTolF) {
            return lam;
        }
    }
    return std::nullopt;
}

std::optional<StateSetR> sR_witness_search(
    const ObservablePair &lesser, const ObservablePair &greater, int grid, int refine, double margin) {
    if (!lesser.unbiased() || !greater.unbiased()) {
        throw Error(ErrorKind::DomainError, "through-origin witness search needs unbiased pairs");
    }
    const Vec3 l1 = lesser.first.bloch(), l2 = lesser.second.bloch();
    const Vec3 g1 = greater.first.bloch(), g2 = greater.second.bloch();
    if (unbiased_slack(l1, l2) <= 0) {
        return std::nullopt;
    }
    auto normals = fibonacci_sphere(grid);
    std::vector<double> h(normals.size());
    for (size_t i = 0; i < normals.size(); i++) {
        h[i] = separation(l1, l2, g1, g2, normals[i]);
    }
    std::vector<size_t> order(normals.size());
    for (size_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return h[a] > h[b]; });
    if (!order.empty() && h[order[0]] > margin) {
        return StateSetR{normals[order[0]]};
    }

    // The witness cap shrinks to a point at the threshold, so polish the
    // most promising grid normals in (phi, theta).
    auto neg_h = [&](const detail::Point &p) { return -separation(l1, l2, g1, g2, normal_from_angles(p[0], p[1])); };
    detail::Point lo{}, hi{}, step{};
    lo[0] = -4 * std::numbers::pi;
    hi[0] = 4 * std::numbers::pi;
    lo[1] = -2 * std::numbers::pi;
    hi[1] = 2 * std::numbers::pi;
    step[0] = step[1] = 0.05;
    double best_h = -std::numeric_limits<double>::infinity();
    Vec3 best_n;
    int limit = std::min<int>(refine, static_cast<int>(order.size()));
    for (int c = 0; c < limit; c++) {
        const Vec3 &n = normals[order[c]];
        detail::Point x0{};
        x0[0] = std::atan2(n.y, n.x);
        x0[1] = std::acos(std::clamp(n.z, -1.0, 1.0));
        detail::DescentStats stats;
        auto [x, fx] = detail::nelder_mead(neg_h, 2, x0, step, lo, hi, 400, 1e-15, 1e-12, stats);
        std::tie(x, fx) = detail::nelder_mead(neg_h, 2, x, step, lo, hi, 400, 1e-15, 1e-12, stats);
        if (-fx > best_h) {
            best_h = -fx;
            best_n = normal_from_angles(x[0], x[1]);
        }
    }
    if (best_h > margin) {
        return StateSetR{best_n};
    }
    return std::nullopt;
}

ScanOutcome maxmin_plane_scan(
    const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg, long max_sets) {
    auto normals = fibonacci_sphere(cfg.plane_normals);
    const long per_r = static_cast<long>(normals.size());
    const long total = per_r * static_cast<long>(cfg.plane_radii.size());
    return run_scan(lesser, greater, cfg, total, max_sets, [&](long i) -> StateSet {
        return StateSetPlane::make(cfg.plane_radii[static_cast<size_t>(i / per_r)], normals[static_cast<size_t>(i % per_r)]);
    });
}

ScanOutcome maxmin_line_scan(
    const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg, long max_sets) {
    auto normals = fibonacci_sphere(cfg.line_normals);
    // Directions m cover a half-turn: m and -m describe the same line.
    std::vector<std::pair<Vec3, Vec3>> frames;
    frames.reserve(normals.size());
    for (const auto &n : normals) {
        frames.push_back(orthonormal_complement(n));
    }
    const long dirs = std::max(cfg.line_dirs, 1);
    const long per_r = static_cast<long>(normals.size()) * dirs;
    const long total = per_r * static_cast<long>(cfg.line_radii.size());
    return run_scan(lesser, greater, cfg, total, max_sets, [&](long i) -> StateSet {
        size_t ri = static_cast<size_t>(i / per_r);
        size_t ni = static_cast<size_t>((i % per_r) / dirs);
        double a = std::numbers::pi * static_cast<double>(i % dirs) / static_cast<double>(dirs);
        const auto &[e1, e2] = frames[ni];
        Vec3 m = e1 * std::cos(a) + e2 * std::sin(a);
        return StateSetLine::make(cfg.line_radii[ri], normals[ni], m);
    });
}

bool verify_witness(
    const ObservablePair &lesser, const ObservablePair &greater, const StateSet &witness, const SearchConfig &cfg) {
    S0Verdict l = s0_compatible(lesser, witness, cfg.replay_opt, cfg.tol_F);
    if (l.compatible) {
        return false;
    }
    return s0_compatible(greater, witness, cfg.replay_opt, cfg.tol_F).compatible;
}

OrderVerdict order_check(const ObservablePair &lesser, const ObservablePair &greater, const SearchConfig &cfg) {
    OrderVerdict v;
    if (is_compatible(lesser, cfg.tol_F)) {
        v.note = "trivially ordered: the lesser pair is compatible";
        return v;
    }
    for (const ObservablePair &g : {greater, swapped(greater)}) {
        if (post_processing_check(lesser.first, g.first) && post_processing_check(lesser.second, g.second)) {
            v.kind = OrderKind::SufficientPostProcessing;
            return v;
        }
    }
    for (const ObservablePair &g : {greater, swapped(greater)}) {
        if (auto lam = convex_decomposition(lesser, g, cfg.convex_grid)) {
            v.kind = OrderKind::SufficientConvex;
            v.note = "lambda=" + format_number(*lam);
            return v;
        }
    }

    auto replay = [&](const StateSet &w, const std::string &origin) -> std::optional<OrderVerdict> {
        S0Verdict l = s0_compatible(lesser, w, cfg.replay_opt, cfg.tol_F);
        S0Verdict g = s0_compatible(greater, w, cfg.replay_opt, cfg.tol_F);
        v.budget.solver_calls += 2;
        if (l.compatible || !g.compatible) {
            return std::nullopt;
        }
        OrderVerdict r = refuted(w, l.min_F, g.min_F, origin);
        r.budget = v.budget;
        return r;
    };

    if (lesser.unbiased() && greater.unbiased()) {
        v.budget.normals = cfg.normals;
        if (auto w = sR_witness_search(lesser, greater, cfg.normals, cfg.refine_candidates, cfg.witness_margin)) {
            if (auto r = replay(w->as_plane(), "through-origin plane")) {
                return *r;
            }
            v.note = "through-origin candidate failed replay; ";
        }
    }

    long remaining = cfg.max_state_sets;
    auto scan = [&](const ScanOutcome &s, long &counter, const char *what) -> std::optional<OrderVerdict> {
        counter += s.sets;
        v.budget.solver_calls += s.solver_calls;
        v.max_min_F = std::max(v.max_min_F, s.max_min_F);
        if (remaining > 0) {
            remaining -= s.sets;
        }
        if (s.argmax && s.max_min_F > cfg.tol_F + cfg.witness_margin) {
            if (auto r = replay(*s.argmax, std::string(what) + " scan")) {
                r->max_min_F = v.max_min_F;
                return r;
            }
            v.note += std::string(what) + " scan candidate failed replay; ";
        }
        if (s.truncated) {
            throw BudgetExceeded("state-set budget exhausted during the " + std::string(what) + " scan", v);
        }
        return std::nullopt;
    };
    auto budget_left = [&] {
        if (cfg.max_state_sets <= 0) {
            return 0L;
        }
        if (remaining <= 0) {
            throw BudgetExceeded("state-set budget exhausted", v);
        }
        return remaining;
    };
    if (cfg.scan_planes) {
        if (auto r = scan(maxmin_plane_scan(lesser, greater, cfg, budget_left()), v.budget.plane_sets, "plane")) {
            return *r;
        }
    }
    if (cfg.scan_lines) {
        if (auto r = scan(maxmin_line_scan(lesser, greater, cfg, budget_left()), v.budget.line_sets, "line")) {
            return *r;
        }
    }
    v.kind = OrderKind::ConsistentUpToBudget;
    v.note += "no witness found";
    return v;
}

ThresholdResult tmax_for_theta(double theta, const SearchConfig &cfg) {
    if (!(theta >= 0 && theta <= std::numbers::pi / 2 + 1e-12)) {
        throw Error(ErrorKind::OutOfRange, "theta must lie in [0, pi/2]");
    }
    const ObservablePair greater = make_A_mub();
    auto has_witness = [&](double t) {
        return sR_witness_search(make_B_mub(t, theta), greater, cfg.normals, cfg.refine_candidates, cfg.witness_margin)
            .has_value();
    };
    ThresholdResult res;
    res.theta = theta;
    if (!has_witness(1.0)) {
        res.lo = res.hi = res.tmax = 1.0;
    } else {
        Bracket b = bisect_threshold(has_witness, kInvSqrt2, 1.0, cfg.bisect_tol);
        res.lo = b.lo;
        res.hi = b.hi;
        res.tmax = 0.5 * (b.lo + b.hi);
    }
    if (cfg.confirm_thresholds) {
        SearchConfig scan_cfg = cfg;
        // The through-origin search already ran; only the scans are new evidence.
        scan_cfg.normals = 0;
        scan_cfg.refine_candidates = 0;
        OrderVerdict v = order_check(make_B_mub(res.lo, theta), greater, scan_cfg);
        res.confirmed = v.kind != OrderKind::RefutedByWitness;
        res.confirmation = v;
    }
    return res;
}

RegionClass classify_region(double t, double theta, const SearchConfig &cfg, const ThresholdResult *column) {
    check_region_args(t, theta);
    RegionClass rc{RegionLabel::White, t, theta, std::nullopt};
    if (convex_region_blue(t, theta)) {
        rc.label = RegionLabel::Blue;
        return rc;
    }
    if (auto w = sR_witness_search(make_B_mub(t, theta), make_A_mub(), cfg.normals, cfg.refine_candidates, cfg.witness_margin)) {
        rc.label = RegionLabel::Gray;
        rc.witness = w;
        return rc;
    }
    std::optional<ThresholdResult> own;
    if (column == nullptr) {
        own = tmax_for_theta(theta, cfg);
        column = &*own;
    }
    if (column->confirmed && t <= column->tmax) {
        rc.label = RegionLabel::OrderedNew;
    }
    return rc;
}

DimensionReport dimensions(const ObservablePair &p, const SearchConfig &cfg) {
    if (is_compatible(p, cfg.tol_F)) {
        throw Error(ErrorKind::DomainError, "dimensions are defined for incompatible pairs only");
    }
    DimensionReport rep;
    const Vec3 a1 = p.first.bloch(), a2 = p.second.bloch();
    OptimizerConfig early = cfg.scan_opt;
    early.stop_below = cfg.tol_F;

    // Returns solver calls spent; sets hit when the pair has the wanted verdict.
    auto probe = [&](const StateSet &s, bool want_incompatible, bool &hit) {
        bool compatible = s0_compatible(p, s, early, cfg.tol_F).compatible;
        if (!want_incompatible) {
            hit = compatible;
            return 1;
        }
        // Confirm incompatibility with the full multistart before trusting it.
        hit = !compatible && !s0_compatible(p, s, cfg.replay_opt, cfg.tol_F).compatible;
        return compatible ? 1 : 2;
    };

    std::vector<StateSet> planes;
    Vec3 span = a1.cross(a2);
    if (span.norm() > kParallelCutoff) {
        planes.push_back(StateSetPlane::make(0, span.normalized()));
    }
    for (const Vec3 &d : {a1 + a2, a1 - a2}) {
        if (d.norm() > kParallelCutoff) {
            planes.push_back(StateSetPlane::make(0, d.normalized()));
        }
    }
    auto normals = fibonacci_sphere(cfg.plane_normals);
    for (double r : cfg.plane_radii) {
        for (const auto &n : normals) {
            planes.push_back(StateSetPlane::make(r, n));
        }
    }
    std::vector<StateSet> lines;
    auto line_normals = fibonacci_sphere(cfg.line_normals);
    int dirs = std::max(cfg.line_dirs, 1);
    for (double r : cfg.line_radii) {
        for (const auto &n : line_normals) {
            auto [e1, e2] = orthonormal_complement(n);
            for (int k = 0; k < dirs; k++) {
                double a = std::numbers::pi * k / dirs;
                lines.push_back(StateSetLine::make(r, n, e1 * std::cos(a) + e2 * std::sin(a)));
            }
        }
    }

    auto first_match = [&](const std::vector<StateSet> &sets, bool want_incompatible, long &counter) -> std::optional<StateSet> {
        constexpr size_t kBlock = 256;
        for (size_t begin = 0; begin < sets.size(); begin += kBlock) {
            size_t n = std::min(kBlock, sets.size() - begin);
            std::vector<char> hit(n, 0);
            std::vector<int> calls(n, 0);
            parallel_for(n, cfg.jobs, [&](size_t j) {
                bool h = false;
                calls[j] = probe(sets[begin + j], want_incompatible, h);
                hit[j] = h;
            });
            for (size_t j = 0; j < n; j++) {
                rep.budget.solver_calls += calls[j];
            }
            for (size_t j = 0; j < n; j++) {
                counter++;
                if (hit[j]) {
                    return sets[begin + j];
                }
            }
        }
        return std::nullopt;
    };

    if (auto w = first_match(lines, true, rep.budget.line_sets)) {
        rep.chi_inc = 2;
        rep.inc_witness = w;
    } else if (auto w = first_match(planes, true, rep.budget.plane_sets)) {
        rep.chi_inc = 3;
        rep.inc_witness = w;
    }
    if (auto w = first_match(planes, false, rep.budget.plane_sets)) {
        rep.chi_com = 3;
        rep.com_witness = w;
    } else if (auto w = first_match(lines, false, rep.budget.line_sets)) {
        rep.chi_com = 2;
        rep.com_witness = w;
    } else {
        rep.chi_com = 1;
        rep.com_witness = StateSetLine::make(1, kUnitZ, kUnitX);
    }
    return rep;
}

EquivalenceResult equivalence_probe(const ObservablePair &a, const ObservablePair &b, const SearchConfig &cfg) {
    EquivalenceResult r;
    r.a_below_b = order_check(a, b, cfg);
    r.b_below_a = order_check(b, a, cfg);
    if (r.a_below_b.kind == OrderKind::RefutedByWitness || r.b_below_a.kind == OrderKind::RefutedByWitness) {
        r.kind = EquivalenceKind::DistinctWithWitness;
    }
    return r;
}

}  // namespace incompat
