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

#include "incompat/restriction.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "incompat/errors.h"
#include "incompat/nelder_mead.h"

namespace incompat {

namespace {

/// Which part of F = min{1 - |alpha|, 1 - |beta|, norm_term} is minimized.
enum class Term { Alpha, Beta, Norms };

/// Parameter layout: (lambda1, lambda2[, xi1, xi2]).
struct TildeProblem {
    double b1, b2;
    Vec3 a1, a2;
    double r;
    Vec3 n, m;
    bool with_xi;
    Term term = Term::Norms;

    void shifted(const detail::Point &p, double &t1, Vec3 &v1, double &t2, Vec3 &v2) const {
        t1 = b1 - p[0] * r;
        t2 = b2 - p[1] * r;
        v1 = a1 + n * p[0];
        v2 = a2 + n * p[1];
        if (with_xi) {
            v1 = v1 + m * p[2];
            v2 = v2 + m * p[3];
        }
    }
    double objective(const detail::Point &p) const {
        double t1, t2;
        Vec3 v1, v2;
        shifted(p, t1, v1, t2, v2);
        BuschDiagnostics d = busch_F_raw(t1, v1, t2, v2);
        if (d.degenerate_parallel) {
            return d.F;
        }
        // alpha and beta diverge next to parallel configurations; anything
        // below -1 is equally compatible.
        switch (term) {
            case Term::Alpha:
                return std::max(1 - std::abs(d.alpha), -1.0);
            case Term::Beta:
                return std::max(1 - std::abs(d.beta), -1.0);
            case Term::Norms:
                break;
        }
        return d.norm_term;
    }
    double full_F(const detail::Point &p) const {
        double t1, t2;
        Vec3 v1, v2;
        shifted(p, t1, v1, t2, v2);
        return std::max(busch_F_value(t1, v1, t2, v2), -1.0);
    }
    template <typename Reduce>
    void constraints(const detail::Point &p, Reduce &&reduce) const {
        double t1, t2;
        Vec3 v1, v2;
        shifted(p, t1, v1, t2, v2);
        double n1 = v1.norm(), n2 = v2.norm();
        reduce(n1 - t1 - kPovmSlack);
        reduce(t1 + n1 - 2 - kPovmSlack);
        reduce(n2 - t2 - kPovmSlack);
        reduce(t2 + n2 - 2 - kPovmSlack);
    }
    double penalty(const detail::Point &p) const {
        double s = 0;
        constraints(p, [&](double g) {
            if (g > 0) {
                s += g * g;
            }
        });
        return s;
    }
    double violation(const detail::Point &p) const {
        double worst = 0;
        constraints(p, [&](double g) { worst = std::max(worst, g); });
        return worst;
    }
    double block_violation(int i, double lambda, double xi) const {
        double t = (i == 0 ? b1 : b2) - lambda * r;
        Vec3 v = (i == 0 ? a1 : a2) + n * lambda;
        if (with_xi) {
            v = v + m * xi;
        }
        double len = v.norm();
        return std::max(len - t, t + len - 2) - kPovmSlack;
    }
    // The two observables are constrained independently, so each (lambda_i,
    // xi_i) block is scaled back towards 0 on its own.
    void repair(detail::Point &p) const {
        for (int i = 0; i < 2; i++) {
            double lambda = p[i], xi = with_xi ? p[2 + i] : 0;
            if (block_violation(i, lambda, xi) <= 0) {
                continue;
            }
            double a = 0, b = 1;
            for (int it = 0; it < 50; it++) {
                double mid = 0.5 * (a + b);
                if (block_violation(i, mid * lambda, mid * xi) > 0) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            p[i] = a * lambda;
            if (with_xi) {
                p[2 + i] = a * xi;
            }
        }
    }
};

QubitObservable make_tilde(double bias, const Vec3 &bloch) {
    try {
        return QubitObservable::make(bias, bloch);
    } catch (const Error &) {
        throw Error(ErrorKind::Infeasible, "shift leaves the set of valid observables");
    }
}

S0Verdict solve(const ObservablePair &p, double r, const Vec3 &n, const Vec3 &m, bool with_xi, const OptimizerConfig &opt, double tol_F) {
    TildeProblem problem{p.first.bias(), p.second.bias(), p.first.bloch(), p.second.bloch(), r, n, m, with_xi};
    // |v~| <= 1 for any valid shift, so each shift is bounded by 1 + |a_i|.
    double w1 = 1 + problem.a1.norm(), w2 = 1 + problem.a2.norm();
    Box box;
    if (with_xi) {
        box = {{-w1, -w2, -w1, -w2}, {w1, w2, w1, w2}};
    } else {
        box = {{-w1, -w2}, {w1, w2}};
    }
    // F is flat wherever a bounded alpha or beta term wins the min, which
    // stalls a direct descent. The min of F is the min over the three terms
    // of their separate minima, so each term is minimized on its own.
    std::vector<Term> terms{Term::Norms};
    bool stays_unbiased = problem.b1 == 1 && problem.b2 == 1 && r == 0;
    if (!stays_unbiased) {
        terms.push_back(Term::Alpha);
        terms.push_back(Term::Beta);
    }
    MinResult res;
    double best_F = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    for (Term term : terms) {
        problem.term = term;
        MinResult part = detail::minimize_problem(problem, box, opt);
        evaluations += part.evaluations;
        detail::Point at{};
        std::copy(part.point.begin(), part.point.end(), at.begin());
        double F = problem.full_F(at);
        if (F < best_F) {
            best_F = F;
            res = part;
            res.value = F;
        }
        if (best_F <= opt.stop_below) {
            break;
        }
    }
    res.evaluations = evaluations;
    S0Verdict v;
    v.min_F = res.value;
    v.compatible = res.value <= tol_F;
    v.argmin.lambda1 = res.point[0];
    v.argmin.lambda2 = res.point[1];
    if (with_xi) {
        v.argmin.xi1 = res.point[2];
        v.argmin.xi2 = res.point[3];
    }
    v.certificate_quality = res.feasibility_violation;
    v.evaluations = res.evaluations;
    return v;
}

S0Verdict single_state_verdict() {
    S0Verdict v;
    v.compatible = true;
    v.min_F = -1;
    return v;
}

}  // namespace

QubitObservable tilde_observable(const QubitObservable &o, const StateSetPlane &s, double lambda) {
    return make_tilde(o.bias() - lambda * s.r, o.bloch() + s.n * lambda);
}

QubitObservable tilde_observable(const QubitObservable &o, const StateSetLine &s, double lambda, double xi) {
    return make_tilde(o.bias() - lambda * s.r, o.bloch() + s.n * lambda + s.m * xi);
}

S0Verdict s0_compatible_plane(const ObservablePair &p, const StateSetPlane &s, const OptimizerConfig &opt, double tol_F) {
    if (s.degenerate()) {
        return single_state_verdict();
    }
    return solve(p, s.r, s.n, s.n, false, opt, tol_F);
}

S0Verdict s0_compatible_line(
    const ObservablePair &p, const StateSetLine &s, const OptimizerConfig &opt, double tol_F, bool search_xi) {
    if (s.degenerate()) {
        return single_state_verdict();
    }
    return solve(p, s.r, s.n, s.m, search_xi, opt, tol_F);
}

S0Verdict s0_compatible(const ObservablePair &p, const StateSet &s, const OptimizerConfig &opt, double tol_F) {
    if (const auto *plane = std::get_if<StateSetPlane>(&s)) {
        return s0_compatible_plane(p, *plane, opt, tol_F);
    }
    return s0_compatible_line(p, std::get<StateSetLine>(s), opt, tol_F);
}

double s0R_slack(const Vec3 &a1, const Vec3 &a2, const StateSetR &s) {
    if (!(a1.norm() <= 1 + kPovmSlack) || !(a2.norm() <= 1 + kPovmSlack)) {
        throw Error(ErrorKind::OutOfRange, "unbiased Bloch vectors must have norm <= 1");
    }
    return project_onto_R(s, a1 + a2).norm() + project_onto_R(s, a1 - a2).norm() - 2;
}

bool s0R_compatible_unbiased(const Vec3 &a1, const Vec3 &a2, const StateSetR &s) {
    return s0R_slack(a1, a2, s) <= kPovmSlack;
}

}  // namespace incompat
