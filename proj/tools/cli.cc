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

#include "cli.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "incompat/boundary.h"
#include "incompat/errors.h"
#include "incompat/jointness.h"
#include "incompat/ordering.h"
#include "incompat/parallel.h"
#include "incompat/restriction.h"
#include "incompat/sampling.h"
#include "incompat/statesets.h"

namespace incompat::cli {

namespace {

using nlohmann::json;

double parse_plain(std::string_view text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError, "bad number '" + std::string(text) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        size_t k = s.find(sep);
        parts.push_back(trim(s.substr(0, k)));
        if (k == std::string_view::npos) {
            return parts;
        }
        s.remove_prefix(k + 1);
    }
}

struct PairFlags {
    std::string a1 = "0,0,0";
    std::string a2 = "0,0,0";
    double bias1 = 1;
    double bias2 = 1;

    void attach(CLI::App *app) {
        app->add_option("--a1", a1, "Bloch vector of the first observable, x,y,z")->required();
        app->add_option("--a2", a2, "Bloch vector of the second observable, x,y,z")->required();
        app->add_option("--bias1", bias1, "bias of the first observable")->capture_default_str();
        app->add_option("--bias2", bias2, "bias of the second observable")->capture_default_str();
    }
    ObservablePair pair() const {
        return {QubitObservable::make(bias1, parse_vec3(a1)), QubitObservable::make(bias2, parse_vec3(a2))};
    }
    json echo() const {
        return {{"a1", a1}, {"a2", a2}, {"bias1", bias1}, {"bias2", bias2}};
    }
};

/// Shared effort flags for the order searches.
struct SearchFlags {
    int normals = 4000;
    int plane_normals;
    int line_normals;
    int line_dirs;
    int starts;
    uint64_t seed = 0;
    double tol = 5e-4;
    long max_sets = 0;
    bool no_confirm = false;
    int jobs = default_jobs();

    SearchFlags() {
        SearchConfig d;
        plane_normals = d.plane_normals;
        line_normals = d.line_normals;
        line_dirs = d.line_dirs;
        starts = d.scan_opt.starts;
    }
    void attach(CLI::App *app) {
        app->add_option("--normals", normals, "Fibonacci normals for through-origin planes")->capture_default_str();
        app->add_option("--plane-normals", plane_normals, "normals of the plane scan")->capture_default_str();
        app->add_option("--line-normals", line_normals, "normals of the line scan")->capture_default_str();
        app->add_option("--line-dirs", line_dirs, "line directions per normal")->capture_default_str();
        app->add_option("--starts", starts, "multistart count inside scans")->capture_default_str();
        app->add_option("--seed", seed, "optimizer seed")->capture_default_str();
        app->add_option("--max-state-sets", max_sets, "scan budget per order check, 0 = unlimited")
            ->capture_default_str();
        app->add_flag("--no-confirm", no_confirm, "skip the max-min confirmation scans");
        app->add_option("--jobs", jobs, "worker threads (default $INCOMPAT_JOBS or 1)")->capture_default_str();
    }
    SearchConfig config() const {
        SearchConfig c;
        c.normals = normals;
        c.plane_normals = plane_normals;
        c.line_normals = line_normals;
        c.line_dirs = line_dirs;
        c.scan_opt.starts = starts;
        c.scan_opt.seed = seed;
        c.replay_opt.seed = seed;
        c.bisect_tol = tol;
        c.max_state_sets = max_sets;
        c.confirm_thresholds = !no_confirm;
        c.jobs = std::max(jobs, 1);
        return c;
    }
    json echo() const {
        return {{"normals", normals},      {"plane_normals", plane_normals}, {"line_normals", line_normals},
                {"line_dirs", line_dirs},  {"starts", starts},               {"seed", seed},
                {"tol", tol},              {"max_state_sets", max_sets},     {"confirm", !no_confirm},
                {"jobs", jobs}};
    }
};

/// Writes data to --out (or `out`) and the manifest next to it (or to `err`).
struct Sink {
    std::string path;
    std::string manifest_path;

    void attach(CLI::App *app) {
        app->add_option("--out", path, "data file; stdout when omitted");
        app->add_option("--manifest", manifest_path, "manifest file; <out>.manifest.json by default");
    }
    void emit(const std::string &data, const json &manifest, std::ostream &out, std::ostream &err) const {
        if (path.empty()) {
            out << data;
        } else {
            std::ofstream f(path, std::ios::binary);
            f << data;
            if (!f) {
                throw Error(ErrorKind::ParseError, "cannot write " + path);
            }
        }
        std::string mpath = manifest_path;
        if (mpath.empty() && !path.empty()) {
            mpath = path + ".manifest.json";
        }
        if (mpath.empty()) {
            err << manifest.dump() << "\n";
            return;
        }
        std::ofstream f(mpath, std::ios::binary);
        f << manifest.dump(2) << "\n";
    }
};

json make_manifest(const std::string &command, json config, double seconds, uint64_t seed) {
    return {{"command", command},
            {"config", std::move(config)},
            {"wall_time_s", seconds},
            {"version", kVersion},
            {"seed", seed}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string witness_string(const std::optional<StateSetR> &w) {
    return w ? format_state_set(w->as_plane()) : std::string();
}

std::string json_string(const std::string &s) {
    return json(s).dump();
}

int cmd_check(const PairFlags &pf, double tol_F, std::ostream &out) {
    ObservablePair p = pf.pair();
    CompatVerdict v = check_compatibility(p, tol_F);
    const auto &d = v.diagnostics;
    out << "F=" << fmt(d.F) << " gamma=" << fmt(d.gamma) << " alpha=" << fmt(d.alpha) << " beta=" << fmt(d.beta)
        << "\n";
    if (d.degenerate_parallel) {
        out << "compatible, parallel Bloch vectors commute\n";
    } else {
        out << (v.compatible ? "compatible, F <= 0" : "incompatible, F > 0") << (v.boundary ? " (boundary)" : "")
            << "\n";
    }
    return v.compatible ? kExitOk : kExitIncompatible;
}

int cmd_s0check(const PairFlags &pf, const std::string &set_text, const OptimizerConfig &opt, double tol_F, std::ostream &out) {
    ObservablePair p = pf.pair();
    StateSet s = parse_state_set(set_text);
    S0Verdict v = s0_compatible(p, s, opt, tol_F);
    out << "set: " << format_state_set(s) << "\n";
    out << "min_F=" << fmt(v.min_F) << "\n";
    out << "argmin: lambda1=" << fmt(v.argmin.lambda1) << " lambda2=" << fmt(v.argmin.lambda2);
    if (std::holds_alternative<StateSetLine>(s)) {
        out << " xi1=" << fmt(v.argmin.xi1) << " xi2=" << fmt(v.argmin.xi2);
    }
    out << "\n";
    out << (v.compatible ? "compatible on the set, min_F <= 0" : "incompatible on the set, min_F > 0") << "\n";
    return v.compatible ? kExitOk : kExitIncompatible;
}

int cmd_table1(const std::vector<double> &thetas, const SearchFlags &sf, const Sink &sink, const json &echo,
               std::ostream &out, std::ostream &err) {
    auto t0 = std::chrono::steady_clock::now();
    SearchConfig cfg = sf.config();
    std::string csv = "theta,tmax,lo,hi\n";
    json rows = json::array();
    for (double theta : thetas) {
        ThresholdResult r = tmax_for_theta(theta, cfg);
        csv += fmt(theta) + "," + fmt(r.tmax) + "," + fmt(r.lo) + "," + fmt(r.hi) + "\n";
        json row = {{"theta", theta}, {"confirmed", r.confirmed}};
        if (r.confirmation) {
            row["max_min_F"] = r.confirmation->max_min_F;
            row["kind"] = std::string(order_kind_name(r.confirmation->kind));
            row["plane_sets"] = r.confirmation->budget.plane_sets;
            row["line_sets"] = r.confirmation->budget.line_sets;
            if (r.confirmation->witness) {
                row["witness"] = format_state_set(*r.confirmation->witness);
            }
        }
        rows.push_back(row);
    }
    json manifest = make_manifest("table1", echo, seconds_since(t0), sf.seed);
    manifest["confirmation"] = rows;
    sink.emit(csv, manifest, out, err);
    return kExitOk;
}

int cmd_fig4(int grid_t, int grid_theta, const std::vector<double> &confirm, const SearchFlags &sf, const Sink &sink,
             const json &echo, std::ostream &out, std::ostream &err) {
    if (grid_t < 1 || grid_theta < 2) {
        throw Error(ErrorKind::OutOfRange, "fig4 needs --grid-t >= 1 and --grid-theta >= 2");
    }
    auto t0 = std::chrono::steady_clock::now();
    SearchConfig cfg = sf.config();
    const double lo = 1 / std::numbers::sqrt2;
    std::vector<double> ts(grid_t), thetas(grid_theta);
    for (int i = 0; i < grid_t; i++) {
        ts[i] = lo + (1 - lo) * (i + 1) / grid_t;
    }
    for (int j = 0; j < grid_theta; j++) {
        thetas[j] = std::numbers::pi / 2 * j / (grid_theta - 1);
    }
    // Thresholds only for the requested columns; the rest stay unconfirmed.
    std::vector<ThresholdResult> columns(grid_theta);
    json confirmed = json::array();
    for (int j = 0; j < grid_theta; j++) {
        columns[j].theta = thetas[j];
        for (double c : confirm) {
            if (std::abs(c - thetas[j]) <= 1e-9) {
                columns[j] = tmax_for_theta(thetas[j], cfg);
                confirmed.push_back({{"theta", thetas[j]}, {"tmax", columns[j].tmax}, {"confirmed", columns[j].confirmed}});
            }
        }
    }
    std::vector<RegionClass> cells(static_cast<size_t>(grid_t) * grid_theta);
    SearchConfig cell_cfg = cfg;
    cell_cfg.jobs = 1;
    parallel_for(cells.size(), cfg.jobs, [&](size_t k) {
        size_t j = k / grid_t, i = k % grid_t;
        cells[k] = classify_region(ts[i], thetas[j], cell_cfg, &columns[j]);
    });
    std::string nd;
    for (const auto &c : cells) {
        nd += "{\"t\":" + fmt(c.t) + ",\"theta\":" + fmt(c.theta) + ",\"class\":\"" +
              std::string(region_label_name(c.label)) + "\"";
        if (c.witness) {
            nd += ",\"witness\":" + json_string(witness_string(c.witness));
        }
        nd += "}\n";
    }
    json manifest = make_manifest("fig4", echo, seconds_since(t0), sf.seed);
    manifest["thresholds"] = confirmed;
    sink.emit(nd, manifest, out, err);
    return kExitOk;
}

int cmd_boundary(const PairFlags &pf, int samples, const Sink &sink, const json &echo, std::ostream &out,
                 std::ostream &err) {
    auto t0 = std::chrono::steady_clock::now();
    ObservablePair p = pf.pair();
    if (!p.unbiased()) {
        throw Error(ErrorKind::ParseError, "boundary needs unbiased observables");
    }
    Vec3 a1 = p.first.bloch(), a2 = p.second.bloch();
    if (std::abs(a1.z) > 1e-12 || std::abs(a2.z) > 1e-12) {
        throw Error(ErrorKind::ParseError, "boundary needs Bloch vectors in the xy plane");
    }
    if (samples < 1) {
        throw Error(ErrorKind::OutOfRange, "--samples must be positive");
    }
    if (a1.norm() == 0 || a2.norm() == 0 || unbiased_compat(a1, a2)) {
        err << "pair is compatible; there is no boundary\n";
        return kExitIncompatible;
    }
    InPlanePair ip = InPlanePair::make(a1.norm(), a2.norm(), std::atan2(a1.y, a1.x), std::atan2(a2.y, a2.x));
    BoundaryCurve curve = region_CA(ip, samples);
    std::string csv = "phi,x0\n";
    for (const auto &s : curve.samples) {
        csv += fmt(s.phi) + "," + (s.x0 ? fmt(*s.x0) : std::string("none")) + "\n";
    }
    sink.emit(csv, make_manifest("boundary", echo, seconds_since(t0), 0), out, err);
    return kExitOk;
}

std::vector<Vec3> section_states(const StateSet &s) {
    std::vector<Vec3> states;
    if (const auto *plane = std::get_if<StateSetPlane>(&s)) {
        states.push_back(plane->point(0, 0));
        for (int k = 0; k < 8; k++) {
            states.push_back(plane->point(1, std::numbers::pi * k / 4));
        }
    } else {
        const auto &line = std::get<StateSetLine>(s);
        for (double u : {-1.0, 0.0, 1.0}) {
            states.push_back(line.point(u));
        }
    }
    return states;
}

int cmd_sampling(const PairFlags &pf, const std::string &set_text, const std::string &states_text,
                 const std::string &json_path, const OptimizerConfig &opt, std::ostream &out) {
    ObservablePair p = pf.pair();
    StateSet s = parse_state_set(set_text);
    std::vector<Vec3> states = states_text.empty() ? section_states(s) : parse_vec3_list(states_text);
    for (const auto &st : states) {
        bool inside = std::visit([&](const auto &set) { return set.contains(st, 1e-9); }, s);
        if (!inside) {
            throw Error(ErrorKind::OutOfRange, "state " + st.str() + " is not in the set");
        }
    }
    Behavior b = behavior_of(p, states);
    out << "set: " << format_state_set(s) << "\n";
    out << "x,y,z,P(+|1),P(+|2)\n";
    for (size_t j = 0; j < states.size(); j++) {
        out << states[j].str() << "," << fmt(b.probs[j][0][0]) << "," << fmt(b.probs[j][1][0]) << "\n";
    }
    const auto *plane = std::get_if<StateSetPlane>(&s);
    if (plane != nullptr && plane->r == 0 && p.unbiased()) {
        if (auto c = synthesize_cc(p, StateSetR{plane->n})) {
            out << "strategy: " << c->alice.size() << " effects\n";
            for (size_t z = 0; z < c->alice.size(); z++) {
                const auto &e = c->alice[z];
                const auto &h = c->kernel[z];
                out << "  z=" << z << " bias=" << fmt(e.scalar) << " bloch=" << e.vec.str() << " h1=" << fmt(h[0][0])
                    << "," << fmt(h[0][1]) << " h2=" << fmt(h[1][0]) << "," << fmt(h[1][1]) << "\n";
            }
            out << "max deviation=" << fmt(verify_strategy(*c, b, states)) << "\n";
            if (!json_path.empty()) {
                std::ofstream f(json_path, std::ios::binary);
                f << strategy_to_json(*c).dump(2) << "\n";
            }
            return kExitOk;
        }
    }
    if (auto cert = certify_non_cc(p, s, opt)) {
        out << "no classical-communication strategy: min_F=" << fmt(cert->min_F)
            << " lambda1=" << fmt(cert->argmin.lambda1) << " lambda2=" << fmt(cert->argmin.lambda2) << "\n";
        return kExitIncompatible;
    }
    out << "compatible on the set; explicit strategies are built only for unbiased pairs on planes through the origin\n";
    return kExitOk;
}

int exit_for(const Error &e) {
    switch (e.kind()) {
        case ErrorKind::BudgetExceeded:
            return kExitBudget;
        case ErrorKind::ParseError:
        case ErrorKind::OutOfRange:
        case ErrorKind::VectorTooLong:
        case ErrorKind::InvalidObservable:
        case ErrorKind::ShapeMismatch:
            return kExitUsage;
        default:
            return kExitInternal;
    }
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    double sign = 1;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        sign = s.front() == '-' ? -1 : 1;
        s.remove_prefix(1);
    }
    size_t pi = s.find("pi");
    if (pi == std::string_view::npos) {
        return sign * parse_plain(s);
    }
    std::string_view head = trim(s.substr(0, pi));
    std::string_view tail = trim(s.substr(pi + 2));
    double coef = 1;
    if (!head.empty()) {
        if (head.back() == '*') {
            head.remove_suffix(1);
        }
        coef = parse_plain(trim(head));
    }
    double den = 1;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw Error(ErrorKind::ParseError, "bad angle '" + std::string(text) + "'");
        }
        den = parse_plain(trim(tail.substr(1)));
        if (den == 0) {
            throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
        }
    }
    return sign * coef * std::numbers::pi / den;
}

std::vector<double> parse_angle_list(std::string_view text) {
    std::vector<double> out;
    for (auto part : split(text, ',')) {
        out.push_back(parse_angle(part));
    }
    return out;
}

Vec3 parse_vec3(std::string_view text) {
    auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw Error(ErrorKind::ParseError, "expected x,y,z but got '" + std::string(text) + "'");
    }
    return {parse_plain(parts[0]), parse_plain(parts[1]), parse_plain(parts[2])};
}

std::vector<Vec3> parse_vec3_list(std::string_view text) {
    std::vector<Vec3> out;
    for (auto part : split(text, ';')) {
        out.push_back(parse_vec3(part));
    }
    return out;
}

std::string fmt(double v) {
    return format_number(v);
}

int default_jobs() {
    const char *env = std::getenv("INCOMPAT_JOBS");
    if (env == nullptr) {
        return 1;
    }
    int v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
    return ec == std::errc() && *ptr == '\0' && v > 0 ? v : 1;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Restricted-state incompatibility of qubit observable pairs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    double tol_F = kDefaultTolF;
    OptimizerConfig opt;
    std::string set_text, states_text, json_path, thetas_text = "pi/12,pi/6,pi/4,pi/3";
    std::string confirm_text = "pi/12,pi/6,pi/4,pi/3";
    int grid_t = 101, grid_theta = 91, samples = 720;
    PairFlags pf;
    SearchFlags sf;
    Sink sink;

    auto *check = app.add_subcommand("check", "compatibility of two binary qubit observables");
    pf.attach(check);
    check->add_option("--tol-F", tol_F, "threshold on F")->capture_default_str();

    auto add_opt_flags = [&](CLI::App *sub) {
        sub->add_option("--starts", opt.starts, "multistart count")->capture_default_str();
        sub->add_option("--seed", opt.seed, "optimizer seed")->capture_default_str();
    };
    auto *s0check = app.add_subcommand("s0check", "compatibility restricted to a plane or line of states");
    pf.attach(s0check);
    s0check->add_option("--set", set_text, "\"plane r=R n=x,y,z\" or \"line r=R n=x,y,z m=x,y,z\"")->required();
    s0check->add_option("--tol-F", tol_F, "threshold on F")->capture_default_str();
    add_opt_flags(s0check);

    auto *table1 = app.add_subcommand("table1", "largest t below which no witness separates the pairs, as CSV");
    table1->add_option("--thetas", thetas_text, "comma-separated angles")->capture_default_str();
    table1->add_option("--tol", sf.tol, "bisection tolerance")->capture_default_str();
    sf.attach(table1);
    sink.attach(table1);

    auto *fig4 = app.add_subcommand("fig4", "region classification over a (t, theta) grid, as NDJSON");
    fig4->add_option("--grid-t", grid_t, "t samples")->capture_default_str();
    fig4->add_option("--grid-theta", grid_theta, "theta samples over [0, pi/2]")->capture_default_str();
    fig4->add_option("--confirm-thetas", confirm_text, "columns that get confirmed thresholds; 'none' for none")
        ->capture_default_str();
    fig4->add_option("--tol", sf.tol, "bisection tolerance")->capture_default_str();
    sf.attach(fig4);
    sink.attach(fig4);

    auto *boundary = app.add_subcommand("boundary", "boundary curve X0(phi) of an in-plane unbiased pair, as CSV");
    pf.attach(boundary);
    boundary->add_option("--samples", samples, "phi samples over [0, pi)")->capture_default_str();
    sink.attach(boundary);

    auto *sampling = app.add_subcommand("sampling", "distributed-sampling demo on a state set");
    pf.attach(sampling);
    sampling->add_option("--set", set_text, "state set")->required();
    sampling->add_option("--states", states_text, "states x,y,z;x,y,z;... (default: points of the set)");
    sampling->add_option("--json", json_path, "write the strategy as JSON");
    add_opt_flags(sampling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) {
            return cmd_check(pf, tol_F, out);
        }
        if (s0check->parsed()) {
            return cmd_s0check(pf, set_text, opt, tol_F, out);
        }
        if (table1->parsed()) {
            json echo = sf.echo();
            echo["thetas"] = thetas_text;
            return cmd_table1(parse_angle_list(thetas_text), sf, sink, echo, out, err);
        }
        if (fig4->parsed()) {
            json echo = sf.echo();
            echo["grid_t"] = grid_t;
            echo["grid_theta"] = grid_theta;
            echo["confirm_thetas"] = confirm_text;
            std::vector<double> confirm;
            if (trim(confirm_text) != "none") {
                confirm = parse_angle_list(confirm_text);
            }
            return cmd_fig4(grid_t, grid_theta, confirm, sf, sink, echo, out, err);
        }
        if (boundary->parsed()) {
            json echo = pf.echo();
            echo["samples"] = samples;
            return cmd_boundary(pf, samples, sink, echo, out, err);
        }
        if (sampling->parsed()) {
            return cmd_sampling(pf, set_text, states_text, json_path, opt, out);
        }
    } catch (const BudgetExceeded &e) {
        err << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e);
    }
    return kExitUsage;
}

}  // namespace incompat::cli
