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

#include "incompat/statesets.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "incompat/errors.h"

namespace incompat {

namespace {

bool is_unit(const Vec3 &v) {
    return std::abs(v.norm() - 1) <= kUnitSlack;
}

void check_r(double r) {
    if (!(r >= 0 && r <= 1)) {
        throw Error(ErrorKind::OutOfRange, "state-set distance r must lie in [0, 1], got " + std::to_string(r));
    }
}

}  // namespace

StateSetPlane StateSetPlane::make(double r, const Vec3 &n) {
    check_r(r);
    if (!is_unit(n)) {
        throw Error(ErrorKind::OutOfRange, "plane normal must be a unit vector");
    }
    return {r, n};
}

bool StateSetPlane::contains(const Vec3 &s, double tol) const {
    return s.norm() <= 1 + tol && std::abs(s.dot(n) - r) <= tol;
}

Vec3 StateSetPlane::point(double rho, double angle) const {
    auto [e1, e2] = orthonormal_complement(n);
    double radius = std::sqrt(std::max(0.0, 1 - r * r));
    return n * r + (e1 * std::cos(angle) + e2 * std::sin(angle)) * (rho * radius);
}

StateSetLine StateSetLine::make(double r, const Vec3 &n, const Vec3 &m) {
    check_r(r);
    if (!is_unit(n) || !is_unit(m) || std::abs(n.dot(m)) > kUnitSlack) {
        throw Error(ErrorKind::OutOfRange, "line set needs orthonormal n and m");
    }
    return {r, n, m};
}

bool StateSetLine::contains(const Vec3 &s, double tol) const {
    return s.norm() <= 1 + tol && std::abs(s.dot(n) - r) <= tol && std::abs(s.dot(m)) <= tol;
}

Vec3 StateSetLine::point(double u) const {
    double half = std::sqrt(std::max(0.0, 1 - r * r));
    return n * r + direction() * (u * half);
}

StateSetR StateSetR::make(const Vec3 &n) {
    if (!is_unit(n)) {
        throw Error(ErrorKind::OutOfRange, "normal must be a unit vector");
    }
    return {n};
}

Vec3 AngleParam::to_normal() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

AngleParam AngleParam::antipode() const {
    double p = phi + std::numbers::pi;
    if (p >= std::numbers::pi) {
        p -= 2 * std::numbers::pi;
    }
    return {p, std::numbers::pi - theta};
}

StateSetPlane plane_from_angles(const AngleParam &p, double r) {
    check_r(r);
    return {r, p.to_normal()};
}

Vec3 project_onto_R(const StateSetR &s, const Vec3 &v) {
    return v - s.n * v.dot(s.n);
}

int affine_count(const StateSetPlane &s) {
    return s.degenerate() ? 1 : 3;
}

int affine_count(const StateSetLine &s) {
    return s.degenerate() ? 1 : 2;
}

int affine_count(const StateSet &s) {
    return std::visit([](const auto &v) { return affine_count(v); }, s);
}

std::pair<Vec3, Vec3> orthonormal_complement(const Vec3 &n) {
    // Cross with the axis least aligned with n.
    Vec3 axis = kUnitX;
    double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    if (ay <= ax && ay <= az) {
        axis = kUnitY;
    } else if (az <= ax && az <= ay) {
        axis = kUnitZ;
    }
    Vec3 e1 = n.cross(axis).normalized();
    Vec3 e2 = n.cross(e1);
    return {e1, e2};
}

std::string format_state_set(const StateSet &s) {
    if (const auto *p = std::get_if<StateSetPlane>(&s)) {
        return "plane r=" + format_number(p->r) + " n=" + p->n.str();
    }
    const auto &l = std::get<StateSetLine>(s);
    return "line r=" + format_number(l.r) + " n=" + l.n.str() + " m=" + l.m.str();
}

namespace {

double parse_number(std::string_view text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError, "bad number '" + std::string(text) + "'");
    }
    return v;
}

Vec3 parse_vec(std::string_view text) {
    double c[3];
    for (int k = 0; k < 3; k++) {
        size_t comma = text.find(',');
        if ((k < 2) != (comma != std::string_view::npos)) {
            throw Error(ErrorKind::ParseError, "expected three comma-separated components");
        }
        c[k] = parse_number(text.substr(0, comma));
        text = k < 2 ? text.substr(comma + 1) : std::string_view{};
    }
    return {c[0], c[1], c[2]};
}

Vec3 unit_or_throw(const Vec3 &v) {
    if (v.norm() < 1e-12) {
        throw Error(ErrorKind::OutOfRange, "direction vectors must be nonzero");
    }
    return v.normalized();
}

}  // namespace

StateSet parse_state_set(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string kind;
    in >> kind;
    if (kind != "plane" && kind != "line") {
        throw Error(ErrorKind::ParseError, "state set must start with 'plane' or 'line'");
    }
    bool have_r = false, have_n = false, have_m = false;
    double r = 0;
    Vec3 n, m;
    std::string tok;
    while (in >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::ParseError, "expected key=value, got '" + tok + "'");
        }
        std::string_view key(tok.data(), eq);
        std::string_view val(tok.data() + eq + 1, tok.size() - eq - 1);
        if (key == "r") {
            r = parse_number(val);
            have_r = true;
        } else if (key == "n") {
            n = parse_vec(val);
            have_n = true;
        } else if (key == "m" && kind == "line") {
            m = parse_vec(val);
            have_m = true;
        } else {
            throw Error(ErrorKind::ParseError, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_r || !have_n || (kind == "line" && !have_m)) {
        throw Error(ErrorKind::ParseError, "missing r=, n= or m= in state set");
    }
    n = unit_or_throw(n);
    if (kind == "plane") {
        return StateSetPlane::make(r, n);
    }
    m = unit_or_throw(m);
    if (std::abs(n.dot(m)) > 1e-9) {
        throw Error(ErrorKind::OutOfRange, "line set needs n orthogonal to m");
    }
    m = (m - n * n.dot(m)).normalized();
    return StateSetLine::make(r, n, m);
}

std::vector<Vec3> fibonacci_sphere(int count) {
    std::vector<Vec3> out;
    if (count <= 0) {
        return out;
    }
    out.reserve(count);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; i++) {
        double z = 1.0 - 2.0 * (i + 0.5) / count;
        double radius = std::sqrt(std::max(0.0, 1 - z * z));
        double a = golden * i;
        out.push_back({radius * std::cos(a), radius * std::sin(a), z});
    }
    return out;
}

StateSet affine_hull_section(const std::vector<Vec3> &states) {
    if (states.empty()) {
        throw Error(ErrorKind::OutOfRange, "empty state list");
    }
    const Vec3 &base = states[0];
    // Gram-Schmidt on the difference vectors.
    std::vector<Vec3> basis;
    for (size_t k = 1; k < states.size(); k++) {
        Vec3 d = states[k] - base;
        for (const auto &b : basis) {
            d = d - b * d.dot(b);
        }
        if (d.norm() > 1e-9) {
            basis.push_back(d.normalized());
        }
    }
    if (basis.empty()) {
        throw Error(ErrorKind::OutOfRange, "a single state has no line or plane section");
    }
    if (basis.size() >= 3) {
        throw Error(ErrorKind::OutOfRange, "states span the whole Bloch ball");
    }
    if (basis.size() == 2) {
        Vec3 n = basis[0].cross(basis[1]).normalized();
        double r = base.dot(n);
        if (r < 0) {
            n = -n;
            r = -r;
        }
        return StateSetPlane::make(std::min(r, 1.0), n);
    }
    Vec3 d = basis[0];
    Vec3 closest = base - d * base.dot(d);
    double r = closest.norm();
    Vec3 n = r > 1e-12 ? closest / r : orthonormal_complement(d).first;
    Vec3 m = d.cross(n);
    return StateSetLine::make(std::min(r, 1.0), n, m);
}

}  // namespace incompat
