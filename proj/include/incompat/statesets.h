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

#ifndef INCOMPAT_STATESETS_H
#define INCOMPAT_STATESETS_H

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "incompat/bloch.h"

namespace incompat {

inline constexpr double kUnitSlack = 1e-12;

/// Section {s : |s| <= 1, s.n = r} of the Bloch ball by a plane.
struct StateSetPlane {
    double r = 0;
    Vec3 n = kUnitZ;

    /// Throws OutOfRange unless 0 <= r <= 1 and |n| = 1.
    static StateSetPlane make(double r, const Vec3 &n);

    bool degenerate() const {
        return r >= 1 - kUnitSlack;
    }
    bool contains(const Vec3 &s, double tol = 1e-9) const;
    /// Point on the section at polar coordinates (rho in [0,1] of the disk radius, angle).
    Vec3 point(double rho, double angle) const;
};

/// Section {s : |s| <= 1, s.n = r, s.m = 0} by a line; n lies in the plane
/// through the origin containing the line, m is normal to that plane.
struct StateSetLine {
    double r = 0;
    Vec3 n = kUnitX;
    Vec3 m = kUnitZ;

    /// Throws OutOfRange unless |n| = |m| = 1, n.m = 0 and 0 <= r <= 1.
    static StateSetLine make(double r, const Vec3 &n, const Vec3 &m);

    bool degenerate() const {
        return r >= 1 - kUnitSlack;
    }
    Vec3 direction() const {
        return n.cross(m);
    }
    bool contains(const Vec3 &s, double tol = 1e-9) const;
    /// Point at fraction u in [-1,1] of the chord half-length.
    Vec3 point(double u) const;
};

/// Plane section through the maximally mixed state.
struct StateSetR {
    Vec3 n = kUnitZ;

    static StateSetR make(const Vec3 &n);
    StateSetPlane as_plane() const {
        return {0, n};
    }
};

using StateSet = std::variant<StateSetPlane, StateSetLine>;

struct AngleParam {
    double phi = 0;
    double theta = 0;

    /// (sin t cos p, sin t sin p, cos t)
    Vec3 to_normal() const;
    AngleParam antipode() const;
};

StateSetPlane plane_from_angles(const AngleParam &p, double r);

Vec3 project_onto_R(const StateSetR &s, const Vec3 &v);

/// Number of affinely independent states spanning the section: 3 for planes,
/// 2 for lines, 1 for the tangent (r = 1) degenerate cases.
int affine_count(const StateSetPlane &s);
int affine_count(const StateSetLine &s);
int affine_count(const StateSet &s);

/// Orthonormal pair spanning the plane orthogonal to n.
std::pair<Vec3, Vec3> orthonormal_complement(const Vec3 &n);

/// "plane r=<f> n=<f>,<f>,<f>" or "line r=<f> n=<f>,<f>,<f> m=<f>,<f>,<f>".
std::string format_state_set(const StateSet &s);
/// Throws Error(ParseError) on malformed text and OutOfRange on invalid geometry.
StateSet parse_state_set(std::string_view text);

/// Deterministic quasi-uniform unit vectors (golden-angle spiral).
std::vector<Vec3> fibonacci_sphere(int count);

/// Affine-hull section of a finite list of Bloch vectors. Throws
/// OutOfRange when the hull is the whole ball or a single point.
StateSet affine_hull_section(const std::vector<Vec3> &states);

}  // namespace incompat

#endif
