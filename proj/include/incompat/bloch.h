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

#ifndef INCOMPAT_BLOCH_H
#define INCOMPAT_BLOCH_H

#include <cmath>
#include <iosfwd>
#include <string>

namespace incompat {

/// Slack used by every POVM-positivity check in the library.
inline constexpr double kPovmSlack = 1e-12;

/// Six significant digits like %.6g, but independent of the C locale.
std::string format_number(double v);

struct Vec3 {
    double x = 0;
    double y = 0;
    double z = 0;

    constexpr Vec3 operator+(const Vec3 &o) const {
        return {x + o.x, y + o.y, z + o.z};
    }
    constexpr Vec3 operator-(const Vec3 &o) const {
        return {x - o.x, y - o.y, z - o.z};
    }
    constexpr Vec3 operator-() const {
        return {-x, -y, -z};
    }
    constexpr Vec3 operator*(double s) const {
        return {x * s, y * s, z * s};
    }
    constexpr Vec3 operator/(double s) const {
        return {x / s, y / s, z / s};
    }
    constexpr bool operator==(const Vec3 &o) const = default;

    constexpr double dot(const Vec3 &o) const {
        return x * o.x + y * o.y + z * o.z;
    }
    constexpr Vec3 cross(const Vec3 &o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    constexpr double norm2() const {
        return dot(*this);
    }
    double norm() const {
        return std::sqrt(norm2());
    }
    /// Zero vector maps to itself.
    Vec3 normalized() const;

    std::string str() const;
};

constexpr Vec3 operator*(double s, const Vec3 &v) {
    return v * s;
}

std::ostream &operator<<(std::ostream &out, const Vec3 &v);

inline constexpr Vec3 kUnitX{1, 0, 0};
inline constexpr Vec3 kUnitY{0, 1, 0};
inline constexpr Vec3 kUnitZ{0, 0, 1};

/// A 2x2 Hermitian operator written as (scalar*I + vec.sigma) / 2.
struct HalfPauli {
    double scalar = 0;
    Vec3 vec;

    double min_eigenvalue() const {
        return 0.5 * (scalar - vec.norm());
    }
    double max_eigenvalue() const {
        return 0.5 * (scalar + vec.norm());
    }
    /// Tr[rho * this] for rho = (I + s.sigma) / 2.
    double expectation(const Vec3 &state) const {
        return 0.5 * (scalar + vec.dot(state));
    }
    HalfPauli operator+(const HalfPauli &o) const {
        return {scalar + o.scalar, vec + o.vec};
    }
    HalfPauli operator-(const HalfPauli &o) const {
        return {scalar - o.scalar, vec - o.vec};
    }
    HalfPauli operator*(double s) const {
        return {scalar * s, vec * s};
    }
};

/// Binary qubit POVM with A(+) = (bias*I + bloch.sigma)/2 and A(-) = I - A(+).
///
/// Immutable; construction enforces |bloch| <= bias <= 2 - |bloch|. Bloch
/// vectors that overshoot by at most kPovmSlack are scaled back onto the
/// boundary so roundoff never makes a boundary observable unconstructible.
class QubitObservable {
   public:
    /// The trivial observable A(+) = A(-) = I/2.
    QubitObservable() = default;

    /// Throws Error(InvalidObservable) when the POVM inequalities fail.
    static QubitObservable make(double bias, const Vec3 &bloch);

    double bias() const {
        return bias_;
    }
    const Vec3 &bloch() const {
        return bloch_;
    }
    bool unbiased() const {
        return std::abs(bias_ - 1.0) <= kPovmSlack;
    }

    HalfPauli effect_plus() const {
        return {bias_, bloch_};
    }
    HalfPauli effect_minus() const {
        return {2.0 - bias_, -bloch_};
    }
    /// Probability of outcome +1 (sign > 0) or -1 (sign < 0) on the state with Bloch vector s.
    double probability(int sign, const Vec3 &state) const;

    bool operator==(const QubitObservable &o) const = default;

   private:
    QubitObservable(double bias, const Vec3 &bloch) : bias_(bias), bloch_(bloch) {
    }

    double bias_ = 1.0;
    Vec3 bloch_;
};

struct ObservablePair {
    QubitObservable first;
    QubitObservable second;

    bool unbiased() const {
        return first.unbiased() && second.unbiased();
    }
};

/// Unbiased observable A(+-) = (I +- a.sigma)/2. Throws VectorTooLong when |a| > 1 + kPovmSlack.
QubitObservable make_unbiased(const Vec3 &a);

/// The mutually unbiased pair with Bloch vectors t*x and t*y. Throws OutOfRange unless 0 <= t <= 1.
ObservablePair make_mub_pair(double t);

/// Conjugation by U = (sigma_x + sigma_y)/sqrt(2) up to phase, which swaps
/// sigma_x and sigma_y and flips sigma_z: (x, y, z) -> (y, x, -z).
Vec3 swap_xy(const Vec3 &v);
QubitObservable conjugate_swap_xy(const QubitObservable &o);
ObservablePair conjugate_swap_xy(const ObservablePair &p);

}  // namespace incompat

#endif
