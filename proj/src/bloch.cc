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

#include "incompat/bloch.h"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "incompat/errors.h"

namespace incompat {

Vec3 Vec3::normalized() const {
    double n = norm();
    if (n == 0) {
        return *this;
    }
    return *this / n;
}

std::string format_number(double v) {
    if (v == 0) {
        return "0";  // also folds -0
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string Vec3::str() const {
    return format_number(x) + "," + format_number(y) + "," + format_number(z);
}

std::ostream &operator<<(std::ostream &out, const Vec3 &v) {
    return out << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

QubitObservable QubitObservable::make(double bias, const Vec3 &bloch) {
    if (!std::isfinite(bias) || !std::isfinite(bloch.norm2())) {
        throw Error(ErrorKind::InvalidObservable, "non-finite observable parameters");
    }
    double len = bloch.norm();
    double cap = std::min(bias, 2.0 - bias);
    if (len <= cap) {
        return QubitObservable(bias, bloch);
    }
    if (cap >= 0 && len - cap <= kPovmSlack) {
        return QubitObservable(bias, cap == 0 ? Vec3{} : bloch * (cap / len));
    }
    throw Error(
        ErrorKind::InvalidObservable,
        "POVM positivity requires |a| <= a0 <= 2 - |a|; got a0=" + std::to_string(bias) +
            " |a|=" + std::to_string(len));
}

double QubitObservable::probability(int sign, const Vec3 &state) const {
    double plus = 0.5 * (bias_ + bloch_.dot(state));
    return sign > 0 ? plus : 1.0 - plus;
}

QubitObservable make_unbiased(const Vec3 &a) {
    double len = a.norm();
    if (!(len <= 1.0 + kPovmSlack)) {
        throw Error(ErrorKind::VectorTooLong, "unbiased observable needs |a| <= 1, got " + std::to_string(len));
    }
    return QubitObservable::make(1.0, a);
}

ObservablePair make_mub_pair(double t) {
    if (!(t >= 0 && t <= 1)) {
        throw Error(ErrorKind::OutOfRange, "mutually unbiased pair needs t in [0, 1]");
    }
    return {make_unbiased(kUnitX * t), make_unbiased(kUnitY * t)};
}

Vec3 swap_xy(const Vec3 &v) {
    return {v.y, v.x, -v.z};
}

QubitObservable conjugate_swap_xy(const QubitObservable &o) {
    return QubitObservable::make(o.bias(), swap_xy(o.bloch()));
}

ObservablePair conjugate_swap_xy(const ObservablePair &p) {
    return {conjugate_swap_xy(p.first), conjugate_swap_xy(p.second)};
}

}  // namespace incompat
