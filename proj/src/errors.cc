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

#include "incompat/errors.h"

namespace incompat {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::VectorTooLong:
            return "VectorTooLong";
        case ErrorKind::InvalidObservable:
            return "InvalidObservable";
        case ErrorKind::OutOfRange:
            return "OutOfRange";
        case ErrorKind::Incompatible:
            return "Incompatible";
        case ErrorKind::Infeasible:
            return "Infeasible";
        case ErrorKind::SolverFailure:
            return "SolverFailure";
        case ErrorKind::NonFinite:
            return "NonFinite";
        case ErrorKind::NotBracketed:
            return "NotBracketed";
        case ErrorKind::DomainError:
            return "DomainError";
        case ErrorKind::NoRoot:
            return "NoRoot";
        case ErrorKind::ShapeMismatch:
            return "ShapeMismatch";
        case ErrorKind::BudgetExceeded:
            return "BudgetExceeded";
        case ErrorKind::ParseError:
            return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
}

}  // namespace incompat
