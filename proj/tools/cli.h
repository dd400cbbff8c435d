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

#ifndef INCOMPAT_TOOLS_CLI_H
#define INCOMPAT_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "incompat/bloch.h"

namespace incompat::cli {

inline constexpr const char *kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitIncompatible = 1,
    kExitUsage = 2,
    kExitBudget = 3,
    kExitInternal = 4,
};

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Accepts plain numbers and forms like "pi", "-pi/4", "2*pi/3", "0.5pi".
double parse_angle(std::string_view text);
/// Comma-separated angles.
std::vector<double> parse_angle_list(std::string_view text);
Vec3 parse_vec3(std::string_view text);
/// "x,y,z;x,y,z;..."
std::vector<Vec3> parse_vec3_list(std::string_view text);
/// %.6g, independent of the global locale.
std::string fmt(double v);
/// INCOMPAT_JOBS if set to a positive integer, else 1.
int default_jobs();

}  // namespace incompat::cli

#endif
