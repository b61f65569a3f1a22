// Copyright 2026 The ffprotect Authors
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

// Command-line front end. Subcommands emit plot-ready CSV or JSON tables.

#ifndef FFP_TOOLS_CLI_H
#define FFP_TOOLS_CLI_H

#include <ostream>
#include <string_view>

#include "ffp/protocol.h"
#include "ffp/qcore.h"

namespace ffp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStatistical = 2;

/// Parses a real number with an optional `pi` suffix: "0.25pi", "pi", "1.5".
/// Throws std::invalid_argument on malformed input.
double parse_angle(std::string_view text);

/// "theta=<angle>[,phi=<angle>]" as a Bloch-sphere state.
PureState parse_state(std::string_view text);

/// "theta=<angle>[,phi=<angle>]" as a nonorthogonal pair.
NonorthogonalPair parse_pair(std::string_view text);

/// Runs one invocation. Tables go to `out` unless --output is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffp::cli

#endif  // FFP_TOOLS_CLI_H
