// SPDX-License-Identifier: Apache-2.0
//
// beamsec: attack injection and detection for beamformed massive-MIMO links
// Copyright (C) 2026 The beamsec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSEC_CLI_HPP
#define BEAMSEC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace beamsec
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_runtime = 2;

std::string tool_version();

/// Entry point of the command-line tool; `args` excludes the program name.
/// Subcommands: sweep-snr, detect-eval, scenario, export-dataset, calibrate.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace beamsec

#endif
