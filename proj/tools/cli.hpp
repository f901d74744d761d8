// SPDX-License-Identifier: Apache-2.0
//
// risdet: adaptive detection with RIS-assisted radar echoes
// Copyright (C) 2026 The risdet authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace risdet::cli {

inline constexpr const char* kToolName = "risdet";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit statuses besides 0 (success) and 1 (unexpected failure).
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Parses `args` (without the program name), runs one subcommand and writes its CSV files
/// and <subcommand>.manifest.json into the output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace risdet::cli
