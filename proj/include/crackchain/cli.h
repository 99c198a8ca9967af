// Copyright 2026 The crackchain Authors
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

#ifndef CRACKCHAIN_CLI_H_
#define CRACKCHAIN_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace crackchain {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCheck = 1;  // failed verdict with --strict
inline constexpr int kExitBadInput = 2;     // config or regime error

// Runs the tool on `args` (without the program name), writing human-readable
// output to `out` and diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

std::string VersionString();

}  // namespace crackchain

#endif  // CRACKCHAIN_CLI_H_
