// Copyright 2026 The ejpeg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EJPEG_CLI_H_
#define EJPEG_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ejpeg {

// Exit statuses of the command-line front end.
constexpr int kExitOk = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitUsage = 2;

// Runs one ejpeg command. args excludes the program name. Machine-readable
// JSON goes to out with --json, human-readable text otherwise; diagnostics go
// to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ejpeg

#endif  // EJPEG_CLI_H_
