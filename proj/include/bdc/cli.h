// Copyright 2026 The bdc Authors
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

#ifndef BDC_CLI_H
#define BDC_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace bdc {

constexpr int EXIT_OK = 0;
constexpr int EXIT_FAILURE_GENERIC = 1;
constexpr int EXIT_CONFIG_ERROR = 2;
constexpr int EXIT_PROTOCOL_ABORT = 3;

/// Entry point of the `bdc` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace bdc

#endif
