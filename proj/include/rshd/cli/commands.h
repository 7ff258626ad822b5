// Copyright 2026 The rshd Authors.
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

#ifndef RSHD_CLI_COMMANDS_H_
#define RSHD_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace rshd {

// Exit codes: 0 success, 2 config, 3 data, 4 numeric, 5 io.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rshd

#endif  // RSHD_CLI_COMMANDS_H_
