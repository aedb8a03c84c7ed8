// SPDX-License-Identifier: Apache-2.0
//
// riscontrol - dynamic control of reconfigurable intelligent surfaces
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

#ifndef RISC_CLI_HPP
#define RISC_CLI_HPP

#include <string>
#include <vector>

namespace risc {

// Batch front-end behind the risctl binary; kept callable in-process so the
// command paths are testable. `args` excludes the program name. Exit codes:
// 0 success, 1 configuration/usage error, 2 runtime error. Partially written
// outputs are removed when a command fails.
int cli_main(const std::vector<std::string>& args);

} // namespace risc

#endif // RISC_CLI_HPP
