/******************************************************************************
 * Copyright 2026 The Platoon Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

// Subcommands of platoon_cli. Each returns a process exit code:
// 0 success / certified stable, 1 certified unstable, 2 bad input,
// 3 theorem not applicable, 4 numerical failure.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace platoon::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnstable = 1,
  kExitBadInput = 2,
  kExitNotApplicable = 3,
  kExitNumerical = 4,
};

struct CommonOptions {
  std::string config_path;  // empty: built-in defaults
  std::string out_dir;
  std::vector<std::string> overrides;
};

int cmd_topo(const std::string& kind, int n, std::optional<int> range,
             const std::string& out_dir, std::ostream& out);
int cmd_certify(const CommonOptions& options, std::ostream& out);
int cmd_simulate(const CommonOptions& options, std::ostream& out);
int cmd_sweep(const CommonOptions& options, std::ostream& out);

/// Parses argv, dispatches, and maps library exceptions to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace platoon::cli
