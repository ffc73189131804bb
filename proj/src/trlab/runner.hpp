// Copyright 2026 The trlab Authors
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

#pragma once

#include <string>

#include "trlab/config.hpp"

namespace trlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,          // verification failed or threshold exceeded
  kExitBudget = 2,          // a vertex or atom budget was hit
  kExitNonConvergence = 3,  // p-harmonic solver did not converge
  kExitInternal = 70,
  kExitUsage = 64,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;   // CSV or JSON document
  std::string message;  // one-line summary or error
};

const std::vector<std::string>& command_names();

// certificate | verify | pharmonic | ball-dump | folner-table. `suite` is
// used by verify only. Library errors are mapped to exit codes, never thrown.
CommandResult run_command(const std::string& command, const ExperimentConfig& cfg, const std::string& suite = "");

}  // namespace trlab
