// Copyright 2026 The coalab Authors
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


#pragma once

#include <string>

#include "coalab/config.hpp"
#include "coalab/validation.hpp"

namespace coalab {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

/// KMC ensemble: snapshots.csv plus k1/k2/count estimates per snapshot time.
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
/// Hierarchy evolution (rk4 or dyson): one k_t bundle per snapshot time.
int cmd_hierarchy(const RunConfig& cfg, const std::string& out_dir);
/// Fokker–Planck evolution: one R_t bundle per snapshot time and mass.csv.
int cmd_fokker_planck(const RunConfig& cfg, const std::string& out_dir);
/// beta table, horizon, Dyson bounds and operator-bound checks in bounds.json.
int cmd_bounds(const RunConfig& cfg, const std::string& out_dir);
/// Writes report.json; kExitCheckFailed when any check fails.
int cmd_validate(const RunConfig& cfg, const std::string& out_dir, const ValidationOptions& opt = {});

}  // namespace coalab
