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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalab/config.hpp"
#include "coalab/grid.hpp"

namespace coalab {

/// One named numerical check. `passed` is residual <= tolerance, or
/// residual > tolerance when comparison is ">" (p-values).
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string comparison = "<=";
    bool passed = false;
    double wall_time = 0.0;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

struct ValidationReport {
    std::string config_hash;
    /// Sorted by name.
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

struct ValidationOptions {
    /// Only run these checks (all when empty).
    std::vector<std::string> only;
    /// Directory of artifacts whose config hashes must match this config.
    std::optional<std::string> artifacts_dir;
};

/// Names of every check run_validation knows, sorted.
std::vector<std::string> check_names();

ValidationReport run_validation(const RunConfig& cfg, const ValidationOptions& opt = {});

/// Runs a single named check. Throws ConfigError for an unknown name.
std::vector<CheckResult> run_check(const RunConfig& cfg, const std::string& name);

/// Initial density of the config (Poisson or explicit points) on [lo, hi)^d, cap N.
SymmetricGridFamily initial_density(const RunConfig& cfg, const GridSpec& grid, double lo, double hi, int N);

/// Time used by the experiments that must stay below T/2: 0.4 T, or t_end when
/// T is infinite (no interaction).
double half_horizon_time(const RunConfig& cfg);

/// Individual experiments. Each returns one or more results.
CheckResult check_kernel_constants(const RunConfig& cfg);
std::vector<CheckResult> check_minlos(const RunConfig& cfg);
CheckResult check_duality(const RunConfig& cfg);
CheckResult check_adjointness(const RunConfig& cfg);
/// "mass" and "fp_positivity" from one Fokker–Planck run over [0, 0.5].
std::vector<CheckResult> check_mass_positivity(const RunConfig& cfg, double t_end = 0.5);
CheckResult check_consistency(const RunConfig& cfg, double t = 0.1);
/// "dyson_zero_term", "dyson_bound" and "dyson_rk4" at t = cfg.t_end.
std::vector<CheckResult> check_dyson(const RunConfig& cfg);
CheckResult check_positivity_cone(const RunConfig& cfg);
CheckResult check_sigma_limit(const RunConfig& cfg);
CheckResult check_lambda_n_limit(const RunConfig& cfg);
CheckResult check_fixed_point(const RunConfig& cfg);
/// "kmc_jump_displacement", "kmc_jump_times" and "kmc_coalescence_time".
std::vector<CheckResult> check_kmc_laws(const RunConfig& cfg);
CheckResult check_kmc_fp(const RunConfig& cfg, double t = 0.5);
CheckResult check_artifacts(const RunConfig& cfg, const std::string& dir);

}  // namespace coalab
