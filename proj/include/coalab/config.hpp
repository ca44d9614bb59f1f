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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalab/dyson.hpp"
#include "coalab/fokker_planck.hpp"
#include "coalab/grid.hpp"
#include "coalab/hierarchy.hpp"
#include "coalab/model.hpp"

namespace coalab {

struct ValidationSettings {
    int random_inputs = 20;
    int cone_samples = 100;
    std::vector<double> sigma_values{1.0, 0.3, 0.1, 0.03};
    /// Particle cap of the reference evolution in the Lambda,N experiment.
    int reference_n_max = 6;
    std::size_t kmc_trajectories = 10000;
    std::size_t kmc_law_events = 100000;
    double fp_dt = 1e-3;
    /// Poisson intensity of the initial state in the Lambda,N experiment.
    double lambda_n_rho = 0.5;
};

/// Fully resolved run configuration.
struct RunConfig {
    // model
    int d = 1;
    GaussianParams gaussian;
    double sigma = 0.5;
    // domain
    double lambda_c_lo = -0.5, lambda_c_hi = 1.5;
    int m = 12;
    double lambda_lo = 0.0, lambda_hi = 1.0;
    // truncation
    int n_max = 3;
    int m_cluster = 3;
    int n_cap = 3;
    // evolution
    std::string method = "rk4";
    double t_end = 0.02;
    double dt = 1e-3;
    std::vector<double> snapshot_times;
    double q = 2.0;
    int n_terms = 3;
    int quad_order = 8;
    // scale
    double alpha0 = 0.0, alpha_star = 1.0;
    // ensemble
    std::size_t n_traj = 1000;
    std::uint64_t master_seed = 20240607;
    // initial state: Poisson intensity on the local box, or explicit points
    std::optional<double> poisson_rho = 1.0;
    std::vector<std::vector<double>> points;

    ValidationSettings validation;

    KernelSet kernels() const { return KernelSet::gaussian(d, gaussian); }
    GridSpec grid() const { return GridSpec::make(d, lambda_c_lo, lambda_c_hi, m); }
    TruncationSpec truncation() const { return {n_max, m_cluster}; }
    LocalSpec local() const { return {lambda_lo, lambda_hi, n_cap, sigma}; }
    DysonSpec dyson() const
    {
        return {ScaleParams::make(alpha0, alpha_star, q, n_terms > 0 ? n_terms : 1), n_terms, quad_order};
    }
    /// Snapshot times, or {t_end} when none are given.
    std::vector<double> snapshots() const;
};

/// Parses and validates a config document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// The resolved config with every default filled in.
nlohmann::json to_json(const RunConfig& c);

/// 16 hex digits of FNV-1a over the compact dump of to_json(c).
std::string config_hash(const RunConfig& c);

}  // namespace coalab
