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

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "coalab/grid.hpp"
#include "coalab/hierarchy.hpp"
#include "coalab/model.hpp"

namespace coalab {

/// Finite-volume setting of the local evolution: initial support box Lambda,
/// particle cap N and the (strictly positive) regulariser sigma.
struct LocalSpec {
    double lambda_lo = 0.0;
    double lambda_hi = 1.0;
    int n_cap = 3;
    double sigma = 0.5;

    /// Throws ConfigError for sigma <= 0, an empty box or n_cap < 1.
    void validate() const;
};

/// Truncated Poisson density: R(eta) = exp(-h^d sum_{Lambda} rho) prod rho(x_i)
/// for eta inside [lo, hi)^d with |eta| <= N, zero otherwise. Not renormalised.
SymmetricGridFamily poisson_density(const GridSpec& grid, std::span<const double> rho, double lo, double hi, int N);
SymmetricGridFamily poisson_density(const GridSpec& grid, double rho, double lo, double hi, int N);

/// Density of a deterministic configuration: the points are snapped to their
/// grid cells and R = 1 / lp_weight on that tuple, zero elsewhere.
SymmetricGridFamily point_density(const GridSpec& grid, const std::vector<std::vector<double>>& points, int N);

/// k(eta) = int R(eta u xi) lambda(d xi).
SymmetricGridFamily density_to_correlation(const SymmetricGridFamily& R);

/// Fraction of int psi_sigma that lies outside the grid box.
double sigma_leak_fraction(const GridSpec& grid, double sigma);

/// Adjoint generator acting on densities, and the observable generator used to
/// check it.
class FokkerPlanckOperator {
public:
    FokkerPlanckOperator(const KernelSet& kernels, const GridSpec& grid, const LocalSpec& local);

    const DiscreteModel& model() const { return *dm_; }
    const LocalSpec& local() const { return local_; }

    /// (E1, E2): total coalescence and jump intensities out of eta.
    std::pair<double, double> e_sigma(std::span<const int> eta) const;

    SymmetricGridFamily apply_L_dagger(const SymmetricGridFamily& R) const;
    /// L^sigma F by direct enumeration of the events out of each configuration.
    SymmetricGridFamily apply_L_sigma(const SymmetricGridFamily& F) const;

private:
    std::shared_ptr<const DiscreteModel> dm_;
    LocalSpec local_;
};

struct FpRun {
    SymmetricGridFamily R;
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> min_value;
    double max_mass_drift = 0.0;
    /// Most negative entry seen (0 if none).
    double min_undershoot = 0.0;
};

/// dR/dt = L-dagger R by RK4. Records mass and minimum after every step.
FpRun integrate_fp(const FokkerPlanckOperator& op, const SymmetricGridFamily& R0, double t_end, double dt);

struct ConsistencyResult {
    SymmetricGridFamily k_hierarchy;
    SymmetricGridFamily q_density;
    /// Per order n: max |k - q| / max |q| (absolute when max |q| == 0).
    std::vector<double> rel_diff;
    double max_rel_diff = 0.0;
};

/// Evolves k0 = density_to_correlation(R0) by the hierarchy (m_cluster = N) and
/// R0 by the Fokker–Planck equation, then compares k_t with the correlation
/// function of R_t.
ConsistencyResult consistency_check(const KernelSet& kernels, const GridSpec& grid, const LocalSpec& local,
                                    const SymmetricGridFamily& R0, double t, double dt);

}  // namespace coalab
