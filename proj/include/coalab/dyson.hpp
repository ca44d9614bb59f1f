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

#include <vector>

#include "coalab/hierarchy.hpp"
#include "coalab/model.hpp"

namespace coalab {

struct DysonSpec {
    ScaleParams scale;
    int n_terms = 3;
    int quad_order = 8;
};

struct DysonResult {
    /// Sum of all computed terms.
    SymmetricGridFamily value;
    /// terms[n] is the n-fold nested time integral, n = 0..n_terms.
    std::vector<SymmetricGridFamily> terms;
};

/// Time-ordered series for k_t: sum over n <= n_terms of
///   int_{0 <= t_n <= ... <= t_1 <= t} S(t - t_1) B S(t_1 - t_2) B ... B S(t_n) k0,
/// with S(t) = exp(-Psi t) and iterated Gauss–Legendre on the simplex.
/// Throws HorizonExceededError unless q t < T(alpha_star, alpha0).
DysonResult dyson_evolve(const HierarchyOperator& op, const SymmetricGridFamily& k0, const DysonSpec& spec,
                         const KernelConstants& constants, double t);

/// The same series on quasi-observables with B-hat and the factors in reverse
/// order. Uses the same quadrature nodes, so
///   pairing(dual(G0), k0) == pairing(G0, dyson_evolve(k0))
/// up to rounding.
DysonResult dyson_evolve_dual(const HierarchyOperator& op, const SymmetricGridFamily& G0, const DysonSpec& spec,
                              const KernelConstants& constants, double t);

/// (1/n!) (n/e)^n (q t / T)^n, the bound on term n relative to ||k0||_{alpha0}.
double truncation_bound(int n, double t, double q, double T);

/// Product form prod_k q n beta(alpha_{2k-1}) / ((alpha_star - alpha0) e) of the
/// bound on one integrand, with the partition of `scale` (scale.n = n).
double pi_bound(const ScaleParams& scale, const KernelConstants& c);

struct BoundSeries {
    std::vector<double> partial_sums;
    /// Limit of consecutive term ratios, q t / T.
    double ratio = 0.0;
    bool converges = false;
};

BoundSeries bound_series(double t, double q, double T, int n_max);

struct OperatorBoundCheck {
    double a_lhs = 0.0;  ///< ||A k||_{theta'}
    double a_rhs = 0.0;  ///< 2 c1_max / (e^2 (theta'-theta)^2) ||k||_theta
    double b_lhs = 0.0;  ///< ||B k||_{theta'}
    double b_rhs = 0.0;  ///< beta(theta) / (e (theta'-theta)) ||k||_theta
    bool a_ok = false;
    bool b_ok = false;
};

OperatorBoundCheck verify_operator_bounds(const HierarchyOperator& op, const SymmetricGridFamily& k, double theta,
                                          double theta_prime, const KernelConstants& c);

}  // namespace coalab
