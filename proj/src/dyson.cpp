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

#include "coalab/dyson.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "coalab/common.hpp"
#include "coalab/gamma0.hpp"
#include "coalab/quadrature.hpp"

namespace coalab {

namespace {

void check_spec(const DysonSpec& spec, const KernelConstants& c, double t)
{
    if (spec.n_terms < 0 || spec.n_terms > 4)
        throw ConfigError("dyson n_terms must lie in 0..4");
    if (spec.quad_order < 1)
        throw ConfigError("dyson quad_order must be >= 1");
    if (t < 0.0)
        throw ConfigError("dyson time must be non-negative");
    const double T = horizon(spec.scale.alpha_star, spec.scale.alpha0, c);
    if (spec.scale.q * t >= T)
        throw HorizonExceededError("dyson series needs q t < T: q t = " + std::to_string(spec.scale.q * t) +
                                   ", T = " + std::to_string(T));
}

}  // namespace

DysonResult dyson_evolve(const HierarchyOperator& op, const SymmetricGridFamily& k0_in, const DysonSpec& spec,
                         const KernelConstants& constants, double t)
{
    check_spec(spec, constants, t);
    const int N = op.truncation().n_max;
    const SymmetricGridFamily k0 = k0_in.n_max() == N ? k0_in : k0_in.with_n_max(N);
    const SymmetricGridFamily psi = op.psi_family(N);
    const GaussLegendre gl(spec.quad_order);

    // I_0(s) = S(s) k0,  I_j(s) = int_0^s S(s - r) B I_{j-1}(r) dr
    std::function<SymmetricGridFamily(int, double)> I = [&](int j, double s) {
        if (j == 0)
            return apply_semigroup(psi, k0, s);
        SymmetricGridFamily acc(k0.grid(), N);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double r = s * gl.nodes[i];
            acc.axpy(s * gl.weights[i], apply_semigroup(psi, op.apply_B(I(j - 1, r)), s - r));
        }
        return acc;
    };

    DysonResult res;
    res.value = SymmetricGridFamily(k0.grid(), N);
    for (int n = 0; n <= spec.n_terms; ++n) {
        res.terms.push_back(I(n, t));
        res.value += res.terms.back();
    }
    return res;
}

DysonResult dyson_evolve_dual(const HierarchyOperator& op, const SymmetricGridFamily& G0, const DysonSpec& spec,
                              const KernelConstants& constants, double t)
{
    check_spec(spec, constants, t);
    const int n_out = G0.n_max();
    const SymmetricGridFamily psi = op.psi_family(n_out);
    const GaussLegendre gl(spec.quad_order);

    // J_0(s) G = S(s) G,  J_j(s) G = int_0^s J_{j-1}(r) [B-hat S(s - r) G] dr
    std::function<SymmetricGridFamily(int, double, const SymmetricGridFamily&)> J =
        [&](int j, double s, const SymmetricGridFamily& G) {
            if (j == 0)
                return apply_semigroup(psi, G, s);
            SymmetricGridFamily acc(G.grid(), n_out);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double r = s * gl.nodes[i];
                acc.axpy(s * gl.weights[i], J(j - 1, r, op.apply_B_hat(apply_semigroup(psi, G, s - r), n_out)));
            }
            return acc;
        };

    DysonResult res;
    res.value = SymmetricGridFamily(G0.grid(), n_out);
    for (int n = 0; n <= spec.n_terms; ++n) {
        res.terms.push_back(J(n, t, G0));
        res.value += res.terms.back();
    }
    return res;
}

double truncation_bound(int n, double t, double q, double T)
{
    if (n == 0)
        return 1.0;
    if (t == 0.0)
        return 0.0;
    const double x = q * t / T;
    return std::exp(n * std::log(n / std::exp(1.0)) + n * std::log(x) - std::lgamma(n + 1.0));
}

double pi_bound(const ScaleParams& scale, const KernelConstants& c)
{
    const int n = scale.n;
    const double width = scale.alpha_star - scale.alpha0;
    double p = 1.0;
    for (int k = 1; k <= n; ++k)
        p *= scale.q * n * beta(scale.alpha[2 * k - 1], c) / (width * std::exp(1.0));
    return p;
}

BoundSeries bound_series(double t, double q, double T, int n_max)
{
    BoundSeries bs;
    double s = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        s += truncation_bound(n, t, q, T);
        bs.partial_sums.push_back(s);
    }
    bs.ratio = q * t / T;
    bs.converges = bs.ratio < 1.0;
    return bs;
}

OperatorBoundCheck verify_operator_bounds(const HierarchyOperator& op, const SymmetricGridFamily& k, double theta,
                                          double theta_prime, const KernelConstants& c)
{
    if (!(theta_prime > theta))
        throw InvalidScaleError("operator bounds need theta' > theta");
    const double d = theta_prime - theta;
    const double e = std::exp(1.0);
    const double kn = norm_k_theta(k, theta);
    OperatorBoundCheck r;
    r.a_lhs = norm_k_theta(op.apply_A(k), theta_prime);
    r.a_rhs = 2.0 * c.c1_max / (e * e * d * d) * kn;
    r.b_lhs = norm_k_theta(op.apply_B(k), theta_prime);
    r.b_rhs = beta(theta, c) / (e * d) * kn;
    r.a_ok = r.a_lhs <= r.a_rhs * (1.0 + 1e-12);
    r.b_ok = r.b_lhs <= r.b_rhs * (1.0 + 1e-12);
    return r;
}

}  // namespace coalab
