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

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "coalab/grid.hpp"
#include "coalab/rng.hpp"

namespace coalab {

/// Default cap on |eta| for subset enumeration (2^|eta| terms).
inline constexpr int kSubsetCap = 12;

/// Grid function omega: Lambda_c -> (-1, 0], zero outside its support.
class TestFunction {
public:
    TestFunction(const GridSpec& grid, std::vector<double> values);
    /// omega = value on nodes in [lo, hi)^d, zero elsewhere.
    static TestFunction constant_on_box(const GridSpec& grid, double value, double lo, double hi);

    const GridSpec& grid() const { return grid_; }
    double operator()(int node) const { return values_[node]; }
    const std::vector<double>& values() const { return values_; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// G(empty) + sum_n h^{dn}/n! sum over ordered grid tuples of G^(n).
double lp_integral(const SymmetricGridFamily& G);
/// Lebesgue–Poisson integral of the order-n component only.
double lp_integral_order(const SymmetricGridFamily& G, int n);

/// (KG)(eta) = sum over sub-configurations xi of eta of G(xi).
double k_transform(const SymmetricGridFamily& G, std::span<const int> eta, int cap = kSubsetCap);
/// Moebius inverse: sum over xi of (-1)^{|eta \ xi|} G(xi).
double k_inverse(const SymmetricGridFamily& G, std::span<const int> eta, int cap = kSubsetCap);
/// K and K^{-1} evaluated on every stored tuple up to order n_out.
SymmetricGridFamily k_transform_family(const SymmetricGridFamily& G, int n_out);
SymmetricGridFamily k_inverse_family(const SymmetricGridFamily& G, int n_out);

/// u'(eta) = sum_{m <= m_max} h^{dm} sum over sorted xi of order m of
///   u(eta u xi) prod_{u in xi} f(u) / prod mult!,
/// i.e. int u(eta u xi) e(f; xi) lambda(d xi) cut at |xi| <= m_max, on orders 0..u.n_max().
SymmetricGridFamily cluster_sum(const SymmetricGridFamily& u, std::span<const double> f, int m_max);

/// <<G, k>>: Lebesgue–Poisson integral of G k over orders both store.
double pairing(const SymmetricGridFamily& G, const SymmetricGridFamily& k);

/// e(f; eta) = prod_{x in eta} f(x), orders 0..n_max.
SymmetricGridFamily product_family(const GridSpec& grid, int n_max, std::span<const double> f);
SymmetricGridFamily coherent_state(const TestFunction& omega, int n_max);

/// B(omega) = <<e(omega; .), k>>.
double bogoliubov(const SymmetricGridFamily& k, const TestFunction& omega);

/// h(x, eta) for the first identity and h(x, y, eta) for the second, with eta sorted.
using MinlosH1 = std::function<double(int x, std::span<const int> eta)>;
using MinlosH2 = std::function<double(int x, int y, std::span<const int> eta)>;

/// Both sides of
///   int int G(eta u x) h(x, eta) dx lambda(d eta) = int sum_{x in eta} G(eta) h(x, eta \ x) lambda(d eta).
std::pair<double, double> minlos1_check(const SymmetricGridFamily& G, const MinlosH1& h);
/// Both sides of
///   1/2 int int int G(eta u {x,y}) h(x,y,eta) = int sum_{{x,y} in eta} G(eta) h(x,y,eta \ {x,y}).
std::pair<double, double> minlos2_check(const SymmetricGridFamily& G, const MinlosH2& h);

/// Draws G = K^{-1} H with H >= 0 random, supported on configurations of at most
/// N nodes inside `support` ([lo, hi)^d). Then (KG)(eta) = H(eta) >= 0 for |eta| <= N.
SymmetricGridFamily sample_bbs_star(RngStream& rng, const GridSpec& grid, int N,
                                    std::pair<double, double> support, double density = 1.0);
/// G = K^{-1} H for a given image H (orders <= N, read on configurations inside
/// `support` and extended by H(eta) := H(eta n support)). G vanishes on every
/// configuration with a node outside `support`.
SymmetricGridFamily bbs_star_from_image(const SymmetricGridFamily& H, std::pair<double, double> support);

/// ||k||_theta = max_n e^{-theta n} max |k^(n)|.
double norm_k_theta(const SymmetricGridFamily& k, double theta);
/// |G|_theta = int |G| e^{theta |eta|} d lambda.
double norm_g_theta(const SymmetricGridFamily& G, double theta);
/// |G|_{fac,theta} = int |G| |eta|! e^{theta |eta|} d lambda.
double norm_fac_theta(const SymmetricGridFamily& G, double theta);
/// ||u||_{sigma,theta} = max |u(eta)| e^{-theta |eta|} / e(psi_sigma; eta).
double norm_u_sigma(const SymmetricGridFamily& u, double sigma, double theta);

}  // namespace coalab
