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

#include "coalab/gamma0.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coalab/common.hpp"

namespace coalab {

TestFunction::TestFunction(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != grid.num_nodes())
        throw ConfigError("test function size does not match grid");
    for (double v : values_)
        if (!(v > -1.0 && v <= 0.0))
            throw ConfigError("test function values must lie in (-1, 0]");
}

TestFunction TestFunction::constant_on_box(const GridSpec& grid, double value, double lo, double hi)
{
    std::vector<double> v(grid.num_nodes(), 0.0);
    for (int n : grid.nodes_in_box(lo, hi))
        v[n] = value;
    return TestFunction(grid, std::move(v));
}

double lp_integral_order(const SymmetricGridFamily& G, int n)
{
    if (n > G.n_max())
        return 0.0;
    double s = 0.0;
    const auto& c = G.comp(n);
    for (std::size_t r = 0; r < c.size(); ++r)
        s += G.lp_weight(n, r) * c[r];
    return s;
}

double lp_integral(const SymmetricGridFamily& G)
{
    double s = 0.0;
    for (int n = 0; n <= G.n_max(); ++n)
        s += lp_integral_order(G, n);
    return s;
}

namespace {

void check_cap(std::size_t n, int cap)
{
    if (static_cast<int>(n) > cap)
        throw CombinatorialBlowupError("subset enumeration over |eta| = " + std::to_string(n) +
                                       " exceeds the cap of " + std::to_string(cap));
}

template <bool Alternating>
double subset_sum(const SymmetricGridFamily& G, std::span<const int> eta, int cap)
{
    check_cap(eta.size(), cap);
    const int n = static_cast<int>(eta.size());
    std::vector<int> sub;
    sub.reserve(n);
    double s = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int k = std::popcount(mask);
        if (k > G.n_max())
            continue;
        sub.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                sub.push_back(eta[i]);
        const double g = G.at(sub);
        if constexpr (Alternating)
            s += ((n - k) % 2 ? -g : g);
        else
            s += g;
    }
    return s;
}

template <bool Alternating>
SymmetricGridFamily subset_family(const SymmetricGridFamily& G, int n_out)
{
    SymmetricGridFamily out(G.grid(), n_out);
    for (int n = 0; n <= n_out; ++n) {
        auto& c = out.comp(n);
        parallel_for(c.size(), [&](std::size_t r) {
            c[r] = subset_sum<Alternating>(G, out.tuple(n, r), kSubsetCap);
        });
    }
    return out;
}

}  // namespace

double k_transform(const SymmetricGridFamily& G, std::span<const int> eta, int cap)
{
    return subset_sum<false>(G, eta, cap);
}

double k_inverse(const SymmetricGridFamily& G, std::span<const int> eta, int cap)
{
    return subset_sum<true>(G, eta, cap);
}

SymmetricGridFamily k_transform_family(const SymmetricGridFamily& G, int n_out)
{
    return subset_family<false>(G, n_out);
}

SymmetricGridFamily k_inverse_family(const SymmetricGridFamily& G, int n_out)
{
    return subset_family<true>(G, n_out);
}

double pairing(const SymmetricGridFamily& G, const SymmetricGridFamily& k)
{
    if (!(G.grid() == k.grid()))
        throw ConfigError("pairing of families on different grids");
    double s = 0.0;
    for (int n = 0; n <= std::min(G.n_max(), k.n_max()); ++n) {
        const auto& g = G.comp(n);
        const auto& kk = k.comp(n);
        double sn = 0.0;
        for (std::size_t r = 0; r < g.size(); ++r)
            sn += G.lp_weight(n, r) * g[r] * kk[r];
        s += sn;
    }
    return s;
}

SymmetricGridFamily cluster_sum(const SymmetricGridFamily& u, std::span<const double> f, int m_max)
{
    const int N = u.n_max();
    const int M = u.grid().num_nodes();
    const double v = u.grid().cell_volume();
    m_max = std::min(m_max, N);
    // sum_{m <= m_max} D^m u / m! with (D w)(zeta) = v sum_x f(x) w(zeta u x), by Horner
    SymmetricGridFamily acc = u;
    for (int j = m_max; j >= 1; --j) {
        SymmetricGridFamily next = u;
        for (int n = 0; n < N; ++n) {
            auto& c = next.comp(n);
            parallel_for(c.size(), [&](std::size_t r) {
                const auto zeta = next.tuple(n, r);
                std::vector<int> buf;
                double s = 0.0;
                for (int x = 0; x < M; ++x) {
                    if (f[x] == 0.0)
                        continue;
                    buf.assign(zeta.begin(), zeta.end());
                    buf.insert(std::upper_bound(buf.begin(), buf.end(), x), x);
                    s += f[x] * acc.at(buf);
                }
                c[r] += v * s / j;
            });
        }
        acc = std::move(next);
    }
    return acc;
}

SymmetricGridFamily product_family(const GridSpec& grid, int n_max, std::span<const double> f)
{
    SymmetricGridFamily out(grid, n_max);
    for (int n = 0; n <= n_max; ++n) {
        auto& c = out.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r) {
            double p = 1.0;
            for (int x : out.tuple(n, r))
                p *= f[x];
            c[r] = p;
        }
    }
    return out;
}

SymmetricGridFamily coherent_state(const TestFunction& omega, int n_max)
{
    return product_family(omega.grid(), n_max, omega.values());
}

double bogoliubov(const SymmetricGridFamily& k, const TestFunction& omega)
{
    return pairing(coherent_state(omega, k.n_max()), k);
}

std::pair<double, double> minlos1_check(const SymmetricGridFamily& G, const MinlosH1& h)
{
    const int M = G.grid().num_nodes();
    const double v = G.grid().cell_volume();
    std::vector<int> buf;

    double lhs = 0.0;
    for (int n = 0; n + 1 <= G.n_max(); ++n) {
        for (std::size_t r = 0; r < G.size(n); ++r) {
            const auto eta = G.tuple(n, r);
            double inner = 0.0;
            for (int x = 0; x < M; ++x) {
                const int one[1] = {x};
                merge_sorted(eta, one, buf);
                inner += G.at(buf) * h(x, eta);
            }
            lhs += G.lp_weight(n, r) * v * inner;
        }
    }

    double rhs = 0.0;
    for (int n = 1; n <= G.n_max(); ++n) {
        for (std::size_t r = 0; r < G.size(n); ++r) {
            const auto eta = G.tuple(n, r);
            double inner = 0.0;
            for (int a = 0; a < n; ++a) {
                buf.assign(eta.begin(), eta.end());
                buf.erase(buf.begin() + a);
                inner += h(eta[a], buf);
            }
            rhs += G.lp_weight(n, r) * G.comp(n)[r] * inner;
        }
    }
    return {lhs, rhs};
}

std::pair<double, double> minlos2_check(const SymmetricGridFamily& G, const MinlosH2& h)
{
    const int M = G.grid().num_nodes();
    const double v = G.grid().cell_volume();
    std::vector<int> buf;

    double lhs = 0.0;
    for (int n = 0; n + 2 <= G.n_max(); ++n) {
        for (std::size_t r = 0; r < G.size(n); ++r) {
            const auto eta = G.tuple(n, r);
            double inner = 0.0;
            for (int x = 0; x < M; ++x) {
                for (int y = 0; y < M; ++y) {
                    const int two[2] = {std::min(x, y), std::max(x, y)};
                    merge_sorted(eta, two, buf);
                    inner += G.at(buf) * h(x, y, eta);
                }
            }
            lhs += 0.5 * G.lp_weight(n, r) * v * v * inner;
        }
    }

    double rhs = 0.0;
    for (int n = 2; n <= G.n_max(); ++n) {
        for (std::size_t r = 0; r < G.size(n); ++r) {
            const auto eta = G.tuple(n, r);
            double inner = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    buf.clear();
                    for (int c = 0; c < n; ++c)
                        if (c != a && c != b)
                            buf.push_back(eta[c]);
                    // symmetrised so the identity holds for any h
                    inner += 0.5 * (h(eta[a], eta[b], buf) + h(eta[b], eta[a], buf));
                }
            }
            rhs += G.lp_weight(n, r) * G.comp(n)[r] * inner;
        }
    }
    return {lhs, rhs};
}

namespace {

bool inside(const std::vector<char>& mask, std::span<const int> eta)
{
    return std::all_of(eta.begin(), eta.end(), [&](int x) { return mask[x] != 0; });
}

}  // namespace

SymmetricGridFamily bbs_star_from_image(const SymmetricGridFamily& H, std::pair<double, double> support)
{
    const GridSpec& grid = H.grid();
    std::vector<char> mask(grid.num_nodes(), 0);
    for (int x : grid.nodes_in_box(support.first, support.second))
        mask[x] = 1;
    SymmetricGridFamily G(grid, H.n_max());
    for (int n = 0; n <= H.n_max(); ++n) {
        auto& c = G.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r) {
            const auto eta = G.tuple(n, r);
            c[r] = inside(mask, eta) ? k_inverse(H, eta) : 0.0;
        }
    }
    return G;
}

SymmetricGridFamily sample_bbs_star(RngStream& rng, const GridSpec& grid, int N,
                                    std::pair<double, double> support, double density)
{
    if (N > kSubsetCap)
        throw CombinatorialBlowupError("sample_bbs_star order exceeds the subset cap");
    std::vector<char> mask(grid.num_nodes(), 0);
    for (int x : grid.nodes_in_box(support.first, support.second))
        mask[x] = 1;
    SymmetricGridFamily H(grid, N);
    for (int n = 0; n <= N; ++n) {
        auto& c = H.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r) {
            const double u = rng.uniform();
            const double val = rng.uniform();
            if (inside(mask, H.tuple(n, r)) && u < density)
                c[r] = val;
        }
    }
    return bbs_star_from_image(H, support);
}

double norm_k_theta(const SymmetricGridFamily& k, double theta)
{
    double best = 0.0;
    for (int n = 0; n <= k.n_max(); ++n) {
        double m = 0.0;
        for (double v : k.comp(n))
            m = std::max(m, std::abs(v));
        best = std::max(best, std::exp(-theta * n) * m);
    }
    return best;
}

double norm_g_theta(const SymmetricGridFamily& G, double theta)
{
    double s = 0.0;
    for (int n = 0; n <= G.n_max(); ++n) {
        const auto& c = G.comp(n);
        double sn = 0.0;
        for (std::size_t r = 0; r < c.size(); ++r)
            sn += G.lp_weight(n, r) * std::abs(c[r]);
        s += std::exp(theta * n) * sn;
    }
    return s;
}

double norm_fac_theta(const SymmetricGridFamily& G, double theta)
{
    double s = 0.0, fact = 1.0;
    for (int n = 0; n <= G.n_max(); ++n) {
        if (n > 0)
            fact *= n;
        const auto& c = G.comp(n);
        double sn = 0.0;
        for (std::size_t r = 0; r < c.size(); ++r)
            sn += G.lp_weight(n, r) * std::abs(c[r]);
        s += fact * std::exp(theta * n) * sn;
    }
    return s;
}

double norm_u_sigma(const SymmetricGridFamily& u, double sigma, double theta)
{
    const GridSpec& grid = u.grid();
    const SigmaReg reg{sigma};
    std::vector<double> psi(grid.num_nodes());
    for (int x = 0; x < grid.num_nodes(); ++x)
        psi[x] = reg.psi(grid.point(x));
    double best = 0.0;
    for (int n = 0; n <= u.n_max(); ++n) {
        const auto& c = u.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r) {
            double e = 1.0;
            for (int x : u.tuple(n, r))
                e *= psi[x];
            best = std::max(best, std::abs(c[r]) * std::exp(-theta * n) / e);
        }
    }
    return best;
}

}  // namespace coalab
