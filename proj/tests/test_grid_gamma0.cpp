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


#include <cmath>

#include <gtest/gtest.h>

#include "coalab/common.hpp"
#include "coalab/gamma0.hpp"
#include "coalab/grid.hpp"
#include "oracles.hpp"

using namespace coalab;

namespace {

std::uint64_t binom(int n, int k)
{
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

TEST(GridSpec, RejectsDegenerateBoxes)
{
    EXPECT_THROW(GridSpec::make(1, 0, 1, 1), ConfigError);
    EXPECT_THROW(GridSpec::make(1, 1, 1, 4), ConfigError);
    EXPECT_THROW(GridSpec::make(0, 0, 1, 4), ConfigError);
}

TEST(GridSpec, MidpointNodes)
{
    const GridSpec g = GridSpec::make(2, -0.5, 1.5, 4);
    EXPECT_EQ(g.num_nodes(), 16);
    EXPECT_DOUBLE_EQ(g.h(), 0.5);
    EXPECT_DOUBLE_EQ(g.cell_volume(), 0.25);
    EXPECT_DOUBLE_EQ(g.coord(0, 0), -0.25);
    EXPECT_DOUBLE_EQ(g.coord(5, 0), 0.25);
    EXPECT_DOUBLE_EQ(g.coord(5, 1), 0.25);
    for (int i = 0; i < g.num_nodes(); ++i)
        EXPECT_EQ(g.node_of(g.point(i)), i);
    const double outside[2] = {1.5, 0.0};
    EXPECT_EQ(g.node_of(outside), -1);
    EXPECT_EQ(g.nodes_in_box(0.0, 1.0).size(), 4u);
}

TEST(MultisetIndex, CountsAndRankRoundTrip)
{
    for (int M : {1, 3, 8}) {
        const MultisetIndex idx(M, 4);
        for (int n = 0; n <= 4; ++n) {
            ASSERT_EQ(idx.count(n), binom(M + n - 1, n));
            for (std::size_t r = 0; r < idx.count(n); ++r) {
                const auto t = idx.tuple(n, r);
                EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
                EXPECT_EQ(idx.rank(t), r);
            }
        }
    }
}

TEST(MultisetIndex, MultiplicityWeights)
{
    const MultisetIndex idx(5, 4);
    const std::vector<int> t{1, 1, 1, 3};
    EXPECT_DOUBLE_EQ(idx.inv_mult_factorial(4, idx.rank(t)), 1.0 / 6.0);
    const std::vector<int> u{0, 2, 2, 4};
    EXPECT_DOUBLE_EQ(idx.inv_mult_factorial(4, idx.rank(u)), 0.5);
}

TEST(SymmetricGridFamily, SortedStorageReproducesOrderedSums)
{
    const GridSpec g = GridSpec::make(1, 0, 1, 5);
    const auto G = oracle::random_family(g, 4, 11);
    const double ordered = oracle::lp_ordered(g, 4, [&](std::vector<int> t) { return G.at(oracle::sorted(t)); });
    EXPECT_NEAR(lp_integral(G), ordered, 1e-13 * std::abs(ordered));
}

TEST(SymmetricGridFamily, Arithmetic)
{
    const GridSpec g = GridSpec::make(1, 0, 1, 4);
    const auto a = oracle::random_family(g, 3, 1), b = oracle::random_family(g, 3, 2);
    const auto c = a + 2.0 * b - a;
    EXPECT_LE(oracle::max_abs_diff(c, 2.0 * b), 1e-15);
    auto d = a;
    d.axpy(-1.0, a);
    EXPECT_EQ(oracle::max_abs_diff(d, SymmetricGridFamily(g, 3)), 0.0);
    const auto e = a.with_n_max(5);
    EXPECT_EQ(e.n_max(), 5);
    EXPECT_EQ(oracle::max_abs_diff(e, a), 0.0);
    for (double x : e.comp(5))
        EXPECT_EQ(x, 0.0);
    const std::vector<int> t{0, 2, 3, 3};
    EXPECT_EQ(a.at(t), 0.0);  // beyond n_max
    EXPECT_THROW(auto x = a + oracle::random_family(GridSpec::make(1, 0, 2, 4), 3, 3), ConfigError);
}

TEST(SymmetricGridFamily, LpWeight)
{
    const GridSpec g = GridSpec::make(1, 0, 1, 4);
    const SymmetricGridFamily u(g, 3);
    const std::vector<int> t{2, 2, 3};
    EXPECT_DOUBLE_EQ(u.lp_weight(3, u.index().rank(t)), std::pow(0.25, 3) / 2.0);
}

TEST(MergeSorted, Merges)
{
    std::vector<int> out;
    const std::vector<int> a{0, 2, 2}, b{1, 2, 5};
    merge_sorted(a, b, out);
    EXPECT_EQ(out, (std::vector<int>{0, 1, 2, 2, 2, 5}));
}

TEST(DiscreteModel, TablesMatchKernels)
{
    const KernelSet k = KernelSet::gaussian(1, GaussianParams{});
    const GridSpec g = GridSpec::make(1, -0.5, 1.5, 6);
    const DiscreteModel dm(k, 0.5, g);
    const double v = g.cell_volume();
    for (int x = 0; x < dm.M(); ++x)
        for (int y = 0; y < dm.M(); ++y) {
            EXPECT_DOUBLE_EQ(dm.c2(x, y), dm.c2(y, x));
            double s = 0.0;
            for (int z = 0; z < dm.M(); ++z) {
                const auto px = g.point(x), py = g.point(y), pz = g.point(z);
                EXPECT_NEAR(dm.c1(x, y, z), k.c1(px, py, pz), 1e-14);
                s += std::exp(-0.5 * pz[0] * pz[0]) * k.c1(px, py, pz);
            }
            EXPECT_NEAR(dm.c1z(x, y), v * s, 1e-13);
            const double r[1] = {g.coord(x, 0) - g.coord(y, 0)};
            EXPECT_NEAR(dm.ephi(x, y), std::exp(-k.phi(r)), 1e-15);
        }
    const std::vector<int> eta{0, 2, 5};
    EXPECT_NEAR(dm.psi_total(eta), dm.c1z(0, 2) + dm.c1z(0, 5) + dm.c1z(2, 5), 1e-15);
}

// ---------------------------------------------------------------- gamma0

namespace {

const GridSpec kG = GridSpec::make(1, -0.5, 1.5, 12);
const GridSpec kSmall = GridSpec::make(1, -0.5, 1.5, 6);

SymmetricGridFamily indicator_order(const GridSpec& g, int n_max, int order)
{
    SymmetricGridFamily u(g, n_max);
    for (double& x : u.comp(order))
        x = 1.0;
    return u;
}

}  // namespace

TEST(LpIntegral, EmptyOnly)
{
    SymmetricGridFamily G(kG, 3);
    G.comp(0)[0] = 2.75;
    EXPECT_EQ(lp_integral(G), 2.75);
}

TEST(LpIntegral, CoherentStateApproachesExponential)
{
    const auto omega = TestFunction::constant_on_box(kG, -0.5, 0.0, 1.0);
    double tail = 0.0, f = 1.0;
    for (int n = 1; n <= 30; ++n) {
        f *= 0.5 / n;
        if (n > 8)
            tail += f;
    }
    const double v = lp_integral(coherent_state(omega, 8));
    EXPECT_LE(std::abs(v - std::exp(-0.5)), tail * (1 + 1e-6));
    // on this grid the discrete value is exactly the partial sum of the series
    double partial = 0.0, term = 1.0;
    for (int n = 0; n <= 8; ++n) {
        partial += term;
        term *= -0.5 / (n + 1);
    }
    EXPECT_NEAR(v, partial, 1e-15);
}

TEST(LpIntegral, FirstOrder)
{
    auto G = oracle::random_family(kG, 1, 4);
    G.comp(0)[0] = 0.0;
    double s = 0.0;
    for (double x : G.comp(1))
        s += x;
    EXPECT_NEAR(lp_integral(G), kG.h() * s, 1e-15);
    EXPECT_NEAR(lp_integral_order(G, 1), kG.h() * s, 1e-15);
}

TEST(KTransform, Examples)
{
    const SymmetricGridFamily empty = indicator_order(kG, 4, 0);
    const SymmetricGridFamily single = indicator_order(kG, 4, 1);
    const auto omega = TestFunction::constant_on_box(kG, -0.3, 0.0, 1.0);
    const SymmetricGridFamily e = coherent_state(omega, 4);
    RngStream rng(8);
    for (int i = 0; i < 100; ++i) {
        const int n = static_cast<int>(rng.below(5));
        std::vector<int> eta;
        for (int j = 0; j < n; ++j)
            eta.push_back(static_cast<int>(rng.below(12)));
        std::sort(eta.begin(), eta.end());
        EXPECT_EQ(k_transform(empty, eta), 1.0);
        EXPECT_EQ(k_transform(single, eta), n);
        double prod = 1.0;
        for (int x : eta)
            prod *= 1.0 + omega(x);
        EXPECT_NEAR(k_transform(e, eta), prod, 1e-15);
    }
}

TEST(KInverse, Examples)
{
    SymmetricGridFamily ones(kSmall, 4);
    for (int n = 0; n <= 4; ++n)
        for (double& x : ones.comp(n))
            x = 1.0;
    const SymmetricGridFamily single = indicator_order(kSmall, 4, 1);
    for (int n = 0; n <= 4; ++n)
        for (std::size_t r = 0; r < ones.size(n); ++r) {
            const auto eta = ones.tuple(n, r);
            EXPECT_EQ(k_inverse(ones, eta), n == 0 ? 1.0 : 0.0);
            // direct alternating sum over position subsets
            double alt = 0.0;
            for (unsigned mask = 0; mask < (1u << n); ++mask)
                if (std::popcount(mask) == 1)
                    alt += ((n - 1) % 2 ? -1.0 : 1.0);
            EXPECT_EQ(k_inverse(single, eta), alt);
            if (n > 0) {
                EXPECT_EQ(alt, n * std::pow(-1.0, n - 1));
            }
        }
}

TEST(KTransform, InverseRoundTrip)
{
    const auto G = oracle::random_family(kSmall, 4, 21);
    EXPECT_LE(oracle::max_abs_diff(k_inverse_family(k_transform_family(G, 4), 4), G), 1e-13);
    EXPECT_LE(oracle::max_abs_diff(k_transform_family(k_inverse_family(G, 4), 4), G), 1e-13);
}

TEST(KTransform, CapExceeded)
{
    const auto G = oracle::random_family(kSmall, 2, 1);
    const std::vector<int> eta{0, 1, 2, 3, 4};
    EXPECT_THROW(k_transform(G, eta, 4), CombinatorialBlowupError);
    EXPECT_THROW(k_inverse(G, eta, 4), CombinatorialBlowupError);
}

TEST(Pairing, Examples)
{
    SymmetricGridFamily G(kG, 3), k(kG, 3);
    G.comp(0)[0] = 1.0;
    k.comp(0)[0] = 1.0;
    EXPECT_EQ(pairing(G, k), 1.0);

    const double rho = 1.7;
    const std::vector<double> fr(12, rho);
    const auto omega = TestFunction::constant_on_box(kG, -0.4, 0.0, 1.0);
    const double x = rho * kG.h() * 6 * -0.4;
    double series = 0.0, term = 1.0;
    for (int n = 0; n <= 5; ++n) {
        series += term;
        term *= x / (n + 1);
    }
    EXPECT_NEAR(pairing(coherent_state(omega, 5), product_family(kG, 5, fr)), series, 1e-14);
}

TEST(Bogoliubov, ZeroAndFirstOrder)
{
    auto k = oracle::random_family(kG, 1, 5, 0.0, 2.0);
    const auto zero = TestFunction::constant_on_box(kG, 0.0, 0.0, 1.0);
    EXPECT_EQ(bogoliubov(k, zero), k.comp(0)[0]);
    std::vector<double> w(12);
    RngStream rng(2);
    double s = 0.0;
    for (int i = 0; i < 12; ++i) {
        w[i] = -rng.uniform(0.0, 0.99);
        s += w[i] * k.comp(1)[static_cast<std::size_t>(i)];
    }
    EXPECT_NEAR(bogoliubov(k, TestFunction(kG, w)), k.comp(0)[0] + kG.h() * s, 1e-14);
}

TEST(TestFunction, RejectsOutOfRange)
{
    EXPECT_THROW(TestFunction(kSmall, std::vector<double>(6, 0.1)), ConfigError);
    EXPECT_THROW(TestFunction(kSmall, std::vector<double>(6, -1.0)), ConfigError);
    EXPECT_THROW(TestFunction(kSmall, std::vector<double>(5, -0.5)), ConfigError);
}

TEST(Minlos, TrivialCases)
{
    const auto G = oracle::random_family(kSmall, 3, 3);
    const auto [a, b] = minlos1_check(G, [](int, std::span<const int>) { return 0.0; });
    EXPECT_EQ(a, 0.0);
    EXPECT_EQ(b, 0.0);
    const auto [c, d] = minlos2_check(G, [](int, int, std::span<const int>) { return 0.0; });
    EXPECT_EQ(c, 0.0);
    EXPECT_EQ(d, 0.0);

    const SymmetricGridFamily single = indicator_order(kSmall, 3, 1);
    auto f = [](int x) { return 0.1 * x + 0.3; };
    double sf = 0.0;
    for (int x = 0; x < 6; ++x)
        sf += f(x);
    const auto [l, r] = minlos1_check(single, [&](int x, std::span<const int> eta) {
        return eta.empty() ? f(x) : 0.0;
    });
    EXPECT_NEAR(l, kSmall.h() * sf, 1e-15);
    EXPECT_NEAR(r, kSmall.h() * sf, 1e-15);
}

TEST(Minlos, FirstIdentityAgainstOrderedOracle)
{
    const GridSpec g = GridSpec::make(1, -0.5, 1.5, 8);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto G = oracle::random_family(g, 3, 100 + s);
        auto h = [s](int x, std::span<const int> eta) {
            double v = std::sin(1.0 + x + 0.37 * static_cast<double>(s));
            for (int e : eta)
                v += std::cos(0.3 * e * (x + 1));
            return v;
        };
        const auto [lhs, rhs] = minlos1_check(G, h);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
        // lhs = sum_n v^n/n! sum_{ordered eta} v sum_x G(eta + x) h(x, eta)
        const double v = g.cell_volume();
        const double ordered = oracle::lp_ordered(g, 2, [&](std::vector<int> eta) {
            const auto se = oracle::sorted(eta);
            double acc = 0.0;
            for (int x = 0; x < g.num_nodes(); ++x) {
                auto t = se;
                t.push_back(x);
                acc += G.at(oracle::sorted(t)) * h(x, se);
            }
            return v * acc;
        });
        EXPECT_LE(std::abs(lhs - ordered), 1e-10 * std::abs(ordered));
    }
}

TEST(Minlos, SecondIdentityRandom)
{
    const GridSpec g = GridSpec::make(1, -0.5, 1.5, 8);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto G = oracle::random_family(g, 3, 200 + s);
        const auto [lhs, rhs] = minlos2_check(G, [s](int x, int y, std::span<const int> eta) {
            double v = std::cos(0.2 * x * y + static_cast<double>(s)) + 0.1 * (x - y);
            for (int e : eta)
                v *= 1.0 + 0.05 * e;
            return v;
        });
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
    }
}

TEST(ClusterSum, MatchesOrderedOracle)
{
    const auto u = oracle::random_family(kSmall, 4, 31);
    std::vector<double> f(6);
    for (int i = 0; i < 6; ++i)
        f[static_cast<std::size_t>(i)] = -0.1 * (i + 1);
    const auto c = cluster_sum(u, f, 2);
    const double v = kSmall.cell_volume();
    for (int n = 0; n <= 2; ++n)
        for (std::size_t r = 0; r < c.size(n); ++r) {
            const auto eta = c.tuple(n, r);
            double want = 0.0, fact = 1.0;
            for (int m = 0; m <= 2; ++m) {
                if (m > 0)
                    fact *= m;
                double s = 0.0;
                oracle::for_each_ordered(6, m, [&](const std::vector<int>& xi) {
                    std::vector<int> t(eta.begin(), eta.end());
                    double w = 1.0;
                    for (int x : xi) {
                        t.push_back(x);
                        w *= f[static_cast<std::size_t>(x)];
                    }
                    s += u.at(oracle::sorted(t)) * w;
                });
                want += std::pow(v, m) / fact * s;
            }
            EXPECT_NEAR(c.comp(n)[r], want, 1e-14);
        }
}

TEST(BbsStar, ImageIsNonNegative)
{
    RngStream rng(77);
    const auto G = sample_bbs_star(rng, kG, 3, {0.0, 1.0});
    RngStream pick(78);
    for (int i = 0; i < 500; ++i) {
        const int n = static_cast<int>(pick.below(4));
        std::vector<int> eta;
        for (int j = 0; j < n; ++j)
            eta.push_back(static_cast<int>(pick.below(12)));
        std::sort(eta.begin(), eta.end());
        EXPECT_GE(k_transform(G, eta), -1e-12);
    }
    // G vanishes as soon as a node leaves the support
    const auto inside = kG.nodes_in_box(0.0, 1.0);
    for (int n = 1; n <= 3; ++n)
        for (std::size_t r = 0; r < G.size(n); ++r) {
            const auto t = G.tuple(n, r);
            const bool out = std::any_of(t.begin(), t.end(), [&](int x) {
                return std::find(inside.begin(), inside.end(), x) == inside.end();
            });
            if (out) {
                EXPECT_EQ(G.comp(n)[r], 0.0);
            }
        }
}

TEST(BbsStar, ConstantImageGivesEmptyIndicator)
{
    SymmetricGridFamily H(kSmall, 3);
    for (int n = 0; n <= 3; ++n)
        for (double& x : H.comp(n))
            x = 1.0;
    const auto G = bbs_star_from_image(H, {-0.5, 1.5});
    EXPECT_EQ(G.comp(0)[0], 1.0);
    for (int n = 1; n <= 3; ++n)
        for (double x : G.comp(n))
            EXPECT_EQ(x, 0.0);
}

TEST(BbsStar, EmptyImageAlternates)
{
    SymmetricGridFamily H(kSmall, 3);
    H.comp(0)[0] = 1.0;
    const auto G = bbs_star_from_image(H, {-0.5, 1.5});
    for (int n = 0; n <= 3; ++n)
        for (double x : G.comp(n))
            EXPECT_EQ(x, n % 2 ? -1.0 : 1.0);
}

TEST(Pairing, KAdjunction)
{
    // <<G, k>> with k(eta) = int R(eta u xi) equals int (KG) R
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto G = oracle::random_family(kSmall, 3, 300 + s);
        const auto R = oracle::random_family(kSmall, 3, 400 + s, 0.0, 1.0);
        std::vector<double> one(6, 1.0);
        const auto k = cluster_sum(R, one, 3);
        const double a = pairing(G, k);
        const double b = pairing(k_transform_family(G, 3), R);
        EXPECT_LE(std::abs(a - b), 1e-10 * std::abs(a));
    }
}

TEST(Norms, EmptyIndicator)
{
    const SymmetricGridFamily e = indicator_order(kG, 3, 0);
    EXPECT_EQ(norm_g_theta(e, 0.7), 1.0);
    EXPECT_EQ(norm_fac_theta(e, 0.7), 1.0);
    EXPECT_EQ(norm_u_sigma(e, 0.5, 0.7), 1.0);
    EXPECT_EQ(norm_k_theta(e, 0.7), 1.0);
}

TEST(Norms, PointwiseBoundFromKNorm)
{
    const auto k = oracle::random_family(kG, 3, 9, -3.0, 3.0);
    for (double theta : {-1.0, 0.0, 0.5, 2.0}) {
        const double nk = norm_k_theta(k, theta);
        for (int n = 0; n <= 3; ++n)
            for (double x : k.comp(n))
                EXPECT_LE(std::abs(x), nk * std::exp(theta * n) * (1 + 1e-14));
    }
}

TEST(Norms, GNormsAgainstOrderedSums)
{
    const auto G = oracle::random_family(kSmall, 3, 10);
    const double theta = 0.3;
    auto val = [&](std::vector<int> t, bool fac) {
        double w = std::abs(G.at(oracle::sorted(t))) * std::exp(theta * static_cast<double>(t.size()));
        if (fac)
            w *= std::tgamma(static_cast<double>(t.size()) + 1);
        return w;
    };
    EXPECT_NEAR(norm_g_theta(G, theta), oracle::lp_ordered(kSmall, 3, [&](auto t) { return val(t, false); }), 1e-13);
    EXPECT_NEAR(norm_fac_theta(G, theta), oracle::lp_ordered(kSmall, 3, [&](auto t) { return val(t, true); }), 1e-13);
}
