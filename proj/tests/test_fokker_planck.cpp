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
#include "coalab/fokker_planck.hpp"
#include "coalab/gamma0.hpp"
#include "coalab/hierarchy.hpp"
#include "oracles.hpp"

using namespace coalab;

namespace {

const KernelSet kStd = KernelSet::gaussian(1, GaussianParams{});
const GridSpec kG = GridSpec::make(1, -0.5, 1.5, 12);
const LocalSpec kLoc{0.0, 1.0, 3, 0.5};

KernelSet with(double k1, double k2, double A, double s1 = 0.3)
{
    GaussianParams p;
    p.kappa1 = k1;
    p.kappa2 = k2;
    p.A = A;
    p.s1 = s1;
    return KernelSet::gaussian(1, p);
}

double rel(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace

TEST(LocalSpec, RejectsUnregularisedModel)
{
    EXPECT_THROW((LocalSpec{0.0, 1.0, 3, 0.0}.validate()), ConfigError);
    EXPECT_THROW((LocalSpec{1.0, 1.0, 3, 0.5}.validate()), ConfigError);
    EXPECT_THROW((LocalSpec{0.0, 1.0, 0, 0.5}.validate()), ConfigError);
    EXPECT_THROW(FokkerPlanckOperator(kStd, kG, LocalSpec{0.0, 1.0, 3, 0.0}), ConfigError);
}

TEST(PoissonDensity, Examples)
{
    const auto R0 = poisson_density(kG, 0.0, 0.0, 1.0, 3);
    EXPECT_EQ(R0.comp(0)[0], 1.0);
    for (int n = 1; n <= 3; ++n)
        for (double x : R0.comp(n))
            EXPECT_EQ(x, 0.0);
    // rho |Lambda| = 1
    EXPECT_NEAR(lp_integral(poisson_density(kG, 1.0, 0.0, 1.0, 2)), std::exp(-1.0) * 2.5, 1e-15);
    EXPECT_NEAR(lp_integral(poisson_density(kG, 1.0, 0.0, 1.0, 8)), 1.0, 1e-5);
}

TEST(PoissonDensity, SupportedInBox)
{
    const auto R = poisson_density(kG, 2.0, 0.0, 1.0, 3);
    const auto in = kG.nodes_in_box(0.0, 1.0);
    for (int n = 1; n <= 3; ++n)
        for (std::size_t r = 0; r < R.size(n); ++r) {
            const auto t = R.tuple(n, r);
            const bool inside = std::all_of(t.begin(), t.end(), [&](int x) {
                return std::find(in.begin(), in.end(), x) != in.end();
            });
            EXPECT_EQ(R.comp(n)[r] > 0.0, inside);
        }
}

TEST(DensityToCorrelation, EmptyDensity)
{
    SymmetricGridFamily R(kG, 3);
    R.comp(0)[0] = 1.0;
    const auto k = density_to_correlation(R);
    EXPECT_EQ(k.comp(0)[0], 1.0);
    for (int n = 1; n <= 3; ++n)
        for (double x : k.comp(n))
            EXPECT_EQ(x, 0.0);
}

TEST(DensityToCorrelation, PoissonCorrelationsWithinTail)
{
    const double rho = 1.5;
    const int N = 8;
    const auto k = density_to_correlation(poisson_density(kG, rho, 0.0, 1.0, N));
    const auto in = kG.nodes_in_box(0.0, 1.0);
    for (int n = 0; n <= 3; ++n) {
        // k(eta) = rho^n P(Poisson(rho) <= N - n) for eta inside the box
        double cdf = 0.0, term = std::exp(-rho);
        for (int m = 0; m <= N - n; ++m) {
            cdf += term;
            term *= rho / (m + 1);
        }
        const std::vector<int> eta(static_cast<std::size_t>(n), in[2]);
        EXPECT_NEAR(k.at(eta), std::pow(rho, n) * cdf, 1e-14);
        EXPECT_LE(std::pow(rho, n) - k.at(eta), std::pow(rho, n) * (1 - cdf) + 1e-14);
    }
}

TEST(PointDensity, UnitMassOnSnappedTuple)
{
    const auto R = point_density(kG, {{0.31}, {0.74}}, 3);
    EXPECT_NEAR(lp_integral(R), 1.0, 1e-15);
    const double p1[1] = {0.31}, p2[1] = {0.74};
    std::vector<int> t{kG.node_of(p1), kG.node_of(p2)};
    std::sort(t.begin(), t.end());
    EXPECT_GT(R.at(t), 0.0);
    EXPECT_NEAR(lp_integral_order(R, 2), 1.0, 1e-15);
}

TEST(ESigma, Examples)
{
    const FokkerPlanckOperator op(kStd, kG, kLoc);
    const auto& dm = op.model();
    const auto [e1, e2] = op.e_sigma(std::vector<int>{});
    EXPECT_EQ(e1, 0.0);
    EXPECT_EQ(e2, 0.0);
    const int x = 5;
    const auto [f1, f2] = op.e_sigma(std::vector<int>{x});
    EXPECT_EQ(f1, 0.0);
    double want = 0.0;
    for (int y = 0; y < 12; ++y)
        want += dm.psi(y) * dm.c2(x, y);
    EXPECT_NEAR(f2, dm.v() * want, 1e-15);
    // the continuum integral, up to the midpoint-rule error
    const double px = kG.coord(x, 0);
    const double cont = oracle::simpson([&](double y) {
        return std::exp(-0.5 * y * y) * oracle::gauss1(px - y, 0.3);
    }, -0.5, 1.5);
    EXPECT_NEAR(f2, cont, 2e-2);
    const std::vector<int> eta{1, 4, 9};
    EXPECT_NEAR(op.e_sigma(eta).first, dm.psi_total(eta), 1e-15);
}

TEST(LDagger, EmptyDensityIsStationary)
{
    const FokkerPlanckOperator op(kStd, kG, kLoc);
    SymmetricGridFamily R(kG, 3);
    R.comp(0)[0] = 1.0;
    const auto out = op.apply_L_dagger(R);
    for (int n = 0; n <= 3; ++n)
        for (double x : out.comp(n))
            EXPECT_EQ(x, 0.0);
}

TEST(LDagger, ConservesMassAndIsAdjoint)
{
    const FokkerPlanckOperator op(kStd, kG, kLoc);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto R = oracle::random_family(kG, 3, 500 + i, 0.0, 1.0);
        const auto F = oracle::random_family(kG, 3, 600 + i);
        const auto LR = op.apply_L_dagger(R);
        EXPECT_LE(std::abs(lp_integral(LR)), 1e-10 * lp_integral(R));
        EXPECT_LE(rel(pairing(op.apply_L_sigma(F), R), pairing(F, LR)), 1e-10);
    }
}

TEST(LSigma, ConstantsAreHarmonic)
{
    const FokkerPlanckOperator op(kStd, kG, kLoc);
    SymmetricGridFamily one(kG, 3);
    for (int n = 0; n <= 3; ++n)
        for (double& x : one.comp(n))
            x = 1.0;
    const auto out = op.apply_L_sigma(one);
    for (int n = 0; n <= 3; ++n)
        for (double x : out.comp(n))
            EXPECT_NEAR(x, 0.0, 1e-14);
}

TEST(IntegrateFp, NoInteractionIsStatic)
{
    const FokkerPlanckOperator op(with(0, 0, 1), kG, kLoc);
    const auto R0 = poisson_density(kG, 1.0, 0.0, 1.0, 3);
    const FpRun run = integrate_fp(op, R0, 0.2, 0.01);
    EXPECT_EQ(oracle::max_abs_diff(run.R, R0), 0.0);
}

TEST(IntegrateFp, TwoParticleCoalescenceIsExponential)
{
    // fixed pair, no jumps: P(two particles at t) = exp(-r t) with r the pair rate
    const KernelSet ks = with(1.0, 0.0, 1.0, 5.0);
    const FokkerPlanckOperator op(ks, kG, kLoc);
    const auto R0 = point_density(kG, {{0.25}, {0.75}}, 2);
    const double p1[1] = {0.25}, p2[1] = {0.75};
    const double r = op.model().c1z(kG.node_of(p1), kG.node_of(p2));
    for (double t : {0.1, 0.5, 1.0}) {
        const FpRun run = integrate_fp(op, R0, t, 1e-3);
        EXPECT_NEAR(lp_integral_order(run.R, 2), std::exp(-r * t), 1e-4) << t;
        EXPECT_NEAR(lp_integral_order(run.R, 1), 1.0 - std::exp(-r * t), 1e-4) << t;
    }
}

TEST(IntegrateFp, MassPositivityAndOrderCap)
{
    const FokkerPlanckOperator op(kStd, kG, kLoc);
    const auto R0 = poisson_density(kG, 1.0, 0.0, 1.0, 3);
    const FpRun run = integrate_fp(op, R0, 0.5, 1e-3);
    EXPECT_EQ(run.R.n_max(), 3);
    EXPECT_LE(run.max_mass_drift, 1e-6);
    EXPECT_GE(run.min_undershoot, -1e-8);
    EXPECT_LE(lp_integral(run.R), 1.0);
    ASSERT_EQ(run.times.size(), run.mass.size());
    EXPECT_NEAR(run.times.back(), 0.5, 1e-12);
}

TEST(Consistency, ZeroTimeAndNoInteraction)
{
    const auto R0 = poisson_density(kG, 1.0, 0.0, 1.0, 3);
    EXPECT_EQ(consistency_check(kStd, kG, kLoc, R0, 0.0, 1e-3).max_rel_diff, 0.0);
    EXPECT_EQ(consistency_check(with(0, 0, 1), kG, kLoc, R0, 0.1, 1e-3).max_rel_diff, 0.0);
}

TEST(Consistency, HierarchyMatchesDensityRoute)
{
    const auto R0 = poisson_density(kG, 1.0, 0.0, 1.0, 3);
    const auto r = consistency_check(kStd, kG, kLoc, R0, 0.1, 1e-3);
    ASSERT_EQ(r.rel_diff.size(), 4u);
    EXPECT_LE(r.max_rel_diff, 1e-3);
    // and the mass bound on the empty component
    EXPECT_LE(r.q_density.comp(0)[0], 1.0);
}

TEST(SigmaLeak, FractionShrinksWithSigma)
{
    double prev = 1.0;
    for (double s : {0.1, 0.5, 2.0, 10.0}) {
        const double f = sigma_leak_fraction(kG, s);
        EXPECT_GE(f, 0.0);
        EXPECT_LT(f, prev);
        prev = f;
    }
}
