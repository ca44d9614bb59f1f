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

#include "coalab/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coalab/common.hpp"
#include "coalab/gamma0.hpp"

namespace coalab {

namespace {

void insert_sorted(std::vector<int>& v, int x)
{
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

void erase_pos(std::span<const int> eta, int a, std::vector<int>& out)
{
    out.clear();
    for (int i = 0; i < static_cast<int>(eta.size()); ++i)
        if (i != a)
            out.push_back(eta[i]);
}

double min_entry(const SymmetricGridFamily& u)
{
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= u.n_max(); ++n)
        for (double x : u.comp(n))
            m = std::min(m, x);
    return m;
}

}  // namespace

void LocalSpec::validate() const
{
    if (!(sigma > 0.0))
        throw ConfigError("the local evolution needs sigma > 0");
    if (!(lambda_hi > lambda_lo))
        throw ConfigError("local box is empty");
    if (n_cap < 1)
        throw ConfigError("n_cap must be >= 1");
}

SymmetricGridFamily poisson_density(const GridSpec& grid, std::span<const double> rho, double lo, double hi, int N)
{
    if (static_cast<int>(rho.size()) != grid.num_nodes())
        throw ConfigError("density profile size does not match grid");
    std::vector<double> r(grid.num_nodes(), 0.0);
    double total = 0.0;
    for (int x : grid.nodes_in_box(lo, hi)) {
        if (rho[x] < 0.0)
            throw ConfigError("Poisson intensity must be non-negative");
        r[x] = rho[x];
        total += rho[x];
    }
    SymmetricGridFamily R = product_family(grid, N, r);
    R *= std::exp(-grid.cell_volume() * total);
    return R;
}

SymmetricGridFamily poisson_density(const GridSpec& grid, double rho, double lo, double hi, int N)
{
    const std::vector<double> r(grid.num_nodes(), rho);
    return poisson_density(grid, r, lo, hi, N);
}

SymmetricGridFamily point_density(const GridSpec& grid, const std::vector<std::vector<double>>& points, int N)
{
    if (static_cast<int>(points.size()) > N)
        throw ConfigError("more initial points than the particle cap");
    std::vector<int> eta;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != grid.d)
            throw ConfigError("initial point has the wrong dimension");
        const int x = grid.node_of(p);
        if (x < 0)
            throw ConfigError("initial point lies outside the grid");
        eta.push_back(x);
    }
    std::sort(eta.begin(), eta.end());
    SymmetricGridFamily R(grid, N);
    const int n = static_cast<int>(eta.size());
    const std::size_t r = R.index().rank(eta);
    R.comp(n)[r] = 1.0 / R.lp_weight(n, r);
    return R;
}

SymmetricGridFamily density_to_correlation(const SymmetricGridFamily& R)
{
    const std::vector<double> one(R.grid().num_nodes(), 1.0);
    return cluster_sum(R, one, R.n_max());
}

double sigma_leak_fraction(const GridSpec& grid, double sigma)
{
    if (!(sigma > 0.0))
        return 1.0;
    const double s = std::sqrt(sigma);
    const double inside = 0.5 * (std::erf(s * grid.b) - std::erf(s * grid.a));
    return 1.0 - std::pow(inside, grid.d);
}

FokkerPlanckOperator::FokkerPlanckOperator(const KernelSet& kernels, const GridSpec& grid, const LocalSpec& local)
    : local_(local)
{
    local.validate();
    dm_ = std::make_shared<DiscreteModel>(kernels, local.sigma, grid);
}

std::pair<double, double> FokkerPlanckOperator::e_sigma(std::span<const int> eta) const
{
    const DiscreteModel& dm = *dm_;
    const int n = static_cast<int>(eta.size());
    double e2 = 0.0;
    for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int y = 0; y < dm.M(); ++y) {
            double p = dm.psi(y) * dm.c2(eta[a], y);
            for (int b = 0; b < n; ++b)
                if (b != a)
                    p *= dm.ephi(y, eta[b]);
            s += p;
        }
        e2 += dm.v() * s;
    }
    return {dm.psi_total(eta), e2};
}

SymmetricGridFamily FokkerPlanckOperator::apply_L_dagger(const SymmetricGridFamily& R) const
{
    const DiscreteModel& dm = *dm_;
    const int M = dm.M();
    const int N = R.n_max();
    const double v = dm.v();
    SymmetricGridFamily out(dm.grid(), N);
    for (int n = 1; n <= N; ++n) {
        auto& c = out.comp(n);
        parallel_for(c.size(), [&](std::size_t r) {
            const auto eta = out.tuple(n, r);
            std::vector<int> base, buf;
            double total = 0.0;

            // coalescence into z = eta[a]
            if (n + 1 <= N) {
                double g = 0.0;
                for (int a = 0; a < n; ++a) {
                    const int z = eta[a];
                    erase_pos(eta, a, base);
                    double s = 0.0;
                    for (int x = 0; x < M; ++x) {
                        for (int y = x; y < M; ++y) {
                            const double w = (x == y ? 1.0 : 2.0) * dm.c1(x, y, z);
                            if (w == 0.0)
                                continue;
                            buf = base;
                            insert_sorted(buf, x);
                            insert_sorted(buf, y);
                            s += w * R.at(buf);
                        }
                    }
                    g += dm.psi(z) * s;
                }
                total += 0.5 * v * v * g;
            }

            // jump into y = eta[a]
            for (int a = 0; a < n; ++a) {
                const int y = eta[a];
                double p = dm.psi(y);
                for (int b = 0; b < n; ++b)
                    if (b != a)
                        p *= dm.ephi(y, eta[b]);
                if (p == 0.0)
                    continue;
                erase_pos(eta, a, base);
                double s = 0.0;
                for (int x = 0; x < M; ++x) {
                    const double w = dm.c2(x, y);
                    if (w == 0.0)
                        continue;
                    buf = base;
                    insert_sorted(buf, x);
                    s += w * R.at(buf);
                }
                total += v * p * s;
            }

            const auto [e1, e2] = e_sigma(eta);
            total -= (e1 + e2) * R.comp(n)[r];
            c[r] = total;
        });
    }
    return out;
}

SymmetricGridFamily FokkerPlanckOperator::apply_L_sigma(const SymmetricGridFamily& F) const
{
    const DiscreteModel& dm = *dm_;
    const int M = dm.M();
    const double v = dm.v();
    SymmetricGridFamily out(dm.grid(), F.n_max());
    std::vector<int> base, buf;
    for (int n = 1; n <= F.n_max(); ++n) {
        for (std::size_t r = 0; r < out.size(n); ++r) {
            const auto eta = out.tuple(n, r);
            const double f_eta = F.comp(n)[r];
            double total = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    base.clear();
                    for (int i = 0; i < n; ++i)
                        if (i != a && i != b)
                            base.push_back(eta[i]);
                    for (int z = 0; z < M; ++z) {
                        const double rate = v * dm.psi(z) * dm.c1(eta[a], eta[b], z);
                        buf = base;
                        insert_sorted(buf, z);
                        total += rate * (F.at(buf) - f_eta);
                    }
                }
            }
            for (int a = 0; a < n; ++a) {
                erase_pos(eta, a, base);
                for (int y = 0; y < M; ++y) {
                    double rate = v * dm.psi(y) * dm.c2(eta[a], y);
                    for (int b : base)
                        rate *= dm.ephi(y, b);
                    buf = base;
                    insert_sorted(buf, y);
                    total += rate * (F.at(buf) - f_eta);
                }
            }
            out.comp(n)[r] = total;
        }
    }
    return out;
}

FpRun integrate_fp(const FokkerPlanckOperator& op, const SymmetricGridFamily& R0, double t_end, double dt)
{
    FpRun run;
    const double m0 = lp_integral(R0);
    run.times.push_back(0.0);
    run.mass.push_back(m0);
    run.min_value.push_back(min_entry(R0));
    run.R = rk4_integrate([&](const SymmetricGridFamily& R) { return op.apply_L_dagger(R); }, R0, t_end, dt,
                          [&](double t, const SymmetricGridFamily& R) {
                              run.times.push_back(t);
                              run.mass.push_back(lp_integral(R));
                              run.min_value.push_back(min_entry(R));
                          });
    for (std::size_t i = 0; i < run.mass.size(); ++i) {
        run.max_mass_drift = std::max(run.max_mass_drift, std::abs(run.mass[i] - m0));
        run.min_undershoot = std::min(run.min_undershoot, run.min_value[i]);
    }
    return run;
}

ConsistencyResult consistency_check(const KernelSet& kernels, const GridSpec& grid, const LocalSpec& local,
                                    const SymmetricGridFamily& R0, double t, double dt)
{
    local.validate();
    const int N = R0.n_max();
    const HierarchyOperator hop(kernels, local.sigma, grid, TruncationSpec{N, N});
    const FokkerPlanckOperator fop(kernels, grid, local);

    ConsistencyResult res;
    res.k_hierarchy = rk4_evolve(hop, density_to_correlation(R0), t, dt);
    res.q_density = density_to_correlation(integrate_fp(fop, R0, t, dt).R);
    for (int n = 0; n <= N; ++n) {
        double diff = 0.0, scale = 0.0;
        const auto& a = res.k_hierarchy.comp(n);
        const auto& b = res.q_density.comp(n);
        for (std::size_t r = 0; r < a.size(); ++r) {
            diff = std::max(diff, std::abs(a[r] - b[r]));
            scale = std::max(scale, std::abs(b[r]));
        }
        const double rel = scale > 0.0 ? diff / scale : diff;
        res.rel_diff.push_back(rel);
        res.max_rel_diff = std::max(res.max_rel_diff, rel);
    }
    return res;
}

}  // namespace coalab
