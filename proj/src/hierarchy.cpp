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

#include "coalab/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coalab/common.hpp"
#include "coalab/gamma0.hpp"

namespace coalab {

namespace {

void erase_pos(std::span<const int> eta, int a, std::vector<int>& out)
{
    out.clear();
    for (int i = 0; i < static_cast<int>(eta.size()); ++i)
        if (i != a)
            out.push_back(eta[i]);
}

void insert_sorted(std::vector<int>& v, int x)
{
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

bool all_finite(const SymmetricGridFamily& u)
{
    for (int n = 0; n <= u.n_max(); ++n)
        for (double x : u.comp(n))
            if (!std::isfinite(x))
                return false;
    return true;
}

}  // namespace

QyResult apply_Qy(const SymmetricGridFamily& k, const DiscreteModel& dm, int y,
                  std::span<const int> eta, int m_cluster)
{
    if (m_cluster < 0)
        throw TruncationError("m_cluster must be >= 0");
    if (static_cast<int>(eta.size()) + m_cluster > k.n_max())
        throw TruncationError("Q_y cluster cutoff: |eta| + m_cluster = " +
                              std::to_string(eta.size() + m_cluster) + " exceeds n_max = " +
                              std::to_string(k.n_max()));
    const int M = dm.M();
    const double v = dm.v();
    std::vector<double> f(M);
    double a = 0.0;
    for (int u = 0; u < M; ++u) {
        f[u] = dm.ephi(y, u) - 1.0;
        a += v * std::abs(f[u]);
    }

    QyResult res;
    auto idx = MultisetIndex::get(M, std::max(m_cluster, 1));
    std::vector<int> buf;
    double vm = 1.0;
    for (int m = 0; m <= m_cluster; ++m) {
        double sm = 0.0;
        for (std::size_t r = 0; r < idx->count(m); ++r) {
            const auto xi = idx->tuple(m, r);
            double p = idx->inv_mult_factorial(m, r);
            for (int u : xi)
                p *= f[u];
            if (p == 0.0)
                continue;
            merge_sorted(eta, xi, buf);
            sm += p * k.at(buf);
        }
        res.value += vm * sm;
        vm *= v;
    }

    double kmax = 0.0;
    for (int n = 0; n <= k.n_max(); ++n)
        for (double x : k.comp(n))
            kmax = std::max(kmax, std::abs(x));
    double partial = 0.0, term = 1.0;
    for (int m = 0; m <= m_cluster; ++m) {
        partial += term;
        term *= a / (m + 1);
    }
    res.remainder = kmax * std::max(0.0, std::exp(a) - partial);
    return res;
}

HierarchyOperator::HierarchyOperator(const KernelSet& kernels, double sigma, const GridSpec& grid,
                                     const TruncationSpec& trunc)
    : dm_(std::make_shared<DiscreteModel>(kernels, sigma, grid)), trunc_(trunc)
{
    if (trunc.n_max < 1)
        throw ConfigError("n_max must be >= 1");
    if (trunc.m_cluster < 0)
        throw ConfigError("m_cluster must be >= 0");
}

std::vector<SymmetricGridFamily> HierarchyOperator::qy_tables(const SymmetricGridFamily& k_in) const
{
    const DiscreteModel& dm = *dm_;
    const int M = dm.M();
    const int N = trunc_.n_max;
    const int mc = std::min(trunc_.m_cluster, N);
    const SymmetricGridFamily k = k_in.n_max() == N ? k_in : k_in.with_n_max(N);

    std::vector<SymmetricGridFamily> out(M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t yy) {
        const int y = static_cast<int>(yy);
        std::vector<double> f(M);
        bool trivial = true;
        for (int u = 0; u < M; ++u) {
            f[u] = dm.ephi(y, u) - 1.0;
            trivial = trivial && f[u] == 0.0;
        }
        if (trivial || mc == 0) {
            out[y] = k;
            return;
        }
        out[y] = cluster_sum(k, f, mc);
    });
    return out;
}

SymmetricGridFamily HierarchyOperator::apply_L_delta(const SymmetricGridFamily& k_in, unsigned summands) const
{
    const DiscreteModel& dm = *dm_;
    const int M = dm.M();
    const int N = trunc_.n_max;
    const double v = dm.v();
    const SymmetricGridFamily k = k_in.n_max() == N ? k_in : k_in.with_n_max(N);

    std::vector<SymmetricGridFamily> qk;
    if (summands & (kL21 | kL22))
        qk = qy_tables(k);

    SymmetricGridFamily out(dm.grid(), N);
    for (int n = 1; n <= N; ++n) {
        auto& c = out.comp(n);
        parallel_for(c.size(), [&](std::size_t r) {
            const auto eta = out.tuple(n, r);
            std::vector<int> base, buf;
            double total = 0.0;

            if ((summands & kL11) && n + 1 <= N) {
                double s11 = 0.0;
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
                            s += w * k.at(buf);
                        }
                    }
                    s11 += dm.psi(z) * s;
                }
                total += 0.5 * v * v * s11;
            }

            if ((summands & (kL12 | kL13)) && n + 1 <= N) {
                double s12 = 0.0, s13 = 0.0;
                for (int a = 0; a < n; ++a) {
                    for (int w = 0; w < M; ++w) {
                        buf.assign(eta.begin(), eta.end());
                        insert_sorted(buf, w);
                        const double kv = k.at(buf);
                        if (summands & kL12)
                            s12 += dm.c1z(eta[a], w) * kv;
                        if (summands & kL13)
                            s13 += dm.c1z(w, eta[a]) * kv;
                    }
                }
                total -= 0.5 * v * (s12 + s13);
            }

            if (summands & kL14)
                total -= dm.psi_total(eta) * k.comp(n)[r];

            if (summands & kL21) {
                double s21 = 0.0;
                for (int a = 0; a < n; ++a) {
                    const int y = eta[a];
                    double prod = dm.psi(y);
                    for (int b = 0; b < n; ++b)
                        if (b != a)
                            prod *= dm.ephi(y, eta[b]);
                    if (prod == 0.0)
                        continue;
                    erase_pos(eta, a, base);
                    double s = 0.0;
                    for (int x = 0; x < M; ++x) {
                        const double w = dm.c2(x, y);
                        if (w == 0.0)
                            continue;
                        buf = base;
                        insert_sorted(buf, x);
                        s += w * qk[y].at(buf);
                    }
                    s21 += prod * s;
                }
                total += v * s21;
            }

            if (summands & kL22) {
                double s22 = 0.0;
                for (int y = 0; y < M; ++y) {
                    double inner = 0.0;
                    for (int a = 0; a < n; ++a) {
                        double prod = dm.c2(eta[a], y);
                        for (int b = 0; b < n; ++b)
                            if (b != a)
                                prod *= dm.ephi(y, eta[b]);
                        inner += prod;
                    }
                    if (inner != 0.0)
                        s22 += dm.psi(y) * qk[y].comp(n)[r] * inner;
                }
                total -= v * s22;
            }

            c[r] = total;
        });
    }
    return out;
}

SymmetricGridFamily HierarchyOperator::apply_A(const SymmetricGridFamily& k) const
{
    return apply_L_delta(k, kL14);
}

SymmetricGridFamily HierarchyOperator::apply_B(const SymmetricGridFamily& k) const
{
    return apply_L_delta(k, kAllSummands & ~static_cast<unsigned>(kL14));
}

namespace {

SymmetricGridFamily l_hat_impl(const DiscreteModel& dm, const SymmetricGridFamily& G, int n_out,
                               bool with_diagonal)
{
    const int M = dm.M();
    const double v = dm.v();
    if (n_out - 1 > kSubsetCap)
        throw CombinatorialBlowupError("L-hat subset sum over |eta| = " + std::to_string(n_out) +
                                       " exceeds the cap");
    SymmetricGridFamily out(dm.grid(), n_out);
    for (int n = 1; n <= n_out; ++n) {
        auto& c = out.comp(n);
        parallel_for(c.size(), [&](std::size_t r) {
            const auto eta = out.tuple(n, r);
            std::vector<int> base, buf, xi;
            double total = 0.0;
            const double g_eta = G.at(eta);

            // coalescence
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    const int x = eta[a], y = eta[b];
                    base.clear();
                    for (int i = 0; i < n; ++i)
                        if (i != a && i != b)
                            base.push_back(eta[i]);
                    double gain = 0.0;
                    for (int z = 0; z < M; ++z) {
                        const double w = dm.psi(z) * dm.c1(x, y, z);
                        if (w == 0.0)
                            continue;
                        buf = base;
                        insert_sorted(buf, z);
                        gain += w * G.at(buf);
                    }
                    erase_pos(eta, b, buf);
                    double loss = G.at(buf);
                    erase_pos(eta, a, buf);
                    loss += G.at(buf);
                    if (with_diagonal)
                        loss += g_eta;
                    total += v * gain - dm.c1z(x, y) * loss;
                }
            }

            // jumps
            for (int a = 0; a < n; ++a) {
                const int x = eta[a];
                erase_pos(eta, a, base);
                const int m = n - 1;
                for (int y = 0; y < M; ++y) {
                    const double w = v * dm.psi(y) * dm.c2(x, y);
                    if (w == 0.0)
                        continue;
                    double s = 0.0;
                    for (unsigned mask = 0; mask < (1u << m); ++mask) {
                        double p = 1.0;
                        xi.clear();
                        for (int i = 0; i < m; ++i) {
                            const double e = dm.ephi(y, base[i]);
                            if (mask & (1u << i)) {
                                p *= e;
                                xi.push_back(base[i]);
                            } else {
                                p *= e - 1.0;
                            }
                        }
                        if (p == 0.0)
                            continue;
                        buf = xi;
                        insert_sorted(buf, y);
                        double d = G.at(buf);
                        buf = xi;
                        insert_sorted(buf, x);
                        d -= G.at(buf);
                        s += p * d;
                    }
                    total += w * s;
                }
            }
            c[r] = total;
        });
    }
    return out;
}

}  // namespace

SymmetricGridFamily HierarchyOperator::apply_L_hat(const SymmetricGridFamily& G, int n_out) const
{
    return l_hat_impl(*dm_, G, n_out, true);
}

SymmetricGridFamily HierarchyOperator::apply_B_hat(const SymmetricGridFamily& G, int n_out) const
{
    return l_hat_impl(*dm_, G, n_out, false);
}

SymmetricGridFamily HierarchyOperator::apply_L_hat2_literal(const SymmetricGridFamily& G, int n_out) const
{
    const DiscreteModel& dm = *dm_;
    const int M = dm.M();
    const double v = dm.v();
    SymmetricGridFamily out(dm.grid(), n_out);
    std::vector<int> rest, xi, buf;
    for (int n = 1; n <= n_out; ++n) {
        for (std::size_t r = 0; r < out.size(n); ++r) {
            const auto eta = out.tuple(n, r);
            double total = 0.0;
            for (int a = 0; a < n; ++a) {
                const int x = eta[a];
                erase_pos(eta, a, rest);
                const int m = n - 1;
                for (int y = 0; y < M; ++y) {
                    double s = 0.0;
                    for (unsigned mxi = 0; mxi < (1u << m); ++mxi) {
                        xi.clear();
                        for (int i = 0; i < m; ++i)
                            if (mxi & (1u << i))
                                xi.push_back(rest[i]);
                        buf = xi;
                        insert_sorted(buf, y);
                        double d = G.at(buf);
                        buf = xi;
                        insert_sorted(buf, x);
                        d -= G.at(buf);
                        // zeta runs over sub-configurations of xi
                        double zsum = 0.0;
                        for (unsigned mz = 0; mz < (1u << m); ++mz) {
                            if ((mz & ~mxi) != 0)
                                continue;
                            double p = 1.0;
                            for (int i = 0; i < m; ++i) {
                                const bool in_rest_minus_xi = !(mxi & (1u << i));
                                const bool in_zeta = (mz & (1u << i)) != 0;
                                if (in_rest_minus_xi || in_zeta)
                                    p *= dm.ephi(y, rest[i]) - 1.0;
                            }
                            zsum += p;
                        }
                        s += d * zsum;
                    }
                    total += v * dm.psi(y) * dm.c2(x, y) * s;
                }
            }
            out.comp(n)[r] = total;
        }
    }
    return out;
}

SymmetricGridFamily HierarchyOperator::psi_family(int n_max) const
{
    SymmetricGridFamily out(dm_->grid(), n_max);
    for (int n = 2; n <= n_max; ++n) {
        auto& c = out.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r)
            c[r] = dm_->psi_total(out.tuple(n, r));
    }
    return out;
}

SymmetricGridFamily apply_semigroup(const SymmetricGridFamily& psi, const SymmetricGridFamily& u, double t)
{
    SymmetricGridFamily out = u;
    for (int n = 2; n <= u.n_max(); ++n) {
        auto& c = out.comp(n);
        const auto& p = psi.comp(n);
        for (std::size_t r = 0; r < c.size(); ++r)
            c[r] *= std::exp(-p[r] * t);
    }
    return out;
}

SymmetricGridFamily rk4_integrate(const LinearMap& f, SymmetricGridFamily u, double t_end, double dt,
                                  const std::function<void(double, const SymmetricGridFamily&)>& on_step)
{
    if (!(dt > 0.0))
        throw ConfigError("time step must be positive");
    if (t_end < 0.0)
        throw ConfigError("t_end must be non-negative");
    const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    if (steps == 0)
        return u;
    const double h = t_end / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        const SymmetricGridFamily k1 = f(u);
        const SymmetricGridFamily k2 = f(u + (0.5 * h) * k1);
        const SymmetricGridFamily k3 = f(u + (0.5 * h) * k2);
        const SymmetricGridFamily k4 = f(u + h * k3);
        u.axpy(h / 6.0, k1);
        u.axpy(h / 3.0, k2);
        u.axpy(h / 3.0, k3);
        u.axpy(h / 6.0, k4);
        if (!all_finite(u))
            throw BlowUpError("non-finite value at t = " + std::to_string((s + 1) * h));
        if (on_step)
            on_step((s + 1) * h, u);
    }
    return u;
}

SymmetricGridFamily rk4_evolve(const HierarchyOperator& op, const SymmetricGridFamily& k0, double t_end,
                               double dt, const Rk4Options& opt)
{
    if (opt.horizon > 0.0 && t_end >= opt.horizon)
        warn("hierarchy run to t = " + std::to_string(t_end) + " lies beyond the horizon T = " +
             std::to_string(opt.horizon));
    const int N = op.truncation().n_max;
    const SymmetricGridFamily u0 = k0.n_max() == N ? k0 : k0.with_n_max(N);
    try {
        return rk4_integrate([&](const SymmetricGridFamily& k) { return op.apply_L_delta(k); }, u0, t_end, dt);
    } catch (const BlowUpError& e) {
        throw BlowUpError(std::string(e.what()) + " (horizon T = " + std::to_string(opt.horizon) + ")");
    }
}

}  // namespace coalab
