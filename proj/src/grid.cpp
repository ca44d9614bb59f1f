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

#include "coalab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "coalab/common.hpp"

namespace coalab {

GridSpec GridSpec::make(int d, double a, double b, int m)
{
    if (d < 1)
        throw ConfigError("grid dimension must be >= 1");
    if (m < 2)
        throw ConfigError("grid needs m >= 2 points per axis");
    if (!(b > a))
        throw ConfigError("grid box [a, b) is empty");
    return GridSpec{d, a, b, m};
}

double GridSpec::cell_volume() const
{
    return std::pow(h(), d);
}

int GridSpec::num_nodes() const
{
    int n = 1;
    for (int i = 0; i < d; ++i)
        n *= m;
    return n;
}

double GridSpec::coord(int node, int axis) const
{
    for (int i = 0; i < axis; ++i)
        node /= m;
    return a + (node % m + 0.5) * h();
}

int GridSpec::node_of(std::span<const double> p) const
{
    int idx = 0, stride = 1;
    for (int i = 0; i < d; ++i) {
        const double f = (p[i] - a) / h();
        if (!(f >= 0.0) || f >= m)
            return -1;
        idx += std::min(static_cast<int>(f), m - 1) * stride;
        stride *= m;
    }
    return idx;
}

std::vector<double> GridSpec::point(int node) const
{
    std::vector<double> p(d);
    for (int i = 0; i < d; ++i)
        p[i] = coord(node, i);
    return p;
}

std::vector<int> GridSpec::nodes_in_box(double lo, double hi) const
{
    std::vector<int> out;
    for (int n = 0; n < num_nodes(); ++n) {
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
            const double c = coord(n, i);
            inside = c >= lo && c < hi;
        }
        if (inside)
            out.push_back(n);
    }
    return out;
}

std::shared_ptr<const MultisetIndex> MultisetIndex::get(int num_nodes, int n_max)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MultisetIndex>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{num_nodes, n_max}];
    if (!slot)
        slot = std::make_shared<const MultisetIndex>(num_nodes, n_max);
    return slot;
}

MultisetIndex::MultisetIndex(int num_nodes, int n_max) : M_(num_nodes), n_max_(n_max)
{
    if (num_nodes < 1 || n_max < 0)
        throw ConfigError("invalid multiset index dimensions");
    const int top = M_ + n_max_ + 1;
    binom_.assign(top + 1, std::vector<std::uint64_t>(n_max_ + 2, 0));
    for (int i = 0; i <= top; ++i) {
        binom_[i][0] = 1;
        for (int k = 1; k <= std::min(i, n_max_ + 1); ++k)
            binom_[i][k] = binom_[i - 1][k - 1] + (k <= i - 1 ? binom_[i - 1][k] : 0);
    }
    counts_.resize(n_max_ + 1);
    tuples_.resize(n_max_ + 1);
    weights_.resize(n_max_ + 1);
    for (int n = 0; n <= n_max_; ++n) {
        counts_[n] = n == 0 ? 1 : binom_[M_ + n - 1][n];
        tuples_[n].assign(counts_[n] * n, 0);
        weights_[n].assign(counts_[n], 1.0);
        if (n == 0)
            continue;
        std::vector<int> t(n, 0);
        for (;;) {
            const std::size_t r = rank(t);
            std::copy(t.begin(), t.end(), tuples_[n].begin() + r * n);
            double w = 1.0;
            int run = 1;
            for (int k = 1; k <= n; ++k) {
                if (k < n && t[k] == t[k - 1]) {
                    ++run;
                } else {
                    for (int f = 2; f <= run; ++f)
                        w /= f;
                    run = 1;
                }
            }
            weights_[n][r] = w;
            // next non-decreasing tuple
            int pos = n - 1;
            while (pos >= 0 && t[pos] == M_ - 1)
                --pos;
            if (pos < 0)
                break;
            ++t[pos];
            for (int k = pos + 1; k < n; ++k)
                t[k] = t[pos];
        }
    }
}

std::size_t MultisetIndex::rank(std::span<const int> sorted) const
{
    std::size_t r = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k)
        r += binom_[sorted[k] + k][k + 1];
    return r;
}

SymmetricGridFamily::SymmetricGridFamily(const GridSpec& grid, int n_max)
    : grid_(grid), n_max_(n_max), index_(MultisetIndex::get(grid.num_nodes(), n_max))
{
    vol_pow_.resize(n_max + 1);
    comp_.resize(n_max + 1);
    const double v = grid.cell_volume();
    for (int n = 0; n <= n_max; ++n) {
        vol_pow_[n] = std::pow(v, n);
        comp_[n].assign(index_->count(n), 0.0);
    }
}

double SymmetricGridFamily::at(std::span<const int> sorted) const
{
    const int n = static_cast<int>(sorted.size());
    if (n > n_max_)
        return 0.0;
    return comp_[n][index_->rank(sorted)];
}

double& SymmetricGridFamily::ref(std::span<const int> sorted)
{
    const int n = static_cast<int>(sorted.size());
    if (n > n_max_)
        throw TruncationError("order exceeds family truncation");
    return comp_[n][index_->rank(sorted)];
}

SymmetricGridFamily SymmetricGridFamily::with_n_max(int n_max) const
{
    SymmetricGridFamily out(grid_, n_max);
    for (int n = 0; n <= std::min(n_max, n_max_); ++n)
        out.comp_[n] = comp_[n];
    return out;
}

bool SymmetricGridFamily::same_shape(const SymmetricGridFamily& o) const
{
    return grid_ == o.grid_ && n_max_ == o.n_max_;
}

SymmetricGridFamily& SymmetricGridFamily::operator+=(const SymmetricGridFamily& o)
{
    axpy(1.0, o);
    return *this;
}

SymmetricGridFamily& SymmetricGridFamily::operator-=(const SymmetricGridFamily& o)
{
    axpy(-1.0, o);
    return *this;
}

SymmetricGridFamily& SymmetricGridFamily::operator*=(double s)
{
    for (auto& c : comp_)
        for (double& v : c)
            v *= s;
    return *this;
}

void SymmetricGridFamily::axpy(double s, const SymmetricGridFamily& o)
{
    if (!(grid_ == o.grid_))
        throw ConfigError("families live on different grids");
    for (int n = 0; n <= std::min(n_max_, o.n_max_); ++n) {
        auto& c = comp_[n];
        const auto& oc = o.comp_[n];
        for (std::size_t r = 0; r < c.size(); ++r)
            c[r] += s * oc[r];
    }
}

SymmetricGridFamily operator+(SymmetricGridFamily a, const SymmetricGridFamily& b)
{
    a += b;
    return a;
}

SymmetricGridFamily operator-(SymmetricGridFamily a, const SymmetricGridFamily& b)
{
    a -= b;
    return a;
}

SymmetricGridFamily operator*(double s, SymmetricGridFamily a)
{
    a *= s;
    return a;
}

void merge_sorted(std::span<const int> a, std::span<const int> b, std::vector<int>& out)
{
    out.resize(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
}

DiscreteModel::DiscreteModel(const KernelSet& kernels, double sigma, const GridSpec& grid)
    : grid_(grid), sigma_(sigma), M_(grid.num_nodes()), v_(grid.cell_volume())
{
    if (sigma < 0.0)
        throw ConfigError("sigma must be >= 0");
    if (kernels.dim() != grid.d)
        throw ConfigError("kernel and grid dimensions differ");
    const std::size_t M = M_;
    std::vector<std::vector<double>> pts(M);
    for (std::size_t i = 0; i < M; ++i)
        pts[i] = grid.point(static_cast<int>(i));
    const SigmaReg reg{sigma};
    psi_.resize(M);
    for (std::size_t i = 0; i < M; ++i)
        psi_[i] = reg.psi(pts[i]);

    c1_.resize(M * M * M);
    c1z_.assign(M * M, 0.0);
    c2_.resize(M * M);
    ephi_.resize(M * M);
    std::vector<double> r(grid.d);
    for (std::size_t x = 0; x < M; ++x) {
        for (std::size_t y = 0; y < M; ++y) {
            double acc = 0.0;
            for (std::size_t z = 0; z < M; ++z) {
                const double c = kernels.c1(pts[x], pts[y], pts[z]);
                c1_[(x * M + y) * M + z] = c;
                acc += psi_[z] * c;
            }
            c1z_[x * M + y] = v_ * acc;
            for (int k = 0; k < grid.d; ++k)
                r[k] = pts[x][k] - pts[y][k];
            c2_[x * M + y] = kernels.c2(r);
            ephi_[x * M + y] = std::exp(-kernels.phi(r));
        }
    }
}

double DiscreteModel::psi_total(std::span<const int> eta) const
{
    double s = 0.0;
    for (std::size_t a = 0; a < eta.size(); ++a)
        for (std::size_t b = a + 1; b < eta.size(); ++b)
            s += c1z(eta[a], eta[b]);
    return s;
}

}  // namespace coalab
