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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coalab/model.hpp"

namespace coalab {

/// Tensor grid on the box [a, b)^d with m cell-midpoint nodes per axis.
struct GridSpec {
    int d = 1;
    double a = 0.0;
    double b = 1.0;
    int m = 2;

    static GridSpec make(int d, double a, double b, int m);

    double h() const { return (b - a) / m; }
    /// h^d, the weight of one node in every grid integral.
    double cell_volume() const;
    int num_nodes() const;
    double coord(int node, int axis) const;
    std::vector<double> point(int node) const;
    /// Node of the cell containing p, or -1 outside [a, b)^d.
    int node_of(std::span<const double> p) const;
    /// Nodes whose midpoint lies in [lo, hi)^d.
    std::vector<int> nodes_in_box(double lo, double hi) const;

    bool operator==(const GridSpec&) const = default;
};

/// A configuration on the grid: a multiset of node indices, kept sorted.
/// Sub-configurations are taken over positions, so a multiset of size n has
/// exactly 2^n of them even when nodes repeat.
using GridConfig = std::vector<int>;

/// Canonical ranking of sorted tuples (multisets) of size n over M nodes.
///
/// A multiset i_1 <= ... <= i_n maps to the strictly increasing j_k = i_k + k - 1,
/// ranked in the combinatorial number system: rank = sum_k C(j_k, k).
class MultisetIndex {
public:
    static std::shared_ptr<const MultisetIndex> get(int num_nodes, int n_max);

    MultisetIndex(int num_nodes, int n_max);

    int num_nodes() const { return M_; }
    int n_max() const { return n_max_; }
    std::size_t count(int n) const { return counts_[n]; }
    std::size_t rank(std::span<const int> sorted) const;
    std::span<const int> tuple(int n, std::size_t r) const
    {
        return {tuples_[n].data() + r * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
    /// 1 / prod_j mult_j!, the ratio between the sorted and ordered-tuple sums.
    double inv_mult_factorial(int n, std::size_t r) const { return weights_[n][r]; }

private:
    int M_;
    int n_max_;
    std::vector<std::vector<std::uint64_t>> binom_;
    std::vector<std::size_t> counts_;
    std::vector<std::vector<int>> tuples_;
    std::vector<std::vector<double>> weights_;
};

/// A function on the truncated discrete configuration space: one symmetric
/// component per order n = 0..n_max, stored on sorted tuples only.
/// Used for correlation vectors k, quasi-observables G and densities R.
class SymmetricGridFamily {
public:
    SymmetricGridFamily() = default;
    SymmetricGridFamily(const GridSpec& grid, int n_max);

    const GridSpec& grid() const { return grid_; }
    int n_max() const { return n_max_; }
    const MultisetIndex& index() const { return *index_; }
    std::size_t size(int n) const { return comp_[n].size(); }
    std::span<const int> tuple(int n, std::size_t r) const { return index_->tuple(n, r); }
    /// Lebesgue–Poisson weight of one sorted tuple: h^{dn} / prod mult!.
    double lp_weight(int n, std::size_t r) const { return vol_pow_[n] * index_->inv_mult_factorial(n, r); }

    std::vector<double>& comp(int n) { return comp_[n]; }
    const std::vector<double>& comp(int n) const { return comp_[n]; }

    /// Value at a sorted tuple; zero beyond n_max.
    double at(std::span<const int> sorted) const;
    double& ref(std::span<const int> sorted);

    /// Same grid, orders 0..n_max copied or zero-padded.
    SymmetricGridFamily with_n_max(int n_max) const;

    SymmetricGridFamily& operator+=(const SymmetricGridFamily& o);
    SymmetricGridFamily& operator-=(const SymmetricGridFamily& o);
    SymmetricGridFamily& operator*=(double s);
    /// this += s * o
    void axpy(double s, const SymmetricGridFamily& o);

    bool same_shape(const SymmetricGridFamily& o) const;

private:
    GridSpec grid_;
    int n_max_ = 0;
    std::shared_ptr<const MultisetIndex> index_;
    std::vector<double> vol_pow_;
    std::vector<std::vector<double>> comp_;
};

SymmetricGridFamily operator+(SymmetricGridFamily a, const SymmetricGridFamily& b);
SymmetricGridFamily operator-(SymmetricGridFamily a, const SymmetricGridFamily& b);
SymmetricGridFamily operator*(double s, SymmetricGridFamily a);

/// Merges two sorted tuples into `out` (resized).
void merge_sorted(std::span<const int> a, std::span<const int> b, std::vector<int>& out);

/// Kernel tables of the model restricted to the grid measure h^d sum_nodes.
/// Every integral in the discrete operators is a sum against these tables.
class DiscreteModel {
public:
    DiscreteModel(const KernelSet& kernels, double sigma, const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    double sigma() const { return sigma_; }
    int M() const { return M_; }
    double v() const { return v_; }

    double psi(int z) const { return psi_[z]; }
    double c1(int x, int y, int z) const { return c1_[(static_cast<std::size_t>(x) * M_ + y) * M_ + z]; }
    /// h^d sum_z psi(z) c1(x, y; z)
    double c1z(int x, int y) const { return c1z_[static_cast<std::size_t>(x) * M_ + y]; }
    /// c2(x_x - x_y)
    double c2(int x, int y) const { return c2_[static_cast<std::size_t>(x) * M_ + y]; }
    /// exp(-phi(x_y - x_u))
    double ephi(int y, int u) const { return ephi_[static_cast<std::size_t>(y) * M_ + u]; }

    /// Psi_sigma on a grid configuration (pair sum of c1z).
    double psi_total(std::span<const int> eta) const;

private:
    GridSpec grid_;
    double sigma_;
    int M_;
    double v_;
    std::vector<double> psi_, c1_, c1z_, c2_, ephi_;
};

}  // namespace coalab
