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
#include <memory>
#include <span>
#include <vector>

#include "coalab/grid.hpp"
#include "coalab/model.hpp"

namespace coalab {

/// Closure of the hierarchy: k^(n) = 0 for n > n_max; the cluster sum in Q_y
/// is cut at |xi| <= m_cluster.
struct TruncationSpec {
    int n_max = 3;
    int m_cluster = 3;
};

/// Value of (Q_y k)(eta) and a bound on the discarded cluster tail.
struct QyResult {
    double value = 0.0;
    double remainder = 0.0;
};

/// (Q_y k)(eta) = int k(eta u xi) prod_{u in xi} (e^{-phi(y-u)} - 1) lambda(d xi),
/// summed over sorted grid tuples xi with |xi| <= m_cluster.
/// Throws TruncationError when |eta| + m_cluster > k.n_max().
QyResult apply_Qy(const SymmetricGridFamily& k, const DiscreteModel& dm, int y,
                  std::span<const int> eta, int m_cluster);

/// Bit flags selecting the six summands of L^Delta.
enum Summand : unsigned {
    kL11 = 1u << 0,
    kL12 = 1u << 1,
    kL13 = 1u << 2,
    kL14 = 1u << 3,
    kL21 = 1u << 4,
    kL22 = 1u << 5,
    kAllSummands = 0x3fu,
};

/// The generator of the correlation-function evolution and its predual on a
/// grid, sigma-regularised when sigma > 0.
class HierarchyOperator {
public:
    HierarchyOperator(const KernelSet& kernels, double sigma, const GridSpec& grid,
                      const TruncationSpec& trunc);

    const DiscreteModel& model() const { return *dm_; }
    const TruncationSpec& truncation() const { return trunc_; }
    double sigma() const { return dm_->sigma(); }

    /// L^Delta k for the selected summands. Orders of k above n_max are dropped.
    SymmetricGridFamily apply_L_delta(const SymmetricGridFamily& k,
                                      unsigned summands = kAllSummands) const;
    /// A k = -Psi k.
    SymmetricGridFamily apply_A(const SymmetricGridFamily& k) const;
    /// B k = L^Delta k - A k.
    SymmetricGridFamily apply_B(const SymmetricGridFamily& k) const;

    /// Predual L-hat G on orders 0..n_out (output order n reads orders <= n of G).
    SymmetricGridFamily apply_L_hat(const SymmetricGridFamily& G, int n_out) const;
    /// B-hat G = L-hat G + Psi G.
    SymmetricGridFamily apply_B_hat(const SymmetricGridFamily& G, int n_out) const;
    /// L-hat_2 by the literal double subset sum; slow, kept as an oracle.
    SymmetricGridFamily apply_L_hat2_literal(const SymmetricGridFamily& G, int n_out) const;

    /// Psi_sigma on every stored tuple up to n_max.
    SymmetricGridFamily psi_family(int n_max) const;

    /// Q_y k on every tuple of order <= n_max for every node y.
    std::vector<SymmetricGridFamily> qy_tables(const SymmetricGridFamily& k) const;

private:
    std::shared_ptr<const DiscreteModel> dm_;
    TruncationSpec trunc_;
};

/// Multiplies every tuple value by exp(-Psi(eta) t).
SymmetricGridFamily apply_semigroup(const SymmetricGridFamily& psi, const SymmetricGridFamily& u, double t);

using LinearMap = std::function<SymmetricGridFamily(const SymmetricGridFamily&)>;

/// Classical RK4 for du/dt = f(u) with steps of at most dt landing on t_end.
/// on_step(t, u) is called after every step. Throws BlowUpError on non-finite values.
SymmetricGridFamily rk4_integrate(const LinearMap& f, SymmetricGridFamily u0, double t_end, double dt,
                                  const std::function<void(double, const SymmetricGridFamily&)>& on_step = {});

struct Rk4Options {
    /// Horizon of the configured scale; a warning is logged when t_end >= horizon.
    double horizon = 0.0;
};

/// dk/dt = L^Delta k by RK4; k^(0) is carried unchanged.
SymmetricGridFamily rk4_evolve(const HierarchyOperator& op, const SymmetricGridFamily& k0, double t_end,
                               double dt, const Rk4Options& opt = {});

}  // namespace coalab
