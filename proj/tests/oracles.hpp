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


// Independent reference computations shared by the unit tests.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "coalab/grid.hpp"
#include "coalab/rng.hpp"

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double gauss1(double r, double s)
{
    return std::exp(-r * r / (2 * s * s)) / std::sqrt(2 * std::numbers::pi * s * s);
}

/// Calls f on every ordered tuple of length n over M nodes.
inline void for_each_ordered(int M, int n, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> t(static_cast<std::size_t>(n), 0);
    if (n == 0) {
        f(t);
        return;
    }
    while (true) {
        f(t);
        int i = n - 1;
        while (i >= 0 && ++t[static_cast<std::size_t>(i)] == M)
            t[static_cast<std::size_t>(i--)] = 0;
        if (i < 0)
            return;
    }
}

/// Lebesgue–Poisson integral by ordered tuples: sum_n v^n / n! sum_{ordered} g.
inline double lp_ordered(const coalab::GridSpec& grid, int n_max,
                         const std::function<double(std::vector<int>)>& g)
{
    const double v = grid.cell_volume();
    double total = 0.0, fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0)
            fact *= n;
        double s = 0.0;
        for_each_ordered(grid.num_nodes(), n, [&](const std::vector<int>& t) { s += g(t); });
        total += std::pow(v, n) / fact * s;
    }
    return total;
}

inline std::vector<int> sorted(std::vector<int> t)
{
    std::sort(t.begin(), t.end());
    return t;
}

inline coalab::SymmetricGridFamily random_family(const coalab::GridSpec& g, int n_max, std::uint64_t seed,
                                                 double lo = -1.0, double hi = 1.0)
{
    coalab::RngStream rng(seed);
    coalab::SymmetricGridFamily u(g, n_max);
    for (int n = 0; n <= n_max; ++n)
        for (double& x : u.comp(n))
            x = rng.uniform(lo, hi);
    return u;
}

inline double max_abs_diff(const coalab::SymmetricGridFamily& a, const coalab::SymmetricGridFamily& b)
{
    double m = 0.0;
    for (int n = 0; n <= std::min(a.n_max(), b.n_max()); ++n)
        for (std::size_t r = 0; r < a.size(n); ++r)
            m = std::max(m, std::abs(a.comp(n)[r] - b.comp(n)[r]));
    return m;
}

}  // namespace oracle
