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

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "coalab/grid.hpp"
#include "coalab/model.hpp"
#include "coalab/rng.hpp"

namespace coalab {

struct Event {
    enum class Kind { Coalesce, Jump };
    Kind kind = Kind::Jump;
    double t = 0.0;
    /// Coalesce: the merging pair x, y and the new particle z.
    /// Jump: the origin x and the target y (z empty).
    std::vector<double> x, y, z;
};

/// Rates of the current configuration.
struct TotalRates {
    /// Row-major |gamma| x |gamma| matrix of pair coalescence rates (zero diagonal).
    std::vector<double> pair_rates;
    double pair_total = 0.0;
    /// |gamma| <c2>: the thinned jump channel.
    double jump_bound_rate = 0.0;
};

TotalRates total_rates(const Configuration& gamma, const KernelSet& kernels, double sigma, double c2_int);

/// Event-driven simulator of the (sigma-regularised) jump–coalescence dynamics.
class Simulator {
public:
    enum class StepKind { Coalesce, Jump, Rejected, Horizon };

    /// c2_int < 0 means: take <c2> from kernel_constants(kernels).
    Simulator(const KernelSet& kernels, double sigma, const Configuration& init, std::uint64_t seed,
              double c2_int = -1.0);

    double time() const { return t_; }
    std::size_t size() const { return n_; }
    Configuration configuration() const;

    /// Advances to the next candidate event, or to t_max when it comes later.
    /// A rejected jump proposal advances time and changes nothing.
    StepKind step(double t_max, Event* event = nullptr);

    std::uint64_t accepted_events() const { return accepted_; }
    std::uint64_t rejected_events() const { return rejected_; }

private:
    void recompute_all();
    void set_row(std::size_t i);
    void remove(std::size_t i);
    double rate(std::size_t i, std::size_t j) const;

    KernelSet kernels_;
    double sigma_;
    double c2_int_;
    int d_;
    RngStream rng_;
    double t_ = 0.0;
    std::size_t n_ = 0;
    std::vector<double> pos_;                // stride d
    std::vector<std::vector<double>> rate_;  // symmetric pair rates
    std::vector<double> row_;                // row sums
    std::uint64_t accepted_ = 0;
    std::uint64_t rejected_ = 0;
    std::uint64_t since_refresh_ = 0;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Configuration> snapshots;
    std::vector<Event> events;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
};

/// Runs one trajectory to t_end, recording the state at each (sorted) snapshot time.
TrajectoryRecord run_trajectory(const Configuration& init, const KernelSet& kernels, double sigma, double t_end,
                                const std::vector<double>& snapshot_times, std::uint64_t seed,
                                bool log_events = false, double c2_int = -1.0);

struct PoissonInit {
    double rho = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};

struct EnsembleSpec {
    std::size_t n_traj = 100;
    double t_end = 1.0;
    std::vector<double> snapshot_times;
    std::uint64_t master_seed = 1;
    std::variant<PoissonInit, Configuration> initial = PoissonInit{};
    int d = 1;
};

/// Poisson configuration with intensity rho on [lo, hi)^d.
Configuration sample_poisson(RngStream& rng, int d, const PoissonInit& p);

struct Ensemble {
    std::vector<double> times;
    /// snapshots[s][i]: trajectory i at times[s].
    std::vector<std::vector<Configuration>> snapshots;
};

/// Trajectory i uses derive_seed(master, i, "init") for its initial state and
/// derive_seed(master, i, "traj") for its dynamics.
Ensemble run_ensemble(const EnsembleSpec& spec, const KernelSet& kernels, double sigma);

struct CorrelationEstimate {
    GridSpec bins;
    std::size_t n_traj = 0;
    std::vector<double> k1_hat, se1;
    /// Row-major M x M.
    std::vector<double> k2_hat, se2;
};

/// Factorial-moment estimates of k^(1) and k^(2) on the bin grid.
CorrelationEstimate estimate_correlations(const std::vector<Configuration>& snapshots, const GridSpec& bins);

struct CountDistribution {
    std::vector<double> pmf;
    std::vector<double> se;
    std::size_t n = 0;
};

CountDistribution count_distribution(const std::vector<Configuration>& snapshots);

/// Bin index of a point on the grid, or -1 when outside the box.
int bin_of(const GridSpec& bins, PointView p);

}  // namespace coalab
