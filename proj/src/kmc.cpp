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

#include "coalab/kmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coalab/common.hpp"

namespace coalab {

namespace {

constexpr std::uint64_t kRefreshEvery = 256;

double psi_at(double sigma, const double* y, int d)
{
    double r2 = 0.0;
    for (int i = 0; i < d; ++i)
        r2 += y[i] * y[i];
    return std::exp(-sigma * r2);
}

}  // namespace

TotalRates total_rates(const Configuration& gamma, const KernelSet& kernels, double sigma, double c2_int)
{
    const std::size_t n = gamma.size();
    TotalRates r;
    r.pair_rates.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = kernels.pair_rate(gamma.point(i), gamma.point(j), sigma);
            r.pair_rates[i * n + j] = v;
            r.pair_rates[j * n + i] = v;
            r.pair_total += v;
        }
    r.jump_bound_rate = static_cast<double>(n) * c2_int;
    return r;
}

Simulator::Simulator(const KernelSet& kernels, double sigma, const Configuration& init, std::uint64_t seed,
                     double c2_int)
    : kernels_(kernels), sigma_(sigma), d_(kernels.dim()), rng_(seed)
{
    if (sigma < 0.0)
        throw ConfigError("sigma must be >= 0");
    if (init.size() > 0 && init.dim() != d_)
        throw ConfigError("initial configuration dimension does not match kernels");
    c2_int_ = c2_int >= 0.0 ? c2_int : kernel_constants(kernels).c2_int;
    n_ = init.size();
    pos_ = init.coords();
    recompute_all();
}

Configuration Simulator::configuration() const
{
    return Configuration(d_, pos_);
}

double Simulator::rate(std::size_t i, std::size_t j) const
{
    const PointView x(pos_.data() + i * d_, d_), y(pos_.data() + j * d_, d_);
    return kernels_.pair_rate(x, y, sigma_);
}

void Simulator::recompute_all()
{
    rate_.assign(n_, std::vector<double>(n_, 0.0));
    row_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = rate(i, j);
            rate_[i][j] = rate_[j][i] = v;
        }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            row_[i] += rate_[i][j];
    since_refresh_ = 0;
}

void Simulator::set_row(std::size_t i)
{
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (j == i)
            continue;
        const double v = rate(i, j);
        row_[j] += v - rate_[j][i];
        rate_[i][j] = rate_[j][i] = v;
        s += v;
    }
    row_[i] = s;
}

void Simulator::remove(std::size_t i)
{
    for (std::size_t j = 0; j < n_; ++j)
        row_[j] -= rate_[j][i];
    const std::size_t last = n_ - 1;
    if (i != last) {
        std::copy_n(pos_.begin() + last * d_, d_, pos_.begin() + i * d_);
        std::swap(rate_[i], rate_[last]);
        for (auto& r : rate_)
            std::swap(r[i], r[last]);
        row_[i] = row_[last];
    }
    pos_.resize(last * d_);
    rate_.pop_back();
    for (auto& r : rate_)
        r.pop_back();
    row_.pop_back();
    --n_;
}

Simulator::StepKind Simulator::step(double t_max, Event* event)
{
    double pair_total = 0.0;
    for (double s : row_)
        pair_total += s;
    pair_total *= 0.5;
    const double jump_total = static_cast<double>(n_) * c2_int_;
    const double total = pair_total + jump_total;
    if (!(total > 0.0)) {
        t_ = t_max;
        return StepKind::Horizon;
    }
    const double t_next = t_ + rng_.exponential(total);
    if (t_next > t_max) {
        t_ = t_max;
        return StepKind::Horizon;
    }
    t_ = t_next;

    const double u = rng_.uniform() * total;
    if (u < pair_total) {
        // i with probability S_i / (2P), then j with probability r_ij / S_i
        double target = rng_.uniform() * 2.0 * pair_total, acc = 0.0;
        std::size_t i = 0;
        for (; i + 1 < n_; ++i) {
            acc += row_[i];
            if (target < acc)
                break;
        }
        while (row_[i] <= 0.0 && i > 0)
            --i;
        target = rng_.uniform() * row_[i];
        acc = 0.0;
        std::size_t j = 0, last_pos = 0;
        for (; j < n_; ++j) {
            if (j == i || rate_[i][j] <= 0.0)
                continue;
            last_pos = j;
            acc += rate_[i][j];
            if (target < acc)
                break;
        }
        if (j == n_)
            j = last_pos;

        std::vector<double> x(pos_.begin() + i * d_, pos_.begin() + (i + 1) * d_);
        std::vector<double> y(pos_.begin() + j * d_, pos_.begin() + (j + 1) * d_);
        std::vector<double> z(d_);
        kernels_.sample_coalescence(rng_, x, y, sigma_, z);
        remove(std::max(i, j));
        remove(std::min(i, j));
        pos_.insert(pos_.end(), z.begin(), z.end());
        ++n_;
        for (auto& r : rate_)
            r.push_back(0.0);
        rate_.emplace_back(n_, 0.0);
        row_.push_back(0.0);
        set_row(n_ - 1);
        ++accepted_;
        if (++since_refresh_ >= kRefreshEvery)
            recompute_all();
        if (event)
            *event = Event{Event::Kind::Coalesce, t_, std::move(x), std::move(y), std::move(z)};
        return StepKind::Coalesce;
    }

    const std::size_t i = rng_.below(n_);
    std::vector<double> r(d_), y(d_);
    kernels_.sample_jump(rng_, r);
    for (int a = 0; a < d_; ++a)
        y[a] = pos_[i * d_ + a] - r[a];
    double accept = psi_at(sigma_, y.data(), d_);
    std::vector<double> diff(d_);
    for (std::size_t j = 0; j < n_ && accept > 0.0; ++j) {
        if (j == i)
            continue;
        for (int a = 0; a < d_; ++a)
            diff[a] = y[a] - pos_[j * d_ + a];
        accept *= std::exp(-kernels_.phi(diff));
    }
    if (!(accept >= 0.0 && accept <= 1.0 + 1e-12))
        throw std::logic_error("jump acceptance probability outside [0, 1]");
    if (rng_.uniform() >= accept) {
        ++rejected_;
        return StepKind::Rejected;
    }
    std::vector<double> x(pos_.begin() + i * d_, pos_.begin() + (i + 1) * d_);
    std::copy(y.begin(), y.end(), pos_.begin() + i * d_);
    set_row(i);
    ++accepted_;
    if (++since_refresh_ >= kRefreshEvery)
        recompute_all();
    if (event)
        *event = Event{Event::Kind::Jump, t_, std::move(x), std::move(y), {}};
    return StepKind::Jump;
}

TrajectoryRecord run_trajectory(const Configuration& init, const KernelSet& kernels, double sigma, double t_end,
                                const std::vector<double>& snapshot_times, std::uint64_t seed, bool log_events,
                                double c2_int)
{
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
        throw ConfigError("snapshot times must be sorted");
    if (!snapshot_times.empty() && snapshot_times.back() > t_end)
        throw ConfigError("snapshot times must not exceed t_end");
    Simulator sim(kernels, sigma, init, seed, c2_int);
    TrajectoryRecord rec;
    std::size_t next = 0;
    Event ev;
    for (;;) {
        const double horizon = next < snapshot_times.size() ? snapshot_times[next] : t_end;
        const auto kind = sim.step(horizon, log_events ? &ev : nullptr);
        if (kind == Simulator::StepKind::Horizon) {
            if (next < snapshot_times.size()) {
                rec.times.push_back(snapshot_times[next]);
                rec.snapshots.push_back(sim.configuration());
                ++next;
                continue;
            }
            break;
        }
        if (log_events && (kind == Simulator::StepKind::Coalesce || kind == Simulator::StepKind::Jump))
            rec.events.push_back(ev);
    }
    rec.accepted = sim.accepted_events();
    rec.rejected = sim.rejected_events();
    return rec;
}

Configuration sample_poisson(RngStream& rng, int d, const PoissonInit& p)
{
    if (p.rho < 0.0 || !(p.hi > p.lo))
        throw ConfigError("invalid Poisson initial law");
    const double vol = std::pow(p.hi - p.lo, d);
    const std::uint64_t n = rng.poisson(p.rho * vol);
    std::vector<double> c(n * d);
    for (auto& x : c)
        x = rng.uniform(p.lo, p.hi);
    return Configuration(d, std::move(c));
}

Ensemble run_ensemble(const EnsembleSpec& spec, const KernelSet& kernels, double sigma)
{
    Ensemble ens;
    ens.times = spec.snapshot_times;
    ens.snapshots.assign(ens.times.size(), std::vector<Configuration>(spec.n_traj));
    const double c2_int = kernel_constants(kernels).c2_int;
    parallel_for(spec.n_traj, [&](std::size_t i) {
        Configuration init;
        if (const auto* p = std::get_if<PoissonInit>(&spec.initial)) {
            RngStream rng(derive_seed(spec.master_seed, i, "init"));
            init = sample_poisson(rng, spec.d, *p);
        } else {
            init = std::get<Configuration>(spec.initial);
        }
        auto rec = run_trajectory(init, kernels, sigma, spec.t_end, spec.snapshot_times,
                                  derive_seed(spec.master_seed, i, "traj"), false, c2_int);
        for (std::size_t s = 0; s < rec.snapshots.size(); ++s)
            ens.snapshots[s][i] = std::move(rec.snapshots[s]);
    });
    return ens;
}

int bin_of(const GridSpec& bins, PointView p)
{
    return bins.node_of(p);
}

CorrelationEstimate estimate_correlations(const std::vector<Configuration>& snapshots, const GridSpec& bins)
{
    const int M = bins.num_nodes();
    const double v = bins.cell_volume();
    CorrelationEstimate est;
    est.bins = bins;
    est.n_traj = snapshots.size();
    est.k1_hat.assign(M, 0.0);
    est.se1.assign(M, 0.0);
    est.k2_hat.assign(static_cast<std::size_t>(M) * M, 0.0);
    est.se2.assign(static_cast<std::size_t>(M) * M, 0.0);
    const std::size_t n = snapshots.size();
    if (n == 0)
        return est;

    std::vector<double> s1(M, 0.0), q1(M, 0.0), s2(M * M, 0.0), q2(M * M, 0.0);
    std::vector<double> cnt(M);
    for (const auto& g : snapshots) {
        std::fill(cnt.begin(), cnt.end(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int b = bin_of(bins, g.point(i));
            if (b >= 0)
                cnt[b] += 1.0;
        }
        for (int b = 0; b < M; ++b) {
            s1[b] += cnt[b];
            q1[b] += cnt[b] * cnt[b];
            for (int c = 0; c < M; ++c) {
                const double p = b == c ? cnt[b] * (cnt[b] - 1.0) : cnt[b] * cnt[c];
                s2[b * M + c] += p;
                q2[b * M + c] += p * p;
            }
        }
    }
    const double dn = static_cast<double>(n);
    auto se = [&](double s, double q) {
        if (n < 2)
            return 0.0;
        const double mean = s / dn;
        const double var = std::max(0.0, (q - dn * mean * mean) / (dn - 1.0));
        return std::sqrt(var / dn);
    };
    for (int b = 0; b < M; ++b) {
        est.k1_hat[b] = s1[b] / dn / v;
        est.se1[b] = se(s1[b], q1[b]) / v;
        for (int c = 0; c < M; ++c) {
            est.k2_hat[b * M + c] = s2[b * M + c] / dn / (v * v);
            est.se2[b * M + c] = se(s2[b * M + c], q2[b * M + c]) / (v * v);
        }
    }
    return est;
}

CountDistribution count_distribution(const std::vector<Configuration>& snapshots)
{
    CountDistribution cd;
    cd.n = snapshots.size();
    if (cd.n == 0)
        return cd;
    std::size_t max_n = 0;
    for (const auto& g : snapshots)
        max_n = std::max(max_n, g.size());
    std::vector<double> counts(max_n + 1, 0.0);
    for (const auto& g : snapshots)
        counts[g.size()] += 1.0;
    const double dn = static_cast<double>(cd.n);
    for (double c : counts) {
        const double p = c / dn;
        cd.pmf.push_back(p);
        cd.se.push_back(std::sqrt(p * (1.0 - p) / dn));
    }
    return cd;
}

}  // namespace coalab
