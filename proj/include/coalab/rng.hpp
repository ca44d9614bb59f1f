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
#include <random>
#include <string_view>

namespace coalab {

/// SplitMix64 finaliser; used to derive statistically independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a(std::string_view s);

/// Seed for stream `index` of family `name` under `master`.
///
/// seed = splitmix64(splitmix64(master ^ fnv1a(name)) + (index + 1) * 0x9E3779B97F4A7C15)
///
/// The rule only depends on its three arguments, so per-trajectory streams are
/// identical regardless of how trajectories are scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view name = "traj");

/// A named, reproducible random stream.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard); the variate transforms below are implemented here rather than
/// taken from <random> distributions, whose algorithms are unspecified and
/// differ between standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double exponential(double rate);
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    std::uint64_t poisson(double mean);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace coalab
