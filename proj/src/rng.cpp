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

#include "coalab/rng.hpp"

#include <cmath>

namespace coalab {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view name)
{
    const std::uint64_t base = splitmix64(master ^ fnv1a(name));
    return splitmix64(base + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double RngStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate)
{
    return -std::log(uniform_pos()) / rate;
}

double RngStream::normal()
{
    // Marsaglia polar method.
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::uint64_t RngStream::poisson(double mean)
{
    if (mean <= 0.0)
        return 0;
    // Split large means into chunks so exp(-chunk) never underflows.
    std::uint64_t total = 0;
    while (mean > 0.0) {
        const double chunk = mean > 30.0 ? 30.0 : mean;
        mean -= chunk;
        const double limit = std::exp(-chunk);
        double p = uniform_pos();
        std::uint64_t k = 0;
        while (p > limit) {
            p *= uniform_pos();
            ++k;
        }
        total += k;
    }
    return total;
}

std::uint64_t RngStream::below(std::uint64_t n)
{
    // Lemire-style rejection to avoid modulo bias.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold)
            return r % n;
    }
}

}  // namespace coalab
