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

#include "coalab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace coalab {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_pvalue(double D, std::size_t n)
{
    if (n == 0)
        return 1.0;
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * D;
    if (lambda < 0.2)
        return 1.0;
    // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17 * std::abs(sum))
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::pair<double, double> mean_and_se(const std::vector<double>& x)
{
    const std::size_t n = x.size();
    if (n == 0)
        return {0.0, 0.0};
    double s = 0.0;
    for (double v : x)
        s += v;
    const double mean = s / n;
    if (n < 2)
        return {mean, 0.0};
    double q = 0.0;
    for (double v : x)
        q += (v - mean) * (v - mean);
    return {mean, std::sqrt(q / (n - 1) / n)};
}

}  // namespace coalab
