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
#include <utility>
#include <vector>

namespace coalab {

/// One-sample Kolmogorov–Smirnov statistic sup |F_n - F| (samples are copied and sorted).
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic p-value of the KS statistic with Stephens' small-sample correction.
double ks_pvalue(double D, std::size_t n);

/// Sample mean and its standard error.
std::pair<double, double> mean_and_se(const std::vector<double>& x);

}  // namespace coalab
