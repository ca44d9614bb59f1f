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
#include <functional>
#include <stdexcept>
#include <string>

namespace coalab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Invalid θ-scale, e.g. alpha_star <= alpha0.
class InvalidScaleError : public Error {
public:
    using Error::Error;
};

/// A requested evolution time lies outside the guaranteed existence horizon.
class HorizonExceededError : public Error {
public:
    using Error::Error;
};

/// Subset enumeration would exceed the configured cardinality cap.
class CombinatorialBlowupError : public Error {
public:
    using Error::Error;
};

/// Order truncation cannot honour the requested cluster cutoff.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Custom kernel has no sampler for a channel the simulator needs.
class UnsupportedSamplingError : public Error {
public:
    using Error::Error;
};

/// Quadrature of a kernel constant did not converge.
class KernelIntegrationError : public Error {
public:
    using Error::Error;
};

/// NaN or overflow during time stepping.
class BlowUpError : public Error {
public:
    using Error::Error;
};

/// Writes a warning line to stderr.
void warn(const std::string& msg);

/// Number of worker threads used by parallel_for (>= 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is processed exactly once and
/// bodies must only write to disjoint outputs, so results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace coalab
