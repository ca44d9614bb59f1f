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

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "coalab/common.hpp"

namespace coalab {

namespace {
std::atomic<int> g_threads{1};
thread_local bool t_in_parallel = false;
}

void warn(const std::string& msg)
{
    std::cerr << "coalab: warning: " << msg << '\n';
}

void set_thread_count(int n)
{
    if (n <= 0)
        n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    g_threads.store(n);
}

int thread_count()
{
    return g_threads.load();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const int t = static_cast<int>(std::min<std::size_t>(thread_count(), n));
    if (t <= 1 || n < 64 || t_in_parallel) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    const std::size_t chunk = std::max<std::size_t>(1, n / (8 * static_cast<std::size_t>(t)));
    auto work = [&] {
        const bool outer = t_in_parallel;
        t_in_parallel = true;
        try {
            for (;;) {
                const std::size_t lo = next.fetch_add(chunk);
                if (lo >= n)
                    break;
                const std::size_t hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err)
                err = std::current_exception();
            next.store(n);
        }
        t_in_parallel = outer;
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < t; ++i)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

}  // namespace coalab
