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


// End-to-end acceptance run on the standard configuration. Every criterion
// prints one PASS/FAIL line; the exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "coalab/common.hpp"
#include "coalab/config.hpp"
#include "coalab/io.hpp"
#include "coalab/model.hpp"
#include "coalab/validation.hpp"

using namespace coalab;

namespace {

/// A check result that must satisfy `residual cmp tol`. An empty tol defers
/// to the tolerance computed by the check itself (the Dyson tail bound).
struct Requirement {
    std::string check;
    std::optional<double> tol;
    std::string cmp = "<=";
};

struct Criterion {
    int id;
    std::string title;
    std::vector<Requirement> reqs;
    std::function<std::vector<CheckResult>()> run;
    double time_limit = 0.0;  // seconds, 0 = none
    /// Extra conditions on the results; returns an empty string when satisfied.
    std::function<std::string(const std::vector<CheckResult>&)> extra = {};
};

const CheckResult* find(const std::vector<CheckResult>& rs, const std::string& name)
{
    for (const auto& r : rs)
        if (r.name == name)
            return &r;
    return nullptr;
}

bool compare(double res, const std::string& cmp, double tol)
{
    if (cmp == "<")
        return res < tol;
    if (cmp == ">")
        return res > tol;
    return res <= tol;
}

bool run_criterion(const Criterion& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckResult> rs;
    std::string error;
    try {
        rs = c.run();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = error.empty();
    std::string parts;
    for (const auto& q : c.reqs) {
        const CheckResult* r = find(rs, q.check);
        if (!r) {
            ok = false;
            parts += fmt::format(" {}=missing;", q.check);
            continue;
        }
        const double tol = q.tol.value_or(r->tolerance);
        const bool pass = r->passed && compare(r->residual, q.cmp, tol);
        ok = ok && pass;
        parts += fmt::format(" {}={} {} {}{};", q.check, format_double(r->residual), q.cmp, format_double(tol),
                             pass ? "" : " (fail)");
    }
    if (ok && c.extra) {
        const std::string why = c.extra(rs);
        if (!why.empty()) {
            ok = false;
            parts += " " + why + ";";
        }
    }
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
        ok = false;
        parts += fmt::format(" runtime {:.1f} s exceeds {:.0f} s;", secs, c.time_limit);
    }
    if (!error.empty())
        parts += " error: " + error;
    fmt::print("{} {:2d} {:<34}{} ({:.2f} s)\n", ok ? "PASS" : "FAIL", c.id, c.title, parts, secs);
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::string path = argc > 1 ? argv[1] : std::string(COALAB_SOURCE_DIR) + "/configs/standard.json";
    RunConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const std::exception& e) {
        std::cerr << "cannot load " << path << ": " << e.what() << '\n';
        return 2;
    }
    set_thread_count(0);

    const double T = horizon(cfg.alpha_star, cfg.alpha0, kernel_constants(cfg.kernels()));
    fmt::print("config {} hash {} horizon T = {}\n", path, config_hash(cfg), format_double(T));

    using V = std::vector<CheckResult>;
    const std::vector<Criterion> criteria = {
        {1, "Minlos identities", {{"minlos1", 1e-10}, {"minlos2", 1e-10}}, [&] { return check_minlos(cfg); }, 10.0},
        {2, "Generator duality", {{"duality", 1e-10}}, [&] { return V{check_duality(cfg)}; }, 30.0},
        {3, "Fokker-Planck adjointness, mass",
         {{"adjointness", 1e-10}, {"mass", 1e-6}},
         [&] {
             RunConfig c = cfg;
             c.validation.fp_dt = 1e-3;
             V out{check_adjointness(c)};
             for (auto& r : check_mass_positivity(c, 0.5))
                 out.push_back(r);
             return out;
         },
         120.0},
        {4, "Hierarchy vs density consistency", {{"consistency", 1e-3}},
         [&] { return V{check_consistency(cfg, 0.1)}; }, 300.0},
        {5, "KMC vs Fokker-Planck counts", {{"kmc_fp", 3.0}},
         [&] {
             RunConfig c = cfg;
             c.validation.kmc_trajectories = 10000;
             return V{check_kmc_fp(c, 0.5)};
         },
         300.0},
        {6, "KMC law checks",
         {{"kmc_jump_displacement", 0.01, ">"}, {"kmc_coalescence_time", 3.0}},
         [&] {
             RunConfig c = cfg;
             c.validation.kmc_law_events = 100000;
             c.validation.kmc_trajectories = 10000;
             return check_kmc_laws(c);
         }},
        {7, "Dyson machinery at T/4",
         {{"dyson_zero_term", 1e-14}, {"dyson_bound", 1.0}, {"dyson_rk4", std::nullopt}},
         [&] {
             RunConfig c = cfg;
             c.t_end = 0.25 * T;
             c.snapshot_times.clear();
             c.n_terms = 3;
             return check_dyson(c);
         }},
        {8, "Positivity cone", {{"positivity_cone", 1e-8}},
         [&] {
             RunConfig c = cfg;
             c.validation.cone_samples = 100;
             return V{check_positivity_cone(c)};
         },
         0.0,
         [&](const V&) {
             const double t = half_horizon_time(cfg);
             return t < 0.5 * T ? std::string() : fmt::format("t = {} is not below T/2", t);
         }},
        {9, "Sigma to zero limit", {{"sigma_limit", 1e-2}},
         [&] {
             RunConfig c = cfg;
             c.validation.sigma_values = {1.0, 0.3, 0.1, 0.03};
             return V{check_sigma_limit(c)};
         },
         0.0,
         [](const V& rs) {
             const double ratio = find(rs, "sigma_limit")->details.value("worst_gap_ratio", 1.0);
             return ratio < 1.0 ? std::string() : fmt::format("gaps not strictly decreasing (ratio {})", ratio);
         }},
        {10, "Finite volume and cap limit", {{"lambda_n_limit", 1.0, "<"}},
         [&] { return V{check_lambda_n_limit(cfg)}; }},
        {11, "Analytic fixed point", {{"fixed_point", 1e-10}}, [&] { return V{check_fixed_point(cfg)}; }},
        {12, "Kernel constants", {{"kernel_constants", 1e-8}}, [&] { return V{check_kernel_constants(cfg)}; }},
    };

    int failed = 0;
    for (const auto& c : criteria)
        failed += !run_criterion(c);
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
