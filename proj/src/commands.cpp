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


#include "coalab/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "coalab/common.hpp"
#include "coalab/dyson.hpp"
#include "coalab/fokker_planck.hpp"
#include "coalab/gamma0.hpp"
#include "coalab/hierarchy.hpp"
#include "coalab/io.hpp"
#include "coalab/kmc.hpp"

namespace coalab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json manifest(const RunConfig& cfg, const std::string& command)
{
    return {{"command", command}, {"config_hash", config_hash(cfg)}, {"config", to_json(cfg)}};
}

std::string path_in(const std::string& dir, const std::string& name)
{
    return (fs::path(dir) / name).string();
}

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext = "")
{
    return stem + "_" + std::to_string(i) + ext;
}

SymmetricGridFamily initial_correlation(const RunConfig& cfg, const GridSpec& grid)
{
    return density_to_correlation(initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, cfg.n_max));
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir)
{
    const std::string hash = config_hash(cfg);
    EnsembleSpec spec;
    spec.n_traj = cfg.n_traj;
    spec.t_end = cfg.t_end;
    spec.snapshot_times = cfg.snapshots();
    spec.master_seed = cfg.master_seed;
    spec.d = cfg.d;
    if (cfg.poisson_rho) {
        spec.initial = PoissonInit{*cfg.poisson_rho, cfg.lambda_lo, cfg.lambda_hi};
    } else {
        std::vector<double> coords;
        for (const auto& p : cfg.points)
            coords.insert(coords.end(), p.begin(), p.end());
        spec.initial = Configuration(cfg.d, coords);
    }
    const Ensemble ens = run_ensemble(spec, cfg.kernels(), cfg.sigma);
    write_snapshots_csv(path_in(out_dir, "snapshots.csv"), ens, hash);

    const GridSpec bins = cfg.grid();
    json m = manifest(cfg, "simulate");
    m["snapshot_times"] = ens.times;
    m["files"] = json::array({"snapshots.csv"});
    for (std::size_t s = 0; s < ens.times.size(); ++s) {
        const CorrelationEstimate est = estimate_correlations(ens.snapshots[s], bins);
        write_k1_csv(path_in(out_dir, indexed("k1", s, ".csv")), est, hash);
        write_k2_csv(path_in(out_dir, indexed("k2", s, ".csv")), est, hash);
        const CountDistribution cd = count_distribution(ens.snapshots[s]);
        std::vector<std::vector<double>> rows;
        for (std::size_t n = 0; n < cd.pmf.size(); ++n)
            rows.push_back({static_cast<double>(n), cd.pmf[n], cd.se[n]});
        write_table_csv(path_in(out_dir, indexed("counts", s, ".csv")), {"count", "pmf", "se"}, rows, hash);
        for (const char* stem : {"k1", "k2", "counts"})
            m["files"].push_back(indexed(stem, s, ".csv"));
    }
    write_json(path_in(out_dir, "manifest.json"), m);
    return kExitOk;
}

int cmd_hierarchy(const RunConfig& cfg, const std::string& out_dir)
{
    const std::string hash = config_hash(cfg);
    const KernelSet ks = cfg.kernels();
    const KernelConstants kc = kernel_constants(ks);
    const double T = horizon(cfg.alpha_star, cfg.alpha0, kc);
    const GridSpec grid = cfg.grid();
    const HierarchyOperator op(ks, cfg.sigma, grid, cfg.truncation());
    const SymmetricGridFamily k0 = initial_correlation(cfg, grid);
    const std::vector<double> times = cfg.snapshots();

    json m = manifest(cfg, "hierarchy");
    m["horizon"] = std::isfinite(T) ? json(T) : json("inf");
    m["half_horizon"] = std::isfinite(T) ? json(T / 2) : json("inf");
    m["snapshot_times"] = times;
    m["bundles"] = json::array();

    if (cfg.method == "dyson") {
        const DysonSpec spec = cfg.dyson();
        json bounds = json::array();
        for (std::size_t s = 0; s < times.size(); ++s) {
            const DysonResult r = dyson_evolve(op, k0, spec, kc, times[s]);
            write_family_bundle(path_in(out_dir, indexed("k", s)), r.value, hash);
            m["bundles"].push_back(indexed("k", s));
            json b = json::array();
            for (int n = 0; n <= spec.n_terms; ++n)
                b.push_back(truncation_bound(n, times[s], cfg.q, T));
            bounds.push_back({{"t", times[s]}, {"term_bounds", b}});
        }
        m["dyson_bounds"] = bounds;
    } else {
        if (cfg.t_end >= T)
            warn("hierarchy run to t_end = " + format_double(cfg.t_end) + " lies beyond the horizon T = " +
                 format_double(T));
        SymmetricGridFamily k = k0;
        double t = 0.0;
        for (std::size_t s = 0; s < times.size(); ++s) {
            if (times[s] > t)
                k = rk4_evolve(op, k, times[s] - t, cfg.dt);
            t = times[s];
            write_family_bundle(path_in(out_dir, indexed("k", s)), k, hash);
            m["bundles"].push_back(indexed("k", s));
        }
    }
    write_json(path_in(out_dir, "manifest.json"), m);
    return kExitOk;
}

int cmd_fokker_planck(const RunConfig& cfg, const std::string& out_dir)
{
    const std::string hash = config_hash(cfg);
    const LocalSpec loc = cfg.local();
    loc.validate();
    const GridSpec grid = cfg.grid();
    const FokkerPlanckOperator op(cfg.kernels(), grid, loc);
    SymmetricGridFamily R = initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, loc.n_cap);
    const std::vector<double> times = cfg.snapshots();

    json m = manifest(cfg, "fokker-planck");
    m["snapshot_times"] = times;
    m["sigma_leak_fraction"] = sigma_leak_fraction(grid, loc.sigma);
    m["bundles"] = json::array();
    std::vector<std::vector<double>> rows{{0.0, lp_integral(R), 0.0}};
    {
        double mn = 0.0;
        for (int n = 0; n <= R.n_max(); ++n)
            for (double x : R.comp(n))
                mn = std::min(mn, x);
        rows[0][2] = mn;
    }
    const double mass0 = rows[0][1];
    double max_drift = 0.0, undershoot = 0.0, t = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (times[s] > t) {
            const FpRun run = integrate_fp(op, R, times[s] - t, cfg.dt);
            for (std::size_t i = 0; i < run.times.size(); ++i) {
                rows.push_back({t + run.times[i], run.mass[i], run.min_value[i]});
                max_drift = std::max(max_drift, std::abs(run.mass[i] - mass0));
            }
            undershoot = std::min(undershoot, run.min_undershoot);
            R = run.R;
        }
        t = times[s];
        write_family_bundle(path_in(out_dir, indexed("R", s)), R, hash);
        m["bundles"].push_back(indexed("R", s));
    }
    write_table_csv(path_in(out_dir, "mass.csv"), {"t", "mass", "min"}, rows, hash);
    m["max_mass_drift"] = max_drift;
    m["min_undershoot"] = undershoot;
    write_json(path_in(out_dir, "manifest.json"), m);
    return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, const std::string& out_dir)
{
    const KernelSet ks = cfg.kernels();
    const KernelConstants kc = kernel_constants(ks);
    const double T = horizon(cfg.alpha_star, cfg.alpha0, kc);
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(std::to_string(x)); };

    json j;
    j["config_hash"] = config_hash(cfg);
    j["config"] = to_json(cfg);
    j["constants"] = {{"c1_int", kc.c1_int},       {"c1_max", kc.c1_max},   {"c2_int", kc.c2_int},
                      {"phi_int", kc.phi_int},     {"phi_sup", kc.phi_sup}, {"c1_int_13", kc.c1_int_13},
                      {"c1_int_23", kc.c1_int_23}};
    json table = json::array();
    for (int i = 0; i <= 10; ++i) {
        const double th = cfg.alpha0 + (cfg.alpha_star - cfg.alpha0) * i / 10.0;
        table.push_back({{"theta", th}, {"beta", beta(th, kc)}});
    }
    j["beta"] = table;
    j["horizon"] = num(T);
    j["half_horizon"] = num(T / 2);

    const double t = cfg.t_end;
    const BoundSeries bs = bound_series(t, cfg.q, T, 12);
    json terms = json::array();
    for (int n = 0; n <= cfg.n_terms; ++n)
        terms.push_back(truncation_bound(n, t, cfg.q, T));
    j["dyson"] = {{"t", t},
                  {"q", cfg.q},
                  {"term_bounds", terms},
                  {"pi_bound", num(pi_bound(ScaleParams::make(cfg.alpha0, cfg.alpha_star, cfg.q, std::max(cfg.n_terms, 1)), kc))},
                  {"partial_sums", bs.partial_sums},
                  {"ratio", num(bs.ratio)},
                  {"converges", bs.converges},
                  {"within_horizon", cfg.q * t < T}};

    const GridSpec grid = cfg.grid();
    const HierarchyOperator op(ks, cfg.sigma, grid, cfg.truncation());
    const OperatorBoundCheck ob = verify_operator_bounds(op, initial_correlation(cfg, grid), cfg.alpha0,
                                                         cfg.alpha_star, kc);
    j["operator_bounds"] = {{"theta", cfg.alpha0}, {"theta_prime", cfg.alpha_star},
                            {"a_lhs", ob.a_lhs},   {"a_rhs", ob.a_rhs},
                            {"a_ok", ob.a_ok},     {"b_lhs", ob.b_lhs},
                            {"b_rhs", ob.b_rhs},   {"b_ok", ob.b_ok}};
    write_json(path_in(out_dir, "bounds.json"), j);
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, const std::string& out_dir, const ValidationOptions& opt)
{
    const ValidationReport rep = run_validation(cfg, opt);
    write_json(path_in(out_dir, "report.json"), rep.to_json());
    for (const auto& c : rep.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  residual=" << format_double(c.residual) << ' '
                  << c.comparison << ' ' << format_double(c.tolerance) << "  (" << c.wall_time << " s)\n";
    return rep.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace coalab
