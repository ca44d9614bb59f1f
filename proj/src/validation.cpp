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


#include "coalab/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>

#include "coalab/common.hpp"
#include "coalab/dyson.hpp"
#include "coalab/fokker_planck.hpp"
#include "coalab/gamma0.hpp"
#include "coalab/hierarchy.hpp"
#include "coalab/io.hpp"
#include "coalab/kmc.hpp"
#include "coalab/rng.hpp"
#include "coalab/stats.hpp"

namespace coalab {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckResult finish(std::string name, double residual, double tolerance, json details, Clock::time_point t0,
                   bool extra_ok = true, std::string comparison = "<=")
{
    CheckResult r;
    r.name = std::move(name);
    r.residual = residual;
    r.tolerance = tolerance;
    r.comparison = std::move(comparison);
    bool ok = false;
    if (r.comparison == "<=")
        ok = residual <= tolerance;
    else if (r.comparison == "<")
        ok = residual < tolerance;
    else
        ok = residual > tolerance;
    r.passed = ok && extra_ok;
    r.wall_time = seconds_since(t0);
    r.details = std::move(details);
    return r;
}

CheckResult failed(std::string name, const std::string& why, Clock::time_point t0)
{
    CheckResult r;
    r.name = std::move(name);
    r.residual = std::numeric_limits<double>::infinity();
    r.passed = false;
    r.wall_time = seconds_since(t0);
    r.details = {{"error", why}};
    return r;
}

double rel_gap(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

double sup_norm(const SymmetricGridFamily& u)
{
    double m = 0.0;
    for (int n = 0; n <= u.n_max(); ++n)
        for (double x : u.comp(n))
            m = std::max(m, std::abs(x));
    return m;
}

SymmetricGridFamily random_family(const GridSpec& grid, int n_max, RngStream& rng, double lo, double hi)
{
    SymmetricGridFamily u(grid, n_max);
    for (int n = 0; n <= n_max; ++n)
        for (double& x : u.comp(n))
            x = rng.uniform(lo, hi);
    return u;
}

// Deterministic pseudo-random function of (x, y, eta) with values in [-1, 1).
double hash_unit(std::uint64_t seed, int x, int y, std::span<const int> eta)
{
    std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(x + 1) * 0x9E3779B97F4A7C15ull));
    h = splitmix64(h ^ static_cast<std::uint64_t>(y + 2));
    for (int e : eta)
        h = splitmix64(h + static_cast<std::uint64_t>(e) + 3);
    return static_cast<double>(h >> 11) * 0x1p-52 - 1.0;
}

// Fokker–Planck runs need sigma > 0; configs with sigma = 0 borrow sigma = 1.
double local_sigma(const RunConfig& cfg)
{
    return cfg.sigma > 0.0 ? cfg.sigma : 1.0;
}

LocalSpec local_of(const RunConfig& cfg)
{
    LocalSpec loc = cfg.local();
    loc.sigma = local_sigma(cfg);
    return loc;
}

// Gaps must shrink strictly, unless every gap is at rounding level.
double worst_ratio(const std::vector<double>& gaps, double scale)
{
    const double floor = 1e-14 * std::max(1.0, std::abs(scale));
    double worst = 0.0;
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i - 1] <= floor && gaps[i] <= floor)
            continue;
        worst = std::max(worst, gaps[i - 1] > 0.0 ? gaps[i] / gaps[i - 1] : std::numeric_limits<double>::infinity());
    }
    return worst;
}

std::vector<double> box_points(const RunConfig& cfg, double frac)
{
    return std::vector<double>(static_cast<std::size_t>(cfg.d), cfg.lambda_lo + frac * (cfg.lambda_hi - cfg.lambda_lo));
}

}  // namespace

json CheckResult::to_json() const
{
    auto num = [](double x) -> json { return std::isfinite(x) ? json(x) : json(std::to_string(x)); };
    return {{"name", name},         {"residual", num(residual)}, {"tolerance", tolerance},
            {"comparison", comparison}, {"passed", passed},     {"wall_time", wall_time},
            {"details", details}};
}

bool ValidationReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

json ValidationReport::to_json() const
{
    json j;
    j["config_hash"] = config_hash;
    j["all_passed"] = all_passed();
    j["checks"] = json::array();
    for (const auto& c : checks)
        j["checks"].push_back(c.to_json());
    return j;
}

SymmetricGridFamily initial_density(const RunConfig& cfg, const GridSpec& grid, double lo, double hi, int N)
{
    if (cfg.poisson_rho)
        return poisson_density(grid, *cfg.poisson_rho, lo, hi, N);
    return point_density(grid, cfg.points, N);
}

double half_horizon_time(const RunConfig& cfg)
{
    const double T = horizon(cfg.alpha_star, cfg.alpha0, kernel_constants(cfg.kernels()));
    return std::isfinite(T) ? 0.4 * T : cfg.t_end;
}

CheckResult check_kernel_constants(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const KernelSet ks = cfg.kernels();
    const KernelConstants c = kernel_constants(ks);
    json det;
    double res = 0.0;
    if (cfg.d == 1) {
        const KernelConstants q = kernel_constants_quadrature(ks);
        const std::pair<const char*, std::pair<double, double>> fields[] = {
            {"c1_int", {c.c1_int, q.c1_int}},   {"c1_max", {c.c1_max, q.c1_max}},
            {"c2_int", {c.c2_int, q.c2_int}},   {"phi_int", {c.phi_int, q.phi_int}},
            {"phi_sup", {c.phi_sup, q.phi_sup}}};
        for (const auto& [name, v] : fields) {
            det["closed_vs_quadrature"][name] = {v.first, v.second};
            res = std::max(res, rel_gap(v.first, v.second));
        }
    } else {
        det["closed_vs_quadrature"] = "skipped: quadrature runs in d = 1 only";
    }

    RngStream rng(derive_seed(cfg.master_seed, 0, "psi_bound"));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + static_cast<int>(rng.below(7));
        std::vector<double> coords(static_cast<std::size_t>(n * cfg.d));
        for (double& x : coords)
            x = rng.uniform(cfg.lambda_c_lo, cfg.lambda_c_hi);
        if (i % 2 == 1)  // a coincident pair attains the sup of the pair rate
            std::copy_n(coords.begin(), cfg.d, coords.begin() + cfg.d);
        const double psi = psi_total(Configuration(cfg.d, coords), ks, cfg.sigma);
        const double bound = c.c1_max * n * (n - 1) / 2.0;
        const double excess = bound > 0.0 ? psi / bound - 1.0 : (psi > 0.0 ? 1.0 : 0.0);
        worst = std::max(worst, excess);
    }
    det["psi_bound_worst_excess"] = worst;
    res = std::max(res, std::max(worst, 0.0));
    return finish("kernel_constants", res, 1e-8, det, t0);
}

std::vector<CheckResult> check_minlos(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const GridSpec grid = GridSpec::make(cfg.d, cfg.lambda_c_lo, cfg.lambda_c_hi, cfg.d == 1 ? 8 : 3);
    const int N = cfg.n_max;
    double r1 = 0.0, r2 = 0.0;
    for (int i = 0; i < cfg.validation.random_inputs; ++i) {
        RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), "minlos"));
        const SymmetricGridFamily G = random_family(grid, N, rng, -1.0, 1.0);
        const std::uint64_t hseed = rng.next_u64();
        const auto [a1, b1] = minlos1_check(G, [&](int x, std::span<const int> eta) {
            return hash_unit(hseed, x, -1, eta);
        });
        const auto [a2, b2] = minlos2_check(G, [&](int x, int y, std::span<const int> eta) {
            return hash_unit(hseed, x, y, eta);
        });
        r1 = std::max(r1, rel_gap(a1, b1));
        r2 = std::max(r2, rel_gap(a2, b2));
    }
    const json det = {{"grid_m", grid.m}, {"n", N}, {"inputs", cfg.validation.random_inputs}};
    return {finish("minlos1", r1, 1e-10, det, t0), finish("minlos2", r2, 1e-10, det, t0)};
}

CheckResult check_duality(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const KernelSet ks = cfg.kernels();
    const GridSpec grid = cfg.grid();
    const int N = cfg.n_max;
    std::vector<double> sigmas{cfg.sigma};
    if (cfg.sigma != 0.0)
        sigmas.push_back(0.0);
    json det;
    double res = 0.0;
    for (double s : sigmas) {
        // the predual is exact only with the full cluster expansion
        const HierarchyOperator op(ks, s, grid, TruncationSpec{N, N});
        double worst = 0.0;
        for (int i = 0; i < cfg.validation.random_inputs; ++i) {
            RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), "duality"));
            const SymmetricGridFamily G = random_family(grid, N, rng, -1.0, 1.0);
            const SymmetricGridFamily k = random_family(grid, N, rng, -1.0, 1.0);
            const double lhs = pairing(op.apply_L_hat(G, N), k);
            const double rhs = pairing(G, op.apply_L_delta(k));
            worst = std::max(worst, rel_gap(lhs, rhs));
        }
        det["sigma=" + format_double(s)] = worst;
        res = std::max(res, worst);
    }
    return finish("duality", res, 1e-10, det, t0);
}

CheckResult check_adjointness(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const GridSpec grid = cfg.grid();
    const LocalSpec loc = local_of(cfg);
    const FokkerPlanckOperator op(cfg.kernels(), grid, loc);
    double adj = 0.0, defect = 0.0;
    for (int i = 0; i < cfg.validation.random_inputs; ++i) {
        RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), "adjoint"));
        const SymmetricGridFamily F = random_family(grid, loc.n_cap, rng, -1.0, 1.0);
        const SymmetricGridFamily R = random_family(grid, loc.n_cap, rng, 0.0, 1.0);
        const SymmetricGridFamily LdR = op.apply_L_dagger(R);
        adj = std::max(adj, rel_gap(pairing(op.apply_L_sigma(F), R), pairing(F, LdR)));
        defect = std::max(defect, std::abs(lp_integral(LdR)) / lp_integral(R));
    }
    const json det = {{"adjointness", adj}, {"mass_defect", defect}, {"sigma", loc.sigma}};
    return finish("adjointness", std::max(adj, defect), 1e-10, det, t0);
}

std::vector<CheckResult> check_mass_positivity(const RunConfig& cfg, double t_end)
{
    const auto t0 = Clock::now();
    const GridSpec grid = cfg.grid();
    const LocalSpec loc = local_of(cfg);
    const FokkerPlanckOperator op(cfg.kernels(), grid, loc);
    const SymmetricGridFamily R0 = initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, loc.n_cap);
    const FpRun run = integrate_fp(op, R0, t_end, cfg.validation.fp_dt);
    const double m0 = lp_integral(R0);
    const double m1 = run.mass.empty() ? m0 : run.mass.back();
    json det = {{"t_end", t_end}, {"dt", cfg.validation.fp_dt}, {"mass_initial", m0},
                {"mass_final", m1}, {"sigma", loc.sigma}};
    CheckResult mass = finish("mass", run.max_mass_drift, 1e-6, det, t0, m1 <= 1.0 + 1e-12);
    det["min_undershoot"] = run.min_undershoot;
    CheckResult pos = finish("fp_positivity", run.min_undershoot < 0.0 ? -run.min_undershoot : 0.0, 1e-8, det, t0);
    return {mass, pos};
}

CheckResult check_consistency(const RunConfig& cfg, double t)
{
    const auto t0 = Clock::now();
    const GridSpec grid = cfg.grid();
    const LocalSpec loc = local_of(cfg);
    const SymmetricGridFamily R0 = initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, loc.n_cap);
    const ConsistencyResult r = consistency_check(cfg.kernels(), grid, loc, R0, t, cfg.dt);
    const json det = {{"t", t}, {"dt", cfg.dt}, {"rel_diff_by_order", r.rel_diff}, {"sigma", loc.sigma}};
    return finish("consistency", r.max_rel_diff, 1e-3, det, t0);
}

std::vector<CheckResult> check_dyson(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const KernelSet ks = cfg.kernels();
    const KernelConstants kc = kernel_constants(ks);
    const double T = horizon(cfg.alpha_star, cfg.alpha0, kc);
    const double t = cfg.t_end;
    const DysonSpec spec = cfg.dyson();
    const GridSpec grid = cfg.grid();
    const HierarchyOperator op(ks, cfg.sigma, grid, cfg.truncation());
    const SymmetricGridFamily k0 =
        density_to_correlation(initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, cfg.n_max));

    DysonResult full;
    try {
        full = dyson_evolve(op, k0, spec, kc, t);
    } catch (const HorizonExceededError& e) {
        std::vector<CheckResult> out;
        const json det = {{"error", "horizon exceeded"}, {"message", e.what()}, {"t", t}, {"q", cfg.q},
                          {"horizon", T}};
        for (const char* name : {"dyson_bound", "dyson_rk4", "dyson_zero_term"})
            out.push_back(finish(name, cfg.q * t / T, 1.0, det, t0, false, "<"));
        return out;
    }

    std::vector<CheckResult> out;

    // zero terms: the free semigroup alone
    DysonSpec spec0 = spec;
    spec0.n_terms = 0;
    const SymmetricGridFamily d0 = dyson_evolve(op, k0, spec0, kc, t).value;
    const SymmetricGridFamily s0 = apply_semigroup(op.psi_family(cfg.n_max), k0, t);
    const double scale0 = sup_norm(s0);
    const double zero_res = scale0 > 0.0 ? sup_norm(d0 - s0) / scale0 : sup_norm(d0 - s0);
    out.push_back(finish("dyson_zero_term", zero_res, 1e-14, {{"t", t}}, t0));

    // term norms against the factorial bound
    const double nk0 = norm_k_theta(k0, cfg.alpha0);
    json terms = json::array();
    double worst = 0.0;
    for (int n = 0; n <= spec.n_terms; ++n) {
        const double norm = norm_k_theta(full.terms[static_cast<std::size_t>(n)], cfg.alpha_star);
        const double bound = truncation_bound(n, t, cfg.q, T) * nk0;
        terms.push_back({{"n", n}, {"norm", norm}, {"bound", bound}});
        worst = std::max(worst, bound > 0.0 ? norm / bound : (norm > 0.0 ? 2.0 : 0.0));
    }
    out.push_back(finish("dyson_bound", worst, 1.0, {{"t", t}, {"horizon", T}, {"terms", terms}}, t0));

    // the truncated series against a fine RK4 solution
    double tail = 0.0;
    for (int n = spec.n_terms + 1; n <= spec.n_terms + 400; ++n)
        tail += truncation_bound(n, t, cfg.q, T) * nk0;
    const double dt = std::min(cfg.dt, t / 50.0);
    const SymmetricGridFamily ref = t > 0.0 ? rk4_evolve(op, k0, t, dt) : k0;
    const double gap = norm_k_theta(full.value - ref, cfg.alpha_star);
    out.push_back(finish("dyson_rk4", gap, tail + 1e-4, {{"t", t}, {"rk4_dt", dt}, {"bound_tail", tail}}, t0));
    return out;
}

CheckResult check_positivity_cone(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const double t = half_horizon_time(cfg);
    const GridSpec grid = cfg.grid();
    const HierarchyOperator op(cfg.kernels(), cfg.sigma, grid, cfg.truncation());
    const SymmetricGridFamily k0 =
        density_to_correlation(initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, cfg.n_max));
    const SymmetricGridFamily kt = t > 0.0 ? rk4_evolve(op, k0, t, cfg.dt) : k0;
    const double knorm = norm_k_theta(kt, 0.0);
    double worst = 0.0, min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.validation.cone_samples; ++i) {
        RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), "cone"));
        const SymmetricGridFamily G =
            sample_bbs_star(rng, grid, cfg.n_max, {cfg.lambda_c_lo, cfg.lambda_c_hi});
        const double scale = norm_g_theta(G, 0.0) * knorm;
        const double ratio = scale > 0.0 ? pairing(G, kt) / scale : 0.0;
        min_ratio = std::min(min_ratio, ratio);
        worst = std::max(worst, -ratio);
    }
    const json det = {{"t", t}, {"samples", cfg.validation.cone_samples}, {"min_normalised_pairing", min_ratio}};
    return finish("positivity_cone", std::max(worst, 0.0), 1e-8, det, t0);
}

CheckResult check_sigma_limit(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const double t = half_horizon_time(cfg);
    const KernelSet ks = cfg.kernels();
    const GridSpec grid = cfg.grid();
    const int N = cfg.n_max;
    const SymmetricGridFamily G =
        coherent_state(TestFunction::constant_on_box(grid, -0.5, cfg.lambda_lo, cfg.lambda_hi), N);
    const SymmetricGridFamily k0 =
        density_to_correlation(initial_density(cfg, grid, cfg.lambda_lo, cfg.lambda_hi, N));
    auto value = [&](double s) {
        const HierarchyOperator op(ks, s, grid, cfg.truncation());
        return pairing(G, t > 0.0 ? rk4_evolve(op, k0, t, cfg.dt) : k0);
    };
    const double ref = value(0.0);
    std::vector<double> gaps;
    for (double s : cfg.validation.sigma_values)
        gaps.push_back(std::abs(value(s) - ref));
    const double ratio = worst_ratio(gaps, ref);
    const double final_rel = ref != 0.0 ? gaps.back() / std::abs(ref) : gaps.back();
    const json det = {{"t", t}, {"reference", ref}, {"sigma", cfg.validation.sigma_values}, {"gaps", gaps},
                      {"worst_gap_ratio", ratio}};
    return finish("sigma_limit", final_rel, 1e-2, det, t0, ratio < 1.0);
}

CheckResult check_lambda_n_limit(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const double t = half_horizon_time(cfg);
    const KernelSet ks = cfg.kernels();
    const GridSpec grid = cfg.grid();
    const double s = local_sigma(cfg);
    const double rho = cfg.validation.lambda_n_rho;
    const int nref = cfg.validation.reference_n_max;
    const double clo = cfg.lambda_c_lo, chi = cfg.lambda_c_hi;

    const std::vector<double> omega(static_cast<std::size_t>(grid.num_nodes()), -0.5);
    const SymmetricGridFamily G = product_family(grid, nref, omega);

    // reference: the density route on the whole grid box with a larger cap
    const LocalSpec ref_loc{clo, chi, nref, s};
    const FokkerPlanckOperator fop(ks, grid, ref_loc);
    const SymmetricGridFamily Rref =
        t > 0.0 ? integrate_fp(fop, poisson_density(grid, rho, clo, chi, nref), t, cfg.dt).R
                : poisson_density(grid, rho, clo, chi, nref);
    const double ref = pairing(G, density_to_correlation(Rref));

    auto member = [&](double lo, double hi, int N) {
        const HierarchyOperator op(ks, s, grid, TruncationSpec{N, N});
        const SymmetricGridFamily k0 = density_to_correlation(poisson_density(grid, rho, lo, hi, N));
        return pairing(G, t > 0.0 ? rk4_evolve(op, k0, t, cfg.dt) : k0);
    };

    const std::pair<double, double> boxes[] = {{cfg.lambda_lo, cfg.lambda_hi},
                                               {0.5 * (cfg.lambda_lo + clo), 0.5 * (cfg.lambda_hi + chi)},
                                               {clo, chi}};
    std::vector<double> box_gaps;
    for (const auto& [lo, hi] : boxes)
        box_gaps.push_back(std::abs(member(lo, hi, cfg.n_cap) - ref));

    std::vector<int> caps;
    for (int N = cfg.n_cap - 1; N <= cfg.n_cap + 1; ++N)
        if (N >= 1 && N < nref)
            caps.push_back(N);
    std::vector<double> cap_gaps;
    for (int N : caps)
        cap_gaps.push_back(std::abs(member(clo, chi, N) - ref));

    const double ratio = std::max(worst_ratio(box_gaps, ref), worst_ratio(cap_gaps, ref));
    json jboxes = json::array();
    for (const auto& [lo, hi] : boxes)
        jboxes.push_back({lo, hi});
    const json det = {{"t", t},         {"rho", rho},          {"sigma", s},          {"reference", ref},
                      {"reference_n", nref}, {"boxes", jboxes}, {"box_gaps", box_gaps}, {"caps", caps},
                      {"cap_gaps", cap_gaps}};
    return finish("lambda_n_limit", ratio, 1.0, det, t0, true, "<");
}

CheckResult check_fixed_point(const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    const GridSpec grid = cfg.grid();
    GaussianParams p = cfg.gaussian;
    p.kappa1 = 0.0;
    p.A = 0.0;
    const HierarchyOperator free_op(KernelSet::gaussian(cfg.d, p), 0.0, grid, cfg.truncation());
    const double rho = cfg.poisson_rho.value_or(1.0);
    const std::vector<double> f(static_cast<std::size_t>(grid.num_nodes()), rho);
    const double sup = sup_norm(free_op.apply_L_delta(product_family(grid, cfg.n_max, f)));

    const HierarchyOperator op(cfg.kernels(), cfg.sigma, grid, cfg.truncation());
    double empty = 0.0;
    for (int i = 0; i < cfg.validation.random_inputs; ++i) {
        RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), "fixed_point"));
        const SymmetricGridFamily k = random_family(grid, cfg.n_max, rng, -1.0, 1.0);
        empty = std::max(empty, std::abs(op.apply_L_delta(k).comp(0)[0]));
    }
    const json det = {{"rho", rho}, {"poisson_sup", sup}, {"empty_max", empty}};
    return finish("fixed_point", sup, 1e-10, det, t0, empty == 0.0);
}

std::vector<CheckResult> check_kmc_laws(const RunConfig& cfg)
{
    std::vector<CheckResult> out;
    const int d = cfg.d;
    const double inf = std::numeric_limits<double>::infinity();
    {
        // one free particle: every proposal is accepted
        const auto t0 = Clock::now();
        GaussianParams p = cfg.gaussian;
        p.A = 0.0;
        p.kappa1 = 0.0;
        if (!(p.kappa2 > 0.0))
            p.kappa2 = 1.0;
        const KernelSet ks = KernelSet::gaussian(d, p);
        Simulator sim(ks, 0.0, Configuration(d, box_points(cfg, 0.5)), derive_seed(cfg.master_seed, 0, "jump_law"));
        std::vector<double> disp, waits;
        disp.reserve(cfg.validation.kmc_law_events);
        waits.reserve(cfg.validation.kmc_law_events);
        double last = 0.0;
        Event ev;
        while (disp.size() < cfg.validation.kmc_law_events) {
            const auto kind = sim.step(inf, &ev);
            if (kind == Simulator::StepKind::Horizon)
                break;
            if (kind != Simulator::StepKind::Jump)
                continue;
            disp.push_back(ev.y[0] - ev.x[0]);
            waits.push_back(ev.t - last);
            last = ev.t;
        }
        const double s3 = p.s3, k2 = p.kappa2;
        const std::size_t n = disp.size();
        const double D1 = ks_statistic(disp, [s3](double x) { return 0.5 * std::erfc(-x / (s3 * std::numbers::sqrt2)); });
        const double D2 = ks_statistic(waits, [k2](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-k2 * x); });
        const json base = {{"events", n}, {"kappa2", k2}, {"s3", s3}, {"rejected", sim.rejected_events()}};
        json d1 = base, d2 = base;
        d1["ks_statistic"] = D1;
        d2["ks_statistic"] = D2;
        out.push_back(finish("kmc_jump_displacement", ks_pvalue(D1, n), 0.01, d1, t0, n > 0, ">"));
        out.push_back(finish("kmc_jump_times", ks_pvalue(D2, n), 0.01, d2, t0, n > 0, ">"));
    }
    {
        // two particles that can only merge: waiting time ~ Exp(pair rate)
        const auto t0 = Clock::now();
        GaussianParams p = cfg.gaussian;
        p.kappa2 = 0.0;
        if (!(p.kappa1 > 0.0))
            p.kappa1 = 1.0;
        const KernelSet ks = KernelSet::gaussian(d, p);
        std::vector<double> coords = box_points(cfg, 0.375);
        const std::vector<double> y = box_points(cfg, 0.625);
        coords.insert(coords.end(), y.begin(), y.end());
        const Configuration init(d, coords);
        const double rate = ks.pair_rate(init.point(0), init.point(1), cfg.sigma);
        const std::size_t runs = cfg.validation.kmc_trajectories;
        std::vector<double> times(runs);
        parallel_for(runs, [&](std::size_t i) {
            Simulator sim(ks, cfg.sigma, init, derive_seed(cfg.master_seed, i, "coalescence_law"));
            Simulator::StepKind k;
            do
                k = sim.step(inf);
            while (k != Simulator::StepKind::Coalesce && k != Simulator::StepKind::Horizon);
            times[i] = sim.time();
        });
        const auto [mean, se] = mean_and_se(times);
        const double z = se > 0.0 ? std::abs(mean - 1.0 / rate) / se : inf;
        const json det = {{"runs", runs}, {"pair_rate", rate}, {"mean", mean}, {"se", se}, {"expected", 1.0 / rate}};
        out.push_back(finish("kmc_coalescence_time", z, 3.0, det, t0));
    }
    return out;
}

CheckResult check_kmc_fp(const RunConfig& cfg, double t)
{
    const auto t0 = Clock::now();
    const KernelSet ks = cfg.kernels();
    const double w = cfg.lambda_hi - cfg.lambda_lo;
    // wide box so that the regulariser keeps the density inside
    const GridSpec grid = GridSpec::make(cfg.d, cfg.lambda_lo - 1.5 * w, cfg.lambda_hi + 1.5 * w, cfg.d == 1 ? 48 : 8);
    const LocalSpec loc{cfg.lambda_lo, cfg.lambda_hi, 2, local_sigma(cfg)};

    std::vector<std::vector<double>> pts;
    for (double f : {0.375, 0.625})
        pts.push_back(grid.point(grid.node_of(box_points(cfg, f))));
    std::vector<double> coords;
    for (const auto& q : pts)
        coords.insert(coords.end(), q.begin(), q.end());

    const FokkerPlanckOperator op(ks, grid, loc);
    const FpRun run = integrate_fp(op, point_density(grid, pts, 2), t, cfg.validation.fp_dt);

    EnsembleSpec es;
    es.n_traj = cfg.validation.kmc_trajectories;
    es.t_end = t;
    es.snapshot_times = {t};
    es.master_seed = derive_seed(cfg.master_seed, 0, "kmc_fp");
    es.initial = Configuration(cfg.d, coords);
    es.d = cfg.d;
    const Ensemble ens = run_ensemble(es, ks, loc.sigma);
    const CountDistribution cd = count_distribution(ens.snapshots[0]);

    double worst = 0.0;
    json bins = json::array();
    for (int n = 0; n <= 2; ++n) {
        const std::size_t u = static_cast<std::size_t>(n);
        const double fp = lp_integral_order(run.R, n);
        const double pk = u < cd.pmf.size() ? cd.pmf[u] : 0.0;
        double se = u < cd.se.size() ? cd.se[u] : 0.0;
        if (!(se > 0.0))  // an empty or full bin: fall back to the binomial error of the FP value
            se = std::sqrt(std::max(fp * (1.0 - fp), 0.0) / static_cast<double>(es.n_traj));
        const double diff = std::abs(pk - fp);
        const double z = diff == 0.0 ? 0.0 : (se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
        worst = std::max(worst, z);
        bins.push_back({{"count", n}, {"kmc", pk}, {"se", se}, {"fp", fp}, {"z", z}});
    }
    const json det = {{"t", t}, {"trajectories", es.n_traj}, {"grid_m", grid.m}, {"sigma", loc.sigma}, {"bins", bins}};
    return finish("kmc_fp", worst, 3.0, det, t0);
}

CheckResult check_artifacts(const RunConfig& cfg, const std::string& dir)
{
    namespace fs = std::filesystem;
    const auto t0 = Clock::now();
    const std::string want = config_hash(cfg);
    std::size_t checked = 0;
    json bad = json::array();
    if (!fs::is_directory(dir))
        return failed("artifacts", "not a directory: " + dir, t0);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && (e.path().extension() == ".csv" || e.path().extension() == ".json"))
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        ++checked;
        const std::string h = artifact_hash(f.string());
        if (h != want)
            bad.push_back({{"file", f.string()}, {"config_hash", h}});
    }
    const json det = {{"dir", dir}, {"files", checked}, {"expected_hash", want}, {"mismatched", bad}};
    return finish("artifacts", static_cast<double>(bad.size()), 0.0, det, t0, checked > 0);
}

namespace {

struct Group {
    std::vector<std::string> names;
    std::function<std::vector<CheckResult>(const RunConfig&)> run;
};

const std::vector<Group>& groups()
{
    using V = std::vector<CheckResult>;
    static const std::vector<Group> g = {
        {{"adjointness"}, [](const RunConfig& c) { return V{check_adjointness(c)}; }},
        {{"consistency"}, [](const RunConfig& c) { return V{check_consistency(c)}; }},
        {{"duality"}, [](const RunConfig& c) { return V{check_duality(c)}; }},
        {{"dyson_bound", "dyson_rk4", "dyson_zero_term"}, [](const RunConfig& c) { return check_dyson(c); }},
        {{"fixed_point"}, [](const RunConfig& c) { return V{check_fixed_point(c)}; }},
        {{"kernel_constants"}, [](const RunConfig& c) { return V{check_kernel_constants(c)}; }},
        {{"kmc_coalescence_time", "kmc_jump_displacement", "kmc_jump_times"},
         [](const RunConfig& c) { return check_kmc_laws(c); }},
        {{"kmc_fp"}, [](const RunConfig& c) { return V{check_kmc_fp(c)}; }},
        {{"lambda_n_limit"}, [](const RunConfig& c) { return V{check_lambda_n_limit(c)}; }},
        {{"fp_positivity", "mass"}, [](const RunConfig& c) { return check_mass_positivity(c); }},
        {{"minlos1", "minlos2"}, [](const RunConfig& c) { return check_minlos(c); }},
        {{"positivity_cone"}, [](const RunConfig& c) { return V{check_positivity_cone(c)}; }},
        {{"sigma_limit"}, [](const RunConfig& c) { return V{check_sigma_limit(c)}; }},
    };
    return g;
}

std::vector<CheckResult> run_group(const Group& g, const RunConfig& cfg)
{
    const auto t0 = Clock::now();
    try {
        return g.run(cfg);
    } catch (const std::exception& e) {
        std::vector<CheckResult> out;
        for (const auto& n : g.names)
            out.push_back(failed(n, e.what(), t0));
        return out;
    }
}

}  // namespace

std::vector<std::string> check_names()
{
    std::vector<std::string> names;
    for (const auto& g : groups())
        names.insert(names.end(), g.names.begin(), g.names.end());
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<CheckResult> run_check(const RunConfig& cfg, const std::string& name)
{
    for (const auto& g : groups())
        if (std::find(g.names.begin(), g.names.end(), name) != g.names.end())
            return run_group(g, cfg);
    throw ConfigError("unknown check '" + name + "'");
}

ValidationReport run_validation(const RunConfig& cfg, const ValidationOptions& opt)
{
    const auto known = check_names();
    for (const auto& n : opt.only)
        if (n != "artifacts" && std::find(known.begin(), known.end(), n) == known.end())
            throw ConfigError("unknown check '" + n + "'");
    auto wanted = [&](const std::string& n) {
        return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), n) != opt.only.end();
    };

    ValidationReport rep;
    rep.config_hash = config_hash(cfg);
    for (const auto& g : groups()) {
        if (std::none_of(g.names.begin(), g.names.end(), wanted))
            continue;
        for (auto& r : run_group(g, cfg))
            if (wanted(r.name))
                rep.checks.push_back(std::move(r));
    }
    if (opt.artifacts_dir)
        rep.checks.push_back(check_artifacts(cfg, *opt.artifacts_dir));
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

}  // namespace coalab
