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

#include "coalab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "coalab/common.hpp"
#include "coalab/rng.hpp"

namespace coalab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object())
        throw ConfigError("'" + where + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key()))
            throw ConfigError("unknown key '" + where + "." + it.key() + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key))
        return;
    try {
        const json& v = obj.at(key);
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number())
                throw ConfigError("");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer())
                throw ConfigError("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string())
                throw ConfigError("");
        }
        out = v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("'" + where + "." + key + "' has the wrong type");
    }
}

void read_pair(const json& obj, const char* key, double& lo, double& hi, const std::string& where)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("'" + where + "." + key + "' must be [lo, hi]");
    lo = v[0].get<double>();
    hi = v[1].get<double>();
}

void require(bool cond, const std::string& msg)
{
    if (!cond)
        throw ConfigError(msg);
}

}  // namespace

std::vector<double> RunConfig::snapshots() const
{
    return snapshot_times.empty() ? std::vector<double>{t_end} : snapshot_times;
}

RunConfig parse_config(const json& j)
{
    RunConfig c;
    reject_unknown(j, "config",
                   {"model", "domain", "truncation", "evolution", "scale", "ensemble", "initial", "validation"});

    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, "model", {"d", "family", "kappa1", "s1", "s2", "kappa2", "s3", "A", "s4", "sigma"});
        std::string family = "gaussian";
        read(m, "family", family, "model");
        require(family == "gaussian", "model.family: only 'gaussian' can be configured from JSON");
        read(m, "d", c.d, "model");
        auto& g = c.gaussian;
        read(m, "kappa1", g.kappa1, "model");
        read(m, "s1", g.s1, "model");
        read(m, "s2", g.s2, "model");
        read(m, "kappa2", g.kappa2, "model");
        read(m, "s3", g.s3, "model");
        read(m, "A", g.A, "model");
        read(m, "s4", g.s4, "model");
        read(m, "sigma", c.sigma, "model");
    }
    if (j.contains("domain")) {
        const json& d = j["domain"];
        reject_unknown(d, "domain", {"lambda_c", "m", "lambda_box"});
        read_pair(d, "lambda_c", c.lambda_c_lo, c.lambda_c_hi, "domain");
        read(d, "m", c.m, "domain");
        read_pair(d, "lambda_box", c.lambda_lo, c.lambda_hi, "domain");
    }
    if (j.contains("truncation")) {
        const json& t = j["truncation"];
        reject_unknown(t, "truncation", {"n_max", "m_cluster", "n_cap"});
        read(t, "n_max", c.n_max, "truncation");
        read(t, "m_cluster", c.m_cluster, "truncation");
        read(t, "n_cap", c.n_cap, "truncation");
    }
    if (j.contains("evolution")) {
        const json& e = j["evolution"];
        reject_unknown(e, "evolution", {"method", "t_end", "dt", "snapshot_times", "dyson"});
        read(e, "method", c.method, "evolution");
        read(e, "t_end", c.t_end, "evolution");
        read(e, "dt", c.dt, "evolution");
        read(e, "snapshot_times", c.snapshot_times, "evolution");
        if (e.contains("dyson")) {
            const json& dy = e["dyson"];
            reject_unknown(dy, "evolution.dyson", {"q", "n_terms", "quad_order"});
            read(dy, "q", c.q, "evolution.dyson");
            read(dy, "n_terms", c.n_terms, "evolution.dyson");
            read(dy, "quad_order", c.quad_order, "evolution.dyson");
        }
    }
    if (j.contains("scale")) {
        const json& s = j["scale"];
        reject_unknown(s, "scale", {"alpha0", "alpha_star"});
        read(s, "alpha0", c.alpha0, "scale");
        read(s, "alpha_star", c.alpha_star, "scale");
    }
    if (j.contains("ensemble")) {
        const json& e = j["ensemble"];
        reject_unknown(e, "ensemble", {"n_traj", "master_seed"});
        read(e, "n_traj", c.n_traj, "ensemble");
        read(e, "master_seed", c.master_seed, "ensemble");
    }
    if (j.contains("initial")) {
        const json& i = j["initial"];
        reject_unknown(i, "initial", {"poisson", "points"});
        require(i.contains("poisson") != i.contains("points"), "initial: give exactly one of 'poisson', 'points'");
        if (i.contains("poisson")) {
            const json& p = i["poisson"];
            reject_unknown(p, "initial.poisson", {"rho"});
            double rho = 1.0;
            read(p, "rho", rho, "initial.poisson");
            c.poisson_rho = rho;
        } else {
            c.poisson_rho.reset();
            read(i, "points", c.points, "initial");
        }
    }
    if (j.contains("validation")) {
        const json& v = j["validation"];
        reject_unknown(v, "validation",
                       {"random_inputs", "cone_samples", "sigma_values", "reference_n_max", "kmc_trajectories",
                        "kmc_law_events", "fp_dt", "lambda_n_rho"});
        auto& s = c.validation;
        read(v, "random_inputs", s.random_inputs, "validation");
        read(v, "cone_samples", s.cone_samples, "validation");
        read(v, "sigma_values", s.sigma_values, "validation");
        read(v, "reference_n_max", s.reference_n_max, "validation");
        read(v, "kmc_trajectories", s.kmc_trajectories, "validation");
        read(v, "kmc_law_events", s.kmc_law_events, "validation");
        read(v, "fp_dt", s.fp_dt, "validation");
        read(v, "lambda_n_rho", s.lambda_n_rho, "validation");
    }

    const auto& g = c.gaussian;
    require(c.d >= 1 && c.d <= 3, "model.d must lie in 1..3");
    require(g.kappa1 >= 0 && g.kappa2 >= 0 && g.A >= 0, "model: kappa1, kappa2, A must be >= 0");
    require(g.s1 > 0 && g.s2 > 0 && g.s3 > 0 && g.s4 > 0, "model: widths must be > 0");
    require(c.sigma >= 0, "model.sigma must be >= 0");
    require(c.lambda_c_hi > c.lambda_c_lo, "domain.lambda_c is empty");
    require(c.m >= 2, "domain.m must be >= 2");
    require(c.lambda_hi > c.lambda_lo, "domain.lambda_box is empty");
    require(c.lambda_lo >= c.lambda_c_lo && c.lambda_hi <= c.lambda_c_hi, "domain.lambda_box must lie in lambda_c");
    require(c.n_max >= 1 && c.n_max <= 8, "truncation.n_max must lie in 1..8");
    require(c.m_cluster >= 0, "truncation.m_cluster must be >= 0");
    require(c.n_cap >= 1 && c.n_cap <= 8, "truncation.n_cap must lie in 1..8");
    require(c.method == "rk4" || c.method == "dyson", "evolution.method must be 'rk4' or 'dyson'");
    require(c.t_end >= 0, "evolution.t_end must be >= 0");
    require(c.dt > 0, "evolution.dt must be > 0");
    require(std::is_sorted(c.snapshot_times.begin(), c.snapshot_times.end()), "evolution.snapshot_times must be sorted");
    for (double t : c.snapshot_times)
        require(t >= 0 && t <= c.t_end, "evolution.snapshot_times must lie in [0, t_end]");
    require(c.q > 1, "evolution.dyson.q must be > 1");
    require(c.n_terms >= 0 && c.n_terms <= 4, "evolution.dyson.n_terms must lie in 0..4");
    require(c.quad_order >= 1 && c.quad_order <= 32, "evolution.dyson.quad_order must lie in 1..32");
    require(c.alpha_star > c.alpha0, "scale.alpha_star must exceed scale.alpha0");
    if (c.poisson_rho)
        require(*c.poisson_rho >= 0, "initial.poisson.rho must be >= 0");
    for (const auto& p : c.points)
        require(static_cast<int>(p.size()) == c.d, "initial.points entries must have d coordinates");
    require(c.validation.random_inputs >= 1, "validation.random_inputs must be >= 1");
    require(c.validation.cone_samples >= 1, "validation.cone_samples must be >= 1");
    require(!c.validation.sigma_values.empty(), "validation.sigma_values must not be empty");
    for (double s : c.validation.sigma_values)
        require(s > 0, "validation.sigma_values must be > 0");
    require(c.validation.reference_n_max >= 1 && c.validation.reference_n_max <= 8,
            "validation.reference_n_max must lie in 1..8");
    require(c.validation.fp_dt > 0, "validation.fp_dt must be > 0");
    require(c.validation.lambda_n_rho >= 0, "validation.lambda_n_rho must be >= 0");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c)
{
    const auto& g = c.gaussian;
    json j;
    j["model"] = {{"d", c.d},         {"family", "gaussian"}, {"kappa1", g.kappa1}, {"s1", g.s1},
                  {"s2", g.s2},       {"kappa2", g.kappa2},   {"s3", g.s3},         {"A", g.A},
                  {"s4", g.s4},       {"sigma", c.sigma}};
    j["domain"] = {{"lambda_c", {c.lambda_c_lo, c.lambda_c_hi}},
                   {"m", c.m},
                   {"lambda_box", {c.lambda_lo, c.lambda_hi}}};
    j["truncation"] = {{"n_max", c.n_max}, {"m_cluster", c.m_cluster}, {"n_cap", c.n_cap}};
    j["evolution"] = {{"method", c.method},
                      {"t_end", c.t_end},
                      {"dt", c.dt},
                      {"snapshot_times", c.snapshot_times},
                      {"dyson", {{"q", c.q}, {"n_terms", c.n_terms}, {"quad_order", c.quad_order}}}};
    j["scale"] = {{"alpha0", c.alpha0}, {"alpha_star", c.alpha_star}};
    j["ensemble"] = {{"n_traj", c.n_traj}, {"master_seed", c.master_seed}};
    if (c.poisson_rho)
        j["initial"] = {{"poisson", {{"rho", *c.poisson_rho}}}};
    else
        j["initial"] = {{"points", c.points}};
    const auto& v = c.validation;
    j["validation"] = {{"random_inputs", v.random_inputs},     {"cone_samples", v.cone_samples},
                       {"sigma_values", v.sigma_values},       {"reference_n_max", v.reference_n_max},
                       {"kmc_trajectories", v.kmc_trajectories}, {"kmc_law_events", v.kmc_law_events},
                       {"fp_dt", v.fp_dt},                     {"lambda_n_rho", v.lambda_n_rho}};
    return j;
}

std::string config_hash(const RunConfig& c)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(c).dump())));
    return buf;
}

}  // namespace coalab
