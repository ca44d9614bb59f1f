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


#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coalab/commands.hpp"
#include "coalab/common.hpp"
#include "coalab/config.hpp"

int main(int argc, char** argv)
{
    using namespace coalab;

    CLI::App app{"Jump-coalescence dynamics: simulation, correlation hierarchy and checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> only;
    std::string artifacts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
        sub->add_option("--seed", seed, "Override ensemble.master_seed");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Run the KMC ensemble");
    CLI::App* hierarchy = app.add_subcommand("hierarchy", "Evolve correlation functions");
    CLI::App* fp = app.add_subcommand("fokker-planck", "Evolve local densities");
    CLI::App* bounds = app.add_subcommand("bounds", "Report constants, horizon and bounds");
    CLI::App* validate = app.add_subcommand("validate", "Run the numerical checks");
    for (CLI::App* sub : {simulate, hierarchy, fp, bounds, validate})
        add_common(sub);
    validate->add_option("--only", only, "Run only the named checks");
    validate->add_option("--artifacts", artifacts, "Verify config hashes of artifacts in this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (seed)
            cfg.master_seed = *seed;
        set_thread_count(threads);
        if (simulate->parsed())
            return cmd_simulate(cfg, out_dir);
        if (hierarchy->parsed())
            return cmd_hierarchy(cfg, out_dir);
        if (fp->parsed())
            return cmd_fokker_planck(cfg, out_dir);
        if (bounds->parsed())
            return cmd_bounds(cfg, out_dir);
        ValidationOptions opt;
        opt.only = only;
        if (!artifacts.empty())
            opt.artifacts_dir = artifacts;
        return cmd_validate(cfg, out_dir, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const HorizonExceededError& e) {
        std::cerr << "horizon exceeded: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
