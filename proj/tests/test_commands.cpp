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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "coalab/commands.hpp"
#include "coalab/common.hpp"
#include "coalab/config.hpp"
#include "coalab/io.hpp"
#include "tempdir.hpp"

using namespace coalab;
using nlohmann::json;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

RunConfig small_standard()
{
    RunConfig c = load_config(testutil::config_path("standard.json"));
    c.n_traj = 200;
    return c;
}

std::map<std::string, std::string> tree(const std::string& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file())
            out[fs::relative(e.path(), dir).string()] = testutil::slurp(e.path().string());
    return out;
}

std::map<std::string, std::string> run_all(const RunConfig& cfg, int threads)
{
    const int saved = thread_count();
    set_thread_count(threads);
    TempDir dir;
    EXPECT_EQ(cmd_simulate(cfg, dir / "sim"), kExitOk);
    EXPECT_EQ(cmd_hierarchy(cfg, dir / "hier"), kExitOk);
    EXPECT_EQ(cmd_fokker_planck(cfg, dir / "fp"), kExitOk);
    EXPECT_EQ(cmd_bounds(cfg, dir / "bounds"), kExitOk);
    set_thread_count(saved);
    return tree(dir.str());
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(COALAB_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Commands, OutputsIndependentOfThreadCount)
{
    const RunConfig cfg = small_standard();
    const auto a = run_all(cfg, 1);
    const auto b = run_all(cfg, 4);
    ASSERT_FALSE(a.empty());
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [name, content] : a) {
        ASSERT_TRUE(b.count(name)) << name;
        EXPECT_EQ(content, b.at(name)) << name;
    }
}

TEST(Commands, EveryArtifactCarriesTheConfigHash)
{
    RunConfig cfg = small_standard();
    cfg.method = "dyson";
    TempDir dir;
    cmd_simulate(cfg, dir / "a");
    cmd_hierarchy(cfg, dir / "a");
    cmd_fokker_planck(cfg, dir / "a");
    cmd_bounds(cfg, dir / "a");
    const std::string want = config_hash(cfg);
    int files = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir / "a"))
        if (e.is_regular_file()) {
            ++files;
            EXPECT_EQ(artifact_hash(e.path().string()), want) << e.path();
        }
    EXPECT_GT(files, 10);

    ValidationOptions opt;
    opt.only = {"artifacts"};
    opt.artifacts_dir = dir / "a";
    EXPECT_EQ(cmd_validate(cfg, dir / "v", opt), kExitOk);
    RunConfig other = cfg;
    other.master_seed += 1;
    EXPECT_EQ(cmd_validate(other, dir / "v", opt), kExitCheckFailed);
    const json rep = read_json(dir / "v/report.json");
    ASSERT_EQ(rep["checks"].size(), 1u);
    EXPECT_EQ(rep["checks"][0]["name"], "artifacts");
    EXPECT_FALSE(rep["checks"][0]["passed"].get<bool>());
}

TEST(Commands, SimulateManifestAndCounts)
{
    const RunConfig cfg = small_standard();
    TempDir dir;
    cmd_simulate(cfg, dir.str());
    const json m = read_json(dir / "manifest.json");
    EXPECT_EQ(m["command"], "simulate");
    EXPECT_EQ(m["config_hash"], config_hash(cfg));
    EXPECT_EQ(parse_config(m["config"]).n_traj, cfg.n_traj);
    for (const auto& f : m["files"])
        EXPECT_TRUE(fs::exists(dir / f.get<std::string>())) << f;
}

TEST(Commands, HierarchyBeyondHorizonStillRunsWithRk4)
{
    RunConfig cfg = small_standard();
    cfg.t_end = 0.06;
    cfg.snapshot_times = {0.03, 0.06};
    TempDir dir;
    EXPECT_EQ(cmd_hierarchy(cfg, dir.str()), kExitOk);
    cfg.method = "dyson";
    EXPECT_THROW(cmd_hierarchy(cfg, dir.str()), HorizonExceededError);
}

TEST(Commands, ValidateExitCodes)
{
    TempDir dir;
    RunConfig free = load_config(testutil::config_path("no_interaction.json"));
    ValidationOptions opt;
    opt.only = {"kernel_constants", "fixed_point", "mass", "fp_positivity", "duality", "dyson_zero_term",
                "dyson_bound", "dyson_rk4"};
    EXPECT_EQ(cmd_validate(free, dir.str(), opt), kExitOk);
    EXPECT_EQ(read_json(dir / "report.json")["checks"].size(), opt.only.size());

    RunConfig late = small_standard();
    late.t_end = 0.06;
    late.snapshot_times = {};
    opt.only = {"dyson_zero_term", "dyson_bound", "dyson_rk4"};
    EXPECT_EQ(cmd_validate(late, dir.str(), opt), kExitCheckFailed);

    opt.only = {"no_such_check"};
    EXPECT_THROW(cmd_validate(free, dir.str(), opt), ConfigError);
}

TEST(Cli, ExitCodes)
{
    TempDir dir;
    const std::string out = " --out " + dir / "o";
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli("bounds" + out), 2);
    EXPECT_EQ(run_cli("bounds --config " + dir / "absent.json" + out), 2);
    std::ofstream(dir / "bad.json") << R"({"model": {"sigma": -1}})";
    EXPECT_EQ(run_cli("bounds --config " + dir / "bad.json" + out), 2);
    std::ofstream(dir / "late.json") << R"({"evolution": {"method": "dyson", "t_end": 0.06}})";
    EXPECT_EQ(run_cli("hierarchy --config " + dir / "late.json" + out), 2);
    const std::string std_cfg = " --config " + testutil::config_path("standard.json");
    EXPECT_EQ(run_cli("bounds" + std_cfg + out), 0);
    EXPECT_TRUE(fs::exists(dir / "o/bounds.json"));
    EXPECT_EQ(run_cli("validate --only kernel_constants --only fixed_point" + std_cfg + out), 0);
    EXPECT_EQ(run_cli("validate --only bogus" + std_cfg + out), 2);
}
