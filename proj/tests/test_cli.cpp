// SPDX-License-Identifier: Apache-2.0
//
// risdet: adaptive detection with RIS-assisted radar echoes
// Copyright (C) 2026 The risdet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "cli.hpp"
#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace risdet::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("risdet_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Small enough to run in well under a second.
std::vector<std::string> tiny_pd_args(const fs::path& out_dir) {
    return {"pd-curve",
            "--profile",
            "desk",
            "--seed",
            "7",
            "--out-dir",
            out_dir.string(),
            "--detectors",
            "A-GLRT,EP-GLRT-KM-1,KELLY",
            "model.N=4",
            "model.K_S=8",
            "experiment.pfa=0.05",
            "experiment.trials_cal=400",
            "experiment.trials_pd=60",
            "experiment.sinr_grid=[-5,5]"};
}

} // namespace

TEST_CASE("cli: unknown or missing subcommand is a usage error", "[cli]")
{
    Run r = invoke({"frobnicate"});
    CHECK(r.status == kExitConfig);
    CHECK(r.err.find("Usage") != std::string::npos);

    r = invoke({});
    CHECK(r.status == kExitConfig);

    r = invoke({"--help"});
    CHECK(r.status == 0);
    CHECK(r.out.find("pd-curve") != std::string::npos);
}

TEST_CASE("cli: scenario-check on the case-study geometry", "[cli]")
{
    TempDir dir;
    const Run r = invoke({"scenario-check", "--out-dir", dir.path.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("(n, m) = (3, 6)") != std::string::npos);
    CHECK(r.out.find("feasibility = true") != std::string::npos);
    CHECK(r.out.find("d_RT") != std::string::npos);
    CHECK(r.out.find("tau3") != std::string::npos);
    CHECK(fs::exists(dir.path / "scenario-check.csv"));
    CHECK(fs::exists(dir.path / "scenario-check.manifest.json"));
}

TEST_CASE("cli: scenario-check reports an infeasible layout without failing", "[cli]")
{
    TempDir dir;
    // target on the radar-RIS line beyond the surface: the surface paths add no delay
    const Run r =
        invoke({"scenario-check", "--out-dir", dir.path.string(), "scenario.target_pos=[1000,-6.666666666666667]"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("feasibility = false") != std::string::npos);
}

TEST_CASE("cli: config errors exit with status 2", "[cli]")
{
    TempDir dir;
    const std::string od = dir.path.string();
    CHECK(invoke({"scenario-check", "--out-dir", od, "model.no_such_key=1"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "model.N=sixteen"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "model.N=2.5"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "model"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "model.rho=1.5"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "model.K_S=4"}).status == kExitConfig);
    CHECK(invoke({"calibrate", "--out-dir", od, "--detectors", "NOPE"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "--profile", "huge"}).status == kExitConfig);
    CHECK(invoke({"scenario-check", "--out-dir", od, "--config", (dir.path / "missing.json").string()}).status ==
          kExitConfig);
    // window too short for the double-bounce echo
    CHECK(invoke({"calibrate", "--out-dir", od, "model.K_P=5"}).status == kExitConfig);

    std::ofstream(dir.path / "bad.json") << "{\"model\": {\"N\": 4,}}";
    CHECK(invoke({"scenario-check", "--out-dir", od, "--config", (dir.path / "bad.json").string()}).status ==
          kExitConfig);
}

TEST_CASE("cli: config documents merge strictly over the defaults", "[cli]")
{
    Json doc = to_json(default_run_config());
    merge_config(doc, Json::parse(R"({"model": {"rho": 0.5}, "experiment": {"sinr_grid": [1, 2]}})"));
    apply_override(doc, "model.cnr_db=10");
    apply_override(doc, "detectors.list=[\"C-GLRT\"]");
    const RunConfig cfg = from_json(doc);
    CHECK(cfg.model.rho == 0.5);
    CHECK(cfg.model.cnr_db == 10.0);
    CHECK(cfg.model.n == 16);
    CHECK(cfg.experiment.sinr_grid == std::vector<double>{1.0, 2.0});
    REQUIRE(cfg.detector_specs().size() == 1);
    CHECK(cfg.detector_specs()[0].kind == risdet::DetectorKind::c_glrt);

    // the JSON form round-trips
    CHECK(to_json(from_json(to_json(cfg))) == to_json(cfg));

    CHECK_THROWS_AS(merge_config(doc, Json::parse(R"({"modle": {}})")), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST_CASE("cli: paper profile switches trial counts and pfa", "[cli]")
{
    Json doc = to_json(default_run_config());
    apply_profile(doc, risdet::Profile::paper);
    const RunConfig cfg = from_json(doc);
    CHECK(cfg.profile == "paper");
    CHECK(cfg.experiment.pfa == 1e-4);
    CHECK(cfg.experiment.trials_cal == 1000000);
    CHECK(cfg.experiment.trials_pd == 10000);
}

TEST_CASE("cli: pd-curve is byte-identical across runs, thread counts and manifest reloads", "[cli]")
{
    TempDir dir;
    const fs::path a = dir.path / "a";
    const fs::path b = dir.path / "b";
    const fs::path c = dir.path / "c";

    Run r = invoke(tiny_pd_args(a));
    REQUIRE(r.status == 0);
    auto args = tiny_pd_args(b);
    args.insert(args.end(), {"--threads", "3"});
    r = invoke(args);
    REQUIRE(r.status == 0);

    const std::string csv = slurp(a / "pd-curve.csv");
    CHECK(csv.rfind("detector,x,estimate,stderr,trials,seed\n", 0) == 0);
    CHECK(csv == slurp(b / "pd-curve.csv"));

    const Json manifest = Json::parse(slurp(a / "pd-curve.manifest.json"));
    CHECK(manifest["tool"] == kToolName);
    CHECK(manifest["csv_schema"] == "risdet-curve/1");
    CHECK(manifest["master_seed"] == 7);
    CHECK(manifest["config"]["model"]["N"] == 4);
    CHECK(manifest["outputs"].size() == 1);
    CHECK(manifest.contains("timestamp"));

    r = invoke({"pd-curve", "--config", (a / "pd-curve.manifest.json").string(), "--out-dir", c.string()});
    REQUIRE(r.status == 0);
    CHECK(slurp(c / "pd-curve.csv") == csv);
}

TEST_CASE("cli: link-budget and ris-design write their tables", "[cli]")
{
    TempDir dir;
    Run r = invoke({"link-budget", "--out-dir", dir.path.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("dBsm") != std::string::npos);
    CHECK(slurp(dir.path / "link-budget.csv").rfind("sigma_dbsm,p_rtr_w,p_rstr_w,p_rstsr_w\n", 0) == 0);

    r = invoke({"ris-design", "--out-dir", dir.path.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("80 elements per side") != std::string::npos);
    const std::string csv = slurp(dir.path / "ris-design.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("cli: steering rank warning goes to stderr", "[cli]")
{
    TempDir dir;
    // identical directions make v_sr = 2 v_r
    const Run r = invoke({"scenario-check", "--out-dir", dir.path.string(), "model.theta_s_deg=0.5"});
    CHECK(r.status == 0);
    CHECK(r.err.find("warning") != std::string::npos);
}
