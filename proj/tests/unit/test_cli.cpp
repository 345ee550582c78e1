// Copyright 2026 The sivstrain Authors
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

#include <gtest/gtest.h>

#include "sivstrain/error.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using sivstrain::cli::Invocation;

namespace {

const fs::path kSource = SIVSTRAIN_SOURCE_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::string& command, const std::optional<std::string>& config,
        const std::optional<std::string>& format = std::nullopt) {
    Invocation inv;
    inv.command = command;
    inv.config = config;
    inv.format = format;
    std::ostringstream out, err;
    const int code = sivstrain::cli::dispatch(inv, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sivstrain_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    f << s;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string shell(const std::string& cmd, int& status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    status = WEXITSTATUS(pclose(p));
    return out;
}

}  // namespace

TEST(Cli, DefaultSpectrumAnchors) {
    const auto r = run("spectrum", std::nullopt);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    const double a = std::stod(rows[0][1]), b = std::stod(rows[1][1]);
    const double c = std::stod(rows[2][1]), d = std::stod(rows[3][1]);
    EXPECT_NEAR(a - b, 46.0, 1e-6);
    EXPECT_NEAR(a - c, 255.0, 1e-6);
    EXPECT_NEAR(c - d, 46.0, 1e-6);
}

TEST(Cli, FieldAddsSpinLines) {
    const auto cfg = scratch("field.json");
    write_file(cfg, R"({"field": {"tesla": [0, 0, 0.17], "frame": "crystal"}})");
    const auto r = run("spectrum", cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(data_rows(r.out).size(), 6u);
}

TEST(Cli, OutputIsDeterministic) {
    for (const std::string cmd : {"spectrum", "sweep"}) {
        EXPECT_EQ(run(cmd, std::nullopt).out, run(cmd, std::nullopt).out);
    }
}

TEST(Cli, RerunFromEmbeddedConfig) {
    const auto cfg = (kSource / "configs" / "sweep_delta_gs.json").string();
    for (const std::string fmt : {"csv", "json"}) {
        const auto first = run("sweep", cfg, fmt);
        ASSERT_EQ(first.code, 0) << first.err;
        const auto saved = scratch("sweep_out." + fmt);
        write_file(saved, first.out);
        const auto second = run("sweep", saved.string());
        ASSERT_EQ(second.code, 0) << second.err;
        EXPECT_EQ(first.out, second.out) << fmt;
    }
}

TEST(Cli, UnknownKeyIsUsageError) {
    const auto cfg = scratch("bad.json");
    write_file(cfg, R"({"model": {"lambda_so_gs": 46, "lamda_so_es": 255}})");
    const auto r = run("spectrum", cfg.string());
    EXPECT_EQ(r.code, 2);
    const auto e = json::parse(r.err);
    EXPECT_EQ(e["error"], "invalid-config");
    EXPECT_NE(e["message"].get<std::string>().find("lamda_so_es"), std::string::npos);
}

TEST(Cli, MissingConfigIsInputNotFound) {
    const auto r = run("spectrum", std::string("/nonexistent/config.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "input-not-found");
}

TEST(Cli, MissingSpectraIsInputNotFound) {
    const auto cfg = scratch("fit_missing.json");
    write_file(cfg, R"({"fit": {"axial": {"spectra": "nowhere.csv", "orientation": "111"}, "stage": "t_par"}})");
    const auto r = run("fit", cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "input-not-found");
}

TEST(Cli, FitRecoversFixtureParameters) {
    const auto r = run("fit", (kSource / "configs" / "fit_synthetic.json").string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    const auto cfg = sivstrain::cli::load_config((kSource / "configs" / "fit_synthetic.json").string());
    const auto& gs = cfg.model.sus_gs;
    const auto& es = cfg.model.sus_es;
    const std::map<std::string, double> truth = {{"t_par_diff", es.t_par - gs.t_par},
                                                 {"d_g", gs.d},
                                                 {"d_u", es.d},
                                                 {"t_perp_diff", es.t_perp - gs.t_perp}};
    int seen = 0;
    for (const auto& p : doc["parameters"]) {
        const auto it = truth.find(p["name"].get<std::string>());
        if (it == truth.end()) continue;
        ++seen;
        EXPECT_NEAR(p["value"].get<double>(), it->second, 0.01 * std::abs(it->second)) << it->first;
    }
    EXPECT_EQ(seen, 4);
}

TEST(Cli, NoisyFitWithinTenPercent) {
    const auto path = (kSource / "configs" / "fit_synthetic_noisy.json").string();
    const auto r = run("fit", path);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    const auto cfg = sivstrain::cli::load_config(path);
    for (const auto& p : doc["parameters"]) {
        const std::string name = p["name"];
        const double v = p["value"];
        if (name == "d_g") EXPECT_NEAR(v, cfg.model.sus_gs.d, 0.1 * cfg.model.sus_gs.d);
        if (name == "d_u") EXPECT_NEAR(v, cfg.model.sus_es.d, 0.1 * cfg.model.sus_es.d);
        if (name == "t_par_diff") {
            const double t = cfg.model.sus_es.t_par - cfg.model.sus_gs.t_par;
            EXPECT_NEAR(v, t, 0.1 * std::abs(t));
        }
    }
}

TEST(Cli, FitStageSelection) {
    const auto cfg = scratch("fit_tpar.json");
    const auto src = json::parse(std::ifstream(kSource / "configs" / "fit_synthetic.json"));
    auto doc = src;
    doc["fit"]["stage"] = "t_par";
    doc["fit"]["axial"]["spectra"] = (kSource / "configs" / src["fit"]["axial"]["spectra"].get<std::string>()).string();
    doc["fit"].erase("transverse");
    write_file(cfg, doc.dump());
    const auto r = run("fit", cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto out = json::parse(r.out);
    ASSERT_EQ(out["parameters"].size(), 2u);
    EXPECT_EQ(out["parameters"][0]["name"], "t_par_diff");
    EXPECT_EQ(out["parameters"][1]["name"], "zpl0");
    EXPECT_FALSE(out.contains("model"));
}

TEST(Cli, RatesColumnsAndPositivity) {
    const auto r = run("rates", (kSource / "configs" / "rates_4k.json").string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("delta_ghz,n_th,gamma_up,gamma_down"), std::string::npos);
    for (const auto& row : data_rows(r.out)) {
        EXPECT_GT(std::stod(row[3]), std::stod(row[2]));  // down exceeds up
        EXPECT_GT(std::stod(row.back()), 0.0);
    }
}

TEST(Cli, RatesRejectNonDeltaSweep) {
    const auto cfg = scratch("rates_bad.json");
    write_file(cfg, R"({"sweep": {"variable": "voltage"}, "field": {"tesla": [0, 0, 0.1]}})");
    const auto r = run("rates", cfg.string());
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, CouplingWorkedExample) {
    const auto r = run("coupling", (kSource / "configs" / "coupling_mk.json").string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# cooperativity:"), std::string::npos);
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(std::stod(rows[0][6]), 8e-4, 8e-6);
    EXPECT_GT(std::stod(rows[0][7]), 1e3);
}

TEST(Cli, CouplingNeedsField) {
    const auto r = run("coupling", std::nullopt);
    EXPECT_NE(r.code, 0);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BinaryExitCodesAndStderr) {
    int status = 0;
    shell(std::string(SIVSTRAIN_CLI_PATH) + " spectrum 2>/dev/null", status);
    EXPECT_EQ(status, 0);
    shell(std::string(SIVSTRAIN_CLI_PATH) + " bogus 2>/dev/null", status);
    EXPECT_EQ(status, 2);
    const auto err = shell(std::string(SIVSTRAIN_CLI_PATH) + " spectrum --config /nonexistent.json 2>&1 1>/dev/null",
                           status);
    EXPECT_EQ(status, 2);
    EXPECT_EQ(json::parse(err)["exit_code"], 2);
}

TEST(Cli, SeedFlagOverridesAndEchoes) {
    Invocation inv;
    inv.command = "spectrum";
    inv.seed = 77;
    std::ostringstream out, err;
    ASSERT_EQ(sivstrain::cli::dispatch(inv, out, err), 0);
    EXPECT_NE(out.str().find("\"seed\":77"), std::string::npos);
}

TEST(Cli, OutputFileIsWritten) {
    const auto target = scratch("spectrum_out.csv");
    fs::remove(target);
    Invocation inv;
    inv.command = "spectrum";
    inv.out = target.string();
    std::ostringstream out, err;
    ASSERT_EQ(sivstrain::cli::dispatch(inv, out, err), 0);
    EXPECT_TRUE(fs::exists(target));
    inv.out = "/nonexistent/dir/out.csv";
    EXPECT_EQ(sivstrain::cli::dispatch(inv, out, err), 2);
}
