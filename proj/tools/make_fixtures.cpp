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

// Regenerates the bundled synthetic fixtures and the fit configs that use them.
//
//   make_fixtures [--data DIR] [--configs DIR] [--seed N] [--noise GHZ]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sivstrain/devicemodel.hpp"
#include "sivstrain/fitkit.hpp"

namespace fs = std::filesystem;
using namespace sivstrain;

namespace {

SpectraSeries to_crystal(SpectraSeries s) {
    for (auto& r : s.rows) r.strain = frames::transform_strain(*r.strain, frames::Frame::crystal());
    return s;
}

SpectraSeries without_strain(SpectraSeries s) {
    for (auto& r : s.rows) r.strain.reset();
    return s;
}

device::StrainTrajectory trajectory_of(const SpectraSeries& crystal) {
    std::vector<device::TrajectoryRow> rows;
    for (const auto& r : crystal.rows) rows.push_back({r.control, *r.strain});
    return device::StrainTrajectory(rows);
}

template <typename Fn>
void write(const fs::path& p, Fn fn) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    fn(f);
    std::cout << "wrote " << p.string() << '\n';
}

nlohmann::json fit_config(const std::string& rel, const std::string& axial, const std::string& transverse,
                          const fit::HughesRunciman& g, const fit::HughesRunciman& u, bool trajectories) {
    nlohmann::json ax = {{"spectra", rel + "/" + axial + ".csv"}, {"orientation", "111"}};
    nlohmann::json tr = {{"spectra", rel + "/" + transverse + ".csv"}, {"orientation", "-111"}};
    if (trajectories) {
        ax["trajectory"] = rel + "/axial_trajectory.csv";
        tr["trajectory"] = rel + "/transverse_trajectory.csv";
    }
    return {{"fit",
             {{"axial", ax},
              {"transverse", tr},
              {"hr_b_gs", g.b},
              {"hr_b_es", u.b},
              {"stage", "full"},
              {"note", "hr_b values are back-solved from the fixture f values with the default moduli"}}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write synthetic spectra fixtures"};
    std::string data_dir = "data/fixtures", config_dir = "configs";
    std::uint64_t seed = 20260101;
    double noise = 0.5;
    app.add_option("--data", data_dir);
    app.add_option("--configs", config_dir);
    app.add_option("--seed", seed);
    app.add_option("--noise", noise, "line jitter for the noisy set, GHz");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(data_dir);
        fs::create_directories(config_dir);
        const levels::LevelModel model;
        const fit::SyntheticDesign design;
        const auto clean = fit::synthesize_pair(model, design);
        const auto noisy = fit::synthesize_pair(model, design, noise, seed);

        const auto ax = to_crystal(clean.axial), tr = to_crystal(clean.transverse);
        write(fs::path(data_dir) / "axial_spectra.csv", [&](std::ostream& o) { device::write_spectra(o, ax); });
        write(fs::path(data_dir) / "transverse_spectra.csv", [&](std::ostream& o) { device::write_spectra(o, tr); });
        write(fs::path(data_dir) / "axial_trajectory.csv",
              [&](std::ostream& o) { device::write_strain_trajectory(o, trajectory_of(ax)); });
        write(fs::path(data_dir) / "transverse_trajectory.csv",
              [&](std::ostream& o) { device::write_strain_trajectory(o, trajectory_of(tr)); });
        write(fs::path(data_dir) / "axial_spectra_noisy.csv",
              [&](std::ostream& o) { device::write_spectra(o, without_strain(noisy.axial)); });
        write(fs::path(data_dir) / "transverse_spectra_noisy.csv",
              [&](std::ostream& o) { device::write_spectra(o, without_strain(noisy.transverse)); });

        const fit::ElasticModuli moduli;
        const auto hr_g = fit::hughes_runciman_from(model.sus_gs, moduli);
        const auto hr_u = fit::hughes_runciman_from(model.sus_es, moduli);
        const auto rel = fs::relative(fs::absolute(data_dir), fs::absolute(config_dir)).generic_string();
        write(fs::path(config_dir) / "fit_synthetic.json", [&](std::ostream& o) {
            o << fit_config(rel, "axial_spectra", "transverse_spectra", hr_g, hr_u, false).dump(2) << '\n';
        });
        write(fs::path(config_dir) / "fit_synthetic_noisy.json", [&](std::ostream& o) {
            o << fit_config(rel, "axial_spectra_noisy", "transverse_spectra_noisy", hr_g, hr_u, true).dump(2) << '\n';
        });
    } catch (const std::exception& e) {
        std::cerr << "make_fixtures: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
