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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <string>

#include "sivstrain/fitkit.hpp"
#include "sivstrain/levels.hpp"
#include "sivstrain/phononkinetics.hpp"
#include "sivstrain/spincoupling.hpp"
#include "sivstrain/tensorframes.hpp"

namespace py = pybind11;
using namespace sivstrain;

namespace {

using Comp = frames::StrainTensor::Components;
using V3 = std::array<double, 3>;

// "crystal" or an orientation label ("111", "-1-11", "1-11", "-111") naming a defect frame.
frames::Frame frame_of(const std::string& name) {
    if (name == "crystal") return frames::Frame::crystal();
    return frames::Frame::defect(frames::parse_orientation(name));
}

frames::MagneticField field_of(const V3& b, const std::string& frame) {
    return {frames::Vec3(b[0], b[1], b[2]), frame_of(frame)};
}

}  // namespace

PYBIND11_MODULE(_sivstrain, m) {
    m.doc() = "Strain response of silicon-vacancy centers in diamond";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<levels::Susceptibilities>(m, "Susceptibilities")
        .def(py::init<>())
        .def(py::init([](double tp, double tz, double d, double f) { return levels::Susceptibilities{tp, tz, d, f}; }),
             py::arg("t_perp"), py::arg("t_par"), py::arg("d"), py::arg("f"))
        .def_readwrite("t_perp", &levels::Susceptibilities::t_perp)
        .def_readwrite("t_par", &levels::Susceptibilities::t_par)
        .def_readwrite("d", &levels::Susceptibilities::d)
        .def_readwrite("f", &levels::Susceptibilities::f);

    py::class_<levels::LevelModel>(m, "LevelModel")
        .def(py::init<>())
        .def_readwrite("lambda_so_gs", &levels::LevelModel::lambda_so_gs)
        .def_readwrite("lambda_so_es", &levels::LevelModel::lambda_so_es)
        .def_readwrite("sus_gs", &levels::LevelModel::sus_gs)
        .def_readwrite("sus_es", &levels::LevelModel::sus_es)
        .def_readwrite("gamma_s", &levels::LevelModel::gamma_s)
        .def_readwrite("gamma_l", &levels::LevelModel::gamma_l)
        .def_readwrite("orbital_quench", &levels::LevelModel::orbital_quench)
        .def_readwrite("zpl0", &levels::LevelModel::zpl0)
        .def("validate", &levels::LevelModel::validate);

    py::class_<levels::SymmetryStrain>(m, "SymmetryStrain")
        .def(py::init([](double a, double x, double y) { return levels::SymmetryStrain{a, x, y}; }),
             py::arg("a1g") = 0.0, py::arg("egx") = 0.0, py::arg("egy") = 0.0)
        .def_readwrite("a1g", &levels::SymmetryStrain::a1g)
        .def_readwrite("egx", &levels::SymmetryStrain::egx)
        .def_readwrite("egy", &levels::SymmetryStrain::egy);

    m.def(
        "transform_strain",
        [](const Comp& c, const std::string& from, const std::string& to) {
            return frames::transform_strain(frames::StrainTensor(c, frame_of(from)), frame_of(to)).components();
        },
        py::arg("components"), py::arg("from_frame"), py::arg("to_frame"),
        "Rotate (xx, yy, zz, yz, zx, xy) between 'crystal' and defect frames.");

    m.def(
        "project_strain",
        [](const levels::LevelModel& model, const Comp& c, const std::string& orientation) {
            const frames::StrainTensor eps(c, frame_of(orientation));
            return std::make_pair(levels::project_strain(eps, model.sus_gs, model.shear_pairing),
                                  levels::project_strain(eps, model.sus_es, model.shear_pairing));
        },
        py::arg("model"), py::arg("components"), py::arg("orientation"),
        "Ground and excited symmetry strains for a defect-frame tensor.");

    m.def("orbital_splitting", &levels::orbital_splitting, py::arg("strain"), py::arg("lambda_so"));

    m.def(
        "optical_spectrum",
        [](const levels::LevelModel& model, const Comp& c, const std::string& strain_frame, const V3& b,
           const std::string& field_frame) {
            std::vector<std::pair<std::string, double>> out;
            const frames::StrainTensor eps(c, frame_of(strain_frame));
            const auto field = frames::transform_field(field_of(b, field_frame), eps.frame());
            for (const auto& l : levels::optical_spectrum(model, eps, field)) {
                out.emplace_back(std::string(levels::to_string(l.label)), l.frequency);
            }
            return out;
        },
        py::arg("model"), py::arg("components"), py::arg("strain_frame"), py::arg("field") = V3{0, 0, 0},
        py::arg("field_frame") = "crystal",
        "Line labels and frequencies (GHz); the strain frame must name an orientation.");

    m.def(
        "spin_frequency",
        [](const levels::LevelModel& model, const levels::SymmetryStrain& gs, const V3& b) {
            return coupling::qubit_pair(model, gs, field_of(b, "111")).omega_s();
        },
        py::arg("model"), py::arg("gs"), py::arg("field_defect"));
    m.def(
        "d_spin_exact",
        [](const levels::LevelModel& model, const levels::SymmetryStrain& gs, const V3& b) {
            return coupling::d_spin_exact(model, gs, field_of(b, "111"));
        },
        py::arg("model"), py::arg("gs"), py::arg("field_defect"));
    m.def(
        "t_spin",
        [](const levels::LevelModel& model, const levels::SymmetryStrain& gs, const V3& b) {
            return coupling::t_spin(model, gs, field_of(b, "111"));
        },
        py::arg("model"), py::arg("gs"), py::arg("field_defect"));
    m.def(
        "microwave_g_factor",
        [](const levels::LevelModel& model, const levels::SymmetryStrain& gs, const V3& b) {
            return coupling::microwave_g_factor(model, gs, field_of(b, "111"));
        },
        py::arg("model"), py::arg("gs"), py::arg("field_defect"));
    m.def("d_spin_perturbative", &coupling::d_spin_perturbative, py::arg("b_x"), py::arg("lambda_so"), py::arg("d"),
          py::arg("gamma_s") = 14.0);

    py::class_<coupling::MechanicalMode>(m, "MechanicalMode")
        .def(py::init<>())
        .def_readwrite("omega_m", &coupling::MechanicalMode::omega_m)
        .def_readwrite("q_m", &coupling::MechanicalMode::q_m)
        .def_readwrite("eps_zpf", &coupling::MechanicalMode::eps_zpf)
        .def_readwrite("n_th", &coupling::MechanicalMode::n_th);
    m.def("spin_phonon_g", &coupling::spin_phonon_g, py::arg("d_spin"), py::arg("mode"));
    m.def("cooperativity", &coupling::cooperativity, py::arg("g"), py::arg("mode"), py::arg("gamma_spin"));

    py::class_<phonon::RateModel>(m, "RateModel")
        .def(py::init<>())
        .def_readwrite("temperature", &phonon::RateModel::temperature)
        .def_readwrite("chi_rho", &phonon::RateModel::chi_rho)
        .def_readwrite("dos_exponent", &phonon::RateModel::dos_exponent)
        .def_readwrite("geometry_corrected", &phonon::RateModel::geometry_corrected);
    m.def("n_th", &phonon::n_th, py::arg("nu_ghz"), py::arg("temperature_k"));
    m.def("gamma_up", &phonon::gamma_up, py::arg("delta"), py::arg("model"));
    m.def("gamma_down", &phonon::gamma_down, py::arg("delta"), py::arg("model"));
    m.def(
        "spin_t1_rates",
        [](double omega_s, double delta_gs, const phonon::RateModel& model, double flip_constant) {
            const auto r = phonon::spin_t1_rates(omega_s, delta_gs, model,
                                                 phonon::SpinFlipFactors::inverse_delta(flip_constant, delta_gs));
            return std::map<std::string, double>{
                {"single", r.single}, {"orbach", r.orbach}, {"offres", r.offres}, {"total", r.total}};
        },
        py::arg("omega_s"), py::arg("delta_gs"), py::arg("model"), py::arg("flip_constant"));

    py::class_<fit::ElasticModuli>(m, "ElasticModuli")
        .def(py::init<>())
        .def_readwrite("c11", &fit::ElasticModuli::c11)
        .def_readwrite("c12", &fit::ElasticModuli::c12)
        .def_readwrite("c44", &fit::ElasticModuli::c44);
    py::class_<fit::HughesRunciman>(m, "HughesRunciman")
        .def(py::init<>())
        .def_readwrite("a1", &fit::HughesRunciman::a1)
        .def_readwrite("a2", &fit::HughesRunciman::a2)
        .def_readwrite("b", &fit::HughesRunciman::b)
        .def_readwrite("c", &fit::HughesRunciman::c);
    m.def("derive_f", &fit::derive_f, py::arg("d"), py::arg("hr_b"), py::arg("moduli") = fit::ElasticModuli{});
    m.def("susceptibilities_from", &fit::susceptibilities_from, py::arg("hr"),
          py::arg("moduli") = fit::ElasticModuli{});
    m.def("hughes_runciman_from", &fit::hughes_runciman_from, py::arg("sus"),
          py::arg("moduli") = fit::ElasticModuli{});

    m.def(
        "synthetic_extraction",
        [](const levels::LevelModel& model, double noise_sigma, std::uint64_t seed, double hr_b_gs, double hr_b_es) {
            const auto pair = fit::synthesize_pair(model, {}, noise_sigma, seed);
            const auto res = fit::full_extraction(pair.axial, pair.transverse, hr_b_gs, hr_b_es, {}, model);
            std::map<std::string, double> out;
            for (const auto& e : res.estimates) out[e.parameter] = e.value;
            out["zpl0"] = res.model.zpl0;
            return out;
        },
        py::arg("model"), py::arg("noise_sigma") = 0.0, py::arg("seed") = 0, py::arg("hr_b_gs"),
        py::arg("hr_b_es"),
        "Generate the synthetic axial/transverse pair and run the staged extraction.");
}
