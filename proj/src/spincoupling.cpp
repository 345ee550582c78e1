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

#include "sivstrain/spincoupling.hpp"

#include <cmath>

#include "sivstrain/error.hpp"

namespace sivstrain::coupling {

using levels::Complex;
using levels::Mat4c;
using levels::Vec4c;

namespace {

levels::SymmetryStrain ground_strain(const levels::LevelModel& model, const frames::StrainTensor& eps) {
    return levels::project_strain(eps, model.sus_gs, model.shear_pairing);
}

Complex element(const Vec4c& bra, const Mat4c& op, const Vec4c& ket) {
    return bra.dot(op * ket);  // dot conjugates the first argument
}

double expectation(const Vec4c& v, const Mat4c& op) { return element(v, op, v).real(); }

}  // namespace

QubitPair qubit_pair(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                     const frames::MagneticField& b) {
    QubitPair q;
    q.eigensystem = levels::diagonalize_manifold(
        levels::manifold_hamiltonian(model, levels::Manifold::Ground, gs, b));
    if (!(q.omega_s() > kMinResolvedSplitting)) {
        throw DegeneracyError("qubit pair is degenerate (omega_s = " + std::to_string(q.omega_s()) +
                              " GHz); a magnetic field is required");
    }
    return q;
}

double d_spin_perturbative(double b_x, double lambda_so, double d, double gamma_s) {
    if (!(lambda_so > 0.0)) throw ValidationError("lambda_so must be positive");
    return 2.0 * gamma_s * b_x / lambda_so * d;
}

double d_spin_exact(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                    const frames::MagneticField& b, const CouplingOptions& opt) {
    const auto q = qubit_pair(model, gs, b);
    const Mat4c v = levels::unit_strain_operator(opt.ac_channel);
    return std::abs(element(q.lower_state(), v, q.upper_state())) * model.sus_gs.d;
}

double d_spin_exact(const levels::LevelModel& model, const frames::StrainTensor& eps,
                    const frames::MagneticField& b, const CouplingOptions& opt) {
    return d_spin_exact(model, ground_strain(model, eps), b, opt);
}

double d_flip_exact(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                    const frames::MagneticField& b, const CouplingOptions& opt) {
    // Without a field every eigenstate keeps a definite spin projection.
    if (b.tesla.norm() == 0.0) return 0.0;
    const auto q = qubit_pair(model, gs, b);
    const auto& sys = q.eigensystem;
    for (int i = 1; i < 4; ++i) {
        if (!(sys.energies[i] - sys.energies[i - 1] > kMinResolvedSplitting)) {
            throw DegeneracyError("ground-state levels are not resolvable");
        }
    }
    const Mat4c sz = levels::spin_z();
    const double lower_spin = expectation(sys.states[0], sz);
    const double sign = lower_spin >= 0.0 ? 1.0 : -1.0;
    const int partner = expectation(sys.states[2], sz) * sign < expectation(sys.states[3], sz) * sign ? 2 : 3;
    const Mat4c v = levels::unit_strain_operator(opt.ac_channel);
    return std::abs(element(sys.states[0], v, sys.states[partner]));
}

double d_flip_exact(const levels::LevelModel& model, const frames::StrainTensor& eps,
                    const frames::MagneticField& b, const CouplingOptions& opt) {
    return d_flip_exact(model, ground_strain(model, eps), b, opt);
}

double t_spin(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
              const frames::MagneticField& b, const CouplingOptions& opt) {
    const auto q = qubit_pair(model, gs, b);
    const Mat4c v = levels::unit_strain_operator(opt.ac_channel);
    return (expectation(q.upper_state(), v) - expectation(q.lower_state(), v)) * model.sus_gs.d;
}

double t_spin(const levels::LevelModel& model, const frames::StrainTensor& eps,
              const frames::MagneticField& b, const CouplingOptions& opt) {
    return t_spin(model, ground_strain(model, eps), b, opt);
}

frames::Vec3 default_microwave_axis(const frames::Vec3& b_defect) {
    const frames::Vec3 m = frames::Vec3::UnitZ().cross(b_defect);
    if (m.norm() <= 1e-12 * std::max(1.0, b_defect.norm())) return frames::Vec3::UnitX();
    return m.normalized();
}

double microwave_g_factor(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                          const frames::MagneticField& b, const CouplingOptions& opt) {
    const auto q = qubit_pair(model, gs, b);
    frames::Vec3 axis = opt.microwave_axis.value_or(default_microwave_axis(b.tesla));
    if (!(axis.norm() > 0.0)) throw ValidationError("microwave axis must be nonzero");
    axis.normalize();
    return 2.0 * std::abs(element(q.lower_state(), levels::spin_pauli(axis), q.upper_state()));
}

double microwave_g_factor(const levels::LevelModel& model, const frames::StrainTensor& eps,
                          const frames::MagneticField& b, const CouplingOptions& opt) {
    return microwave_g_factor(model, ground_strain(model, eps), b, opt);
}

void MechanicalMode::validate() const {
    if (!(omega_m > 0.0) || !(q_m > 0.0)) {
        throw ValidationError("mechanical frequency and quality factor must be positive");
    }
    if (!(eps_zpf >= 0.0) || !(n_th >= 0.0)) {
        throw ValidationError("per-phonon strain and bath occupation must be non-negative");
    }
}

double spin_phonon_g(double d_spin, const MechanicalMode& mode) {
    mode.validate();
    return d_spin * mode.eps_zpf;
}

double cooperativity(double g, const MechanicalMode& mode, double gamma_spin) {
    mode.validate();
    const double denom = mode.linewidth() * gamma_spin * (mode.n_th + 1.0);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        throw ValidationError("cooperativity denominator must be positive");
    }
    return 4.0 * g * g / denom;
}

}  // namespace sivstrain::coupling
