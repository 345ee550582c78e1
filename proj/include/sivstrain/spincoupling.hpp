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

#pragma once

#include <optional>

#include "sivstrain/levels.hpp"
#include "sivstrain/tensorframes.hpp"

namespace sivstrain::coupling {

/// Smallest qubit splitting (GHz) treated as resolved.
inline constexpr double kMinResolvedSplitting = 1e-6;

/// Lowest two ground-state eigenstates of the lower orbital branch.
struct QubitPair {
    levels::ManifoldEigensystem eigensystem;
    int lower = 0;
    int upper = 1;

    double omega_s() const { return eigensystem.energies[upper] - eigensystem.energies[lower]; }
    const levels::Vec4c& lower_state() const { return eigensystem.states[lower]; }
    const levels::Vec4c& upper_state() const { return eigensystem.states[upper]; }
};

struct CouplingOptions {
    /// Direction of the AC strain drive.
    levels::StrainChannel ac_channel = levels::StrainChannel::Egx;
    /// Defect-frame direction of the microwave drive; when unset the drive is
    /// taken perpendicular to both the defect axis and the static field.
    std::optional<frames::Vec3> microwave_axis;
};

/// Resolves the qubit pair; throws DegeneracyError if omega_s <= kMinResolvedSplitting.
QubitPair qubit_pair(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                     const frames::MagneticField& b);

/// First-order resonant susceptibility 2 gamma_s B_x / lambda * d.
double d_spin_perturbative(double b_x, double lambda_so, double d, double gamma_s = 14.0);

// The operations below exist in two flavours: one taking a strain tensor
// (defect frame, projected with the ground-state susceptibilities) and one
// taking the ground-state symmetry strain directly.

double d_spin_exact(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                    const frames::MagneticField& b, const CouplingOptions& opt = {});
double d_spin_exact(const levels::LevelModel& model, const frames::StrainTensor& eps,
                    const frames::MagneticField& b, const CouplingOptions& opt = {});

/// |<lower|dH/d eps|upper, opposite spin>| in units of d_g.
double d_flip_exact(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                    const frames::MagneticField& b, const CouplingOptions& opt = {});
double d_flip_exact(const levels::LevelModel& model, const frames::StrainTensor& eps,
                    const frames::MagneticField& b, const CouplingOptions& opt = {});

/// Dispersive susceptibility: difference of the diagonal AC-strain elements.
double t_spin(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
              const frames::MagneticField& b, const CouplingOptions& opt = {});
double t_spin(const levels::LevelModel& model, const frames::StrainTensor& eps,
              const frames::MagneticField& b, const CouplingOptions& opt = {});

double microwave_g_factor(const levels::LevelModel& model, const levels::SymmetryStrain& gs,
                          const frames::MagneticField& b, const CouplingOptions& opt = {});
double microwave_g_factor(const levels::LevelModel& model, const frames::StrainTensor& eps,
                          const frames::MagneticField& b, const CouplingOptions& opt = {});

/// Microwave drive direction used when CouplingOptions::microwave_axis is unset.
frames::Vec3 default_microwave_axis(const frames::Vec3& b_defect);

struct MechanicalMode {
    double omega_m = 5.0;    // GHz
    double q_m = 1e3;
    double eps_zpf = 8e-9;   // per-phonon E_gx strain at the defect
    double n_th = 0.0;

    void validate() const;
    double linewidth() const { return omega_m / q_m; }
};

/// Single-phonon coupling g = d_spin * eps_zpf (GHz).
double spin_phonon_g(double d_spin, const MechanicalMode& mode);

/// C = 4 g^2 / (kappa gamma_spin (n_th + 1)), kappa = omega_m / Q_m.
double cooperativity(double g, const MechanicalMode& mode, double gamma_spin);

}  // namespace sivstrain::coupling
