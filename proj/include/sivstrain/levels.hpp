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

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sivstrain/tensorframes.hpp"

namespace sivstrain::levels {

using Complex = std::complex<double>;
using Mat4c = Eigen::Matrix<Complex, 4, 4>;
using Vec4c = Eigen::Matrix<Complex, 4, 1>;

// Energies are GHz throughout (h = 1); susceptibilities are GHz per unit strain.
inline constexpr double kGhzPerPhz = 1e6;

/// Strain response of one orbital manifold, GHz/strain.
struct Susceptibilities {
    double t_perp = 0.0;
    double t_par = 0.0;
    double d = 0.0;
    double f = 0.0;
};

/// Which shear component accompanies (eps_xx - eps_yy) in the E_gx term.
enum class ShearPairing {
    kZxInEgx,  // E_gx = d(xx-yy) + f zx,  E_gy = -2d xy + f yz
    kYzInEgx,  // E_gx = d(xx-yy) + f yz,  E_gy = -2d xy + f zx
};

enum class Manifold { Ground, Excited };

/// Parameter set for one defect.
///
/// Only differences of the A1g susceptibilities are observable in optical
/// spectra, so the defaults store (t_u - t_g) on the excited-state record and
/// leave the ground-state t values at zero.
struct LevelModel {
    double lambda_so_gs = 46.0;
    double lambda_so_es = 255.0;
    Susceptibilities sus_gs{0.0, 0.0, 1.3e6, -2.5e5};
    Susceptibilities sus_es{7.8e4, -1.7e6, 1.8e6, -7.2e5};
    double gamma_s = 14.0;         // GHz/T
    double gamma_l = 14.0;         // GHz/T, before quenching
    double orbital_quench = 0.1;
    double zpl0 = 406700.0;        // GHz, zero-strain mean ZPL
    ShearPairing shear_pairing = ShearPairing::kZxInEgx;

    double gamma_l_effective() const { return gamma_l * orbital_quench; }
    double lambda(Manifold m) const { return m == Manifold::Ground ? lambda_so_gs : lambda_so_es; }
    const Susceptibilities& sus(Manifold m) const { return m == Manifold::Ground ? sus_gs : sus_es; }

    /// Throws ValidationError unless lambda_so_es > lambda_so_gs > 0 and all values finite.
    void validate() const;
};

/// Symmetry-adapted strain energies (GHz) of one manifold.
struct SymmetryStrain {
    double a1g = 0.0;
    double egx = 0.0;
    double egy = 0.0;
};

SymmetryStrain project_strain(const frames::StrainTensor& eps, const Susceptibilities& sus,
                              ShearPairing pairing = ShearPairing::kZxInEgx);

// Product basis for every 4x4 operator: {e_x down, e_x up, e_y down, e_y up}.
Mat4c strain_hamiltonian(const SymmetryStrain& s);
Mat4c so_hamiltonian(double lambda_so);
Mat4c zeeman_hamiltonian(const frames::MagneticField& b, const LevelModel& model);
Mat4c manifold_hamiltonian(const LevelModel& model, Manifold m, const SymmetryStrain& s,
                           const frames::MagneticField& b);

/// Columns are the spin-orbit eigenstates {e- down, e+ up, e+ down, e- up} in
/// the product basis, phased so the E_gx and B_x couplings are real and positive.
Mat4c so_basis();

enum class StrainChannel { Egx, Egy };
/// d H / d eps_r for a unit symmetry-strain amplitude.
Mat4c unit_strain_operator(StrainChannel channel);
/// Spin Pauli operator along `axis` (defect frame), identity on the orbital.
Mat4c spin_pauli(const frames::Vec3& axis);
Mat4c spin_z();

struct ManifoldEigensystem {
    std::array<double, 4> energies{};
    std::array<Vec4c, 4> states{};

    /// Gap between the two orbital branches (E_2 - E_1 pair means).
    double branch_splitting() const;
};

/// Ascending eigenvalues with a deterministic basis: degenerate clusters are
/// resolved by spin-z then orbital character, and each vector is phased so its
/// largest component (lowest index on ties) is real and positive.
ManifoldEigensystem diagonalize_manifold(const Mat4c& h);

/// Closed-form branch splitting sqrt(lambda^2 + 4(egx^2 + egy^2)).
double orbital_splitting(const SymmetryStrain& s, double lambda_so);

enum class LineLabel { A, B, C, D, C1, C2, C3, C4, SpinGS, SpinES };
std::string_view to_string(LineLabel l);

/// One transition. Optical lines connect gs_index -> es_index; spin lines
/// connect the two lowest states of one manifold (gs_index = lower,
/// es_index = upper, both indices into that manifold).
struct SpectrumLine {
    LineLabel label;
    double frequency;
    int gs_index;
    int es_index;
};

/// Zero field: lines A, B, C, D. Nonzero field: C1..C4 sorted by frequency
/// followed by SpinGS and SpinES.
std::vector<SpectrumLine> optical_spectrum(const LevelModel& model, const frames::StrainTensor& eps,
                                           const frames::MagneticField& b);
std::vector<SpectrumLine> optical_spectrum(const LevelModel& model, const SymmetryStrain& gs,
                                           const SymmetryStrain& es, const frames::MagneticField& b);

/// Mean of the four zero-field lines: zpl0 + a1g_es - a1g_gs.
double mean_zpl(const LevelModel& model, const SymmetryStrain& gs, const SymmetryStrain& es);

}  // namespace sivstrain::levels
