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

#include "sivstrain/levels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sivstrain/error.hpp"

namespace sivstrain::levels {

namespace {

using Mat2c = Eigen::Matrix<Complex, 2, 2>;
constexpr Complex kI{0.0, 1.0};

Mat2c pauli_x() { Mat2c m; m << 0, 1, 1, 0; return m; }
Mat2c pauli_y() { Mat2c m; m << 0, -kI, kI, 0; return m; }
Mat2c pauli_z() { Mat2c m; m << 1, 0, 0, -1; return m; }

// Spin operators in the {down, up} ordering used by the product basis.
Mat2c spin_x() { return pauli_x(); }
Mat2c spin_y() { Mat2c m; m << 0, kI, -kI, 0; return m; }
Mat2c spin_zz() { Mat2c m; m << -1, 0, 0, 1; return m; }

Mat4c kron(const Mat2c& orbital, const Mat2c& spin) {
    Mat4c out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out.block<2, 2>(2 * a, 2 * b) = orbital(a, b) * spin;
    return out;
}

// Orbital angular momentum L_z acts as pauli_y on {e_x, e_y}.
Mat2c orbital_lz() { return pauli_y(); }

void require_defect(const frames::Frame& f, const char* what) {
    if (!f.is_defect()) {
        throw FrameMismatchError(std::string(what) + " must be expressed in a defect frame, got " +
                                 f.describe());
    }
}

}  // namespace

void LevelModel::validate() const {
    const double vals[] = {lambda_so_gs, lambda_so_es, gamma_s, gamma_l, orbital_quench, zpl0,
                           sus_gs.t_perp, sus_gs.t_par, sus_gs.d, sus_gs.f,
                           sus_es.t_perp, sus_es.t_par, sus_es.d, sus_es.f};
    for (double v : vals) {
        if (!std::isfinite(v)) throw ValidationError("level model contains a non-finite value");
    }
    if (!(lambda_so_gs > 0.0)) throw ValidationError("lambda_so_gs must be positive");
    if (!(lambda_so_es > lambda_so_gs)) {
        throw ValidationError("lambda_so_es must exceed lambda_so_gs");
    }
}

SymmetryStrain project_strain(const frames::StrainTensor& eps, const Susceptibilities& sus,
                              ShearPairing pairing) {
    require_defect(eps.frame(), "strain");
    const double shear_x = pairing == ShearPairing::kZxInEgx ? eps.zx() : eps.yz();
    const double shear_y = pairing == ShearPairing::kZxInEgx ? eps.yz() : eps.zx();
    return {sus.t_perp * (eps.xx() + eps.yy()) + sus.t_par * eps.zz(),
            sus.d * (eps.xx() - eps.yy()) + sus.f * shear_x,
            -2.0 * sus.d * eps.xy() + sus.f * shear_y};
}

Mat4c strain_hamiltonian(const SymmetryStrain& s) {
    Mat2c orb;
    orb << s.a1g - s.egx, s.egy, s.egy, s.a1g + s.egx;
    return kron(orb, Mat2c::Identity());
}

Mat4c so_hamiltonian(double lambda_so) {
    // -lambda L_z S_z with L_z, S_z -> +-1 eigenvalues, halved.
    return -0.5 * lambda_so * kron(orbital_lz(), spin_zz());
}

Mat4c zeeman_hamiltonian(const frames::MagneticField& b, const LevelModel& model) {
    require_defect(b.frame, "magnetic field");
    const auto& v = b.tesla;
    const Mat2c spin = model.gamma_s * (v.x() * spin_x() + v.y() * spin_y() + v.z() * spin_zz());
    return kron(Mat2c::Identity(), spin) +
           model.gamma_l_effective() * v.z() * kron(orbital_lz(), Mat2c::Identity());
}

Mat4c manifold_hamiltonian(const LevelModel& model, Manifold m, const SymmetryStrain& s,
                           const frames::MagneticField& b) {
    return strain_hamiltonian(s) + so_hamiltonian(model.lambda(m)) + zeeman_hamiltonian(b, model);
}

Mat4c so_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    // e+ = (e_x + i e_y)/sqrt2, e- = -(e_x - i e_y)/sqrt2
    const Eigen::Matrix<Complex, 2, 1> e_plus(r, kI * r);
    const Eigen::Matrix<Complex, 2, 1> e_minus(-r, kI * r);
    const Eigen::Matrix<Complex, 2, 1> down(1, 0), up(0, 1);
    auto product = [](const Eigen::Matrix<Complex, 2, 1>& o, const Eigen::Matrix<Complex, 2, 1>& s) {
        Vec4c v;
        v << o(0) * s(0), o(0) * s(1), o(1) * s(0), o(1) * s(1);
        return v;
    };
    Mat4c u;
    u.col(0) = product(e_minus, down);
    u.col(1) = product(e_plus, up);
    u.col(2) = product(e_plus, down);
    u.col(3) = product(e_minus, up);
    return u;
}

Mat4c unit_strain_operator(StrainChannel channel) {
    if (channel == StrainChannel::Egx) return strain_hamiltonian({0.0, 1.0, 0.0});
    return strain_hamiltonian({0.0, 0.0, 1.0});
}

Mat4c spin_pauli(const frames::Vec3& axis) {
    return kron(Mat2c::Identity(), axis.x() * spin_x() + axis.y() * spin_y() + axis.z() * spin_zz());
}

Mat4c spin_z() { return kron(Mat2c::Identity(), spin_zz()); }

double ManifoldEigensystem::branch_splitting() const {
    return 0.5 * (energies[2] + energies[3]) - 0.5 * (energies[0] + energies[1]);
}

ManifoldEigensystem diagonalize_manifold(const Mat4c& h) {
    const double norm = h.norm();
    if (!h.allFinite()) throw ValidationError("Hamiltonian contains non-finite entries");
    if ((h - h.adjoint()).norm() > 1e-10 * norm) {
        throw ValidationError("Hamiltonian is not Hermitian");
    }
    const Mat4c herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat4c> solver(herm);
    if (solver.info() != Eigen::Success) throw Error("eigensolver failed");

    Eigen::Vector4d w = solver.eigenvalues();
    Mat4c v = solver.eigenvectors();

    // Split degenerate clusters with a fixed auxiliary operator whose
    // product-basis eigenvalues are all distinct.
    const double tol = 1e-9 * std::max(1.0, norm);
    const Mat4c aux = spin_z() + 0.5 * kron(pauli_z(), Mat2c::Identity());
    int start = 0;
    while (start < 4) {
        int end = start + 1;
        while (end < 4 && w(end) - w(end - 1) < tol) ++end;
        const int k = end - start;
        if (k > 1) {
            const Eigen::MatrixXcd block = v.middleCols(start, k);
            const Eigen::MatrixXcd proj = block.adjoint() * aux * block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sub(0.5 * (proj + proj.adjoint()));
            v.middleCols(start, k) = block * sub.eigenvectors();
            const double mean = w.segment(start, k).mean();
            w.segment(start, k).setConstant(mean);
        }
        start = end;
    }

    ManifoldEigensystem out;
    for (int j = 0; j < 4; ++j) {
        Vec4c col = v.col(j);
        int best = 0;
        double best_mag = std::abs(col(0));
        for (int i = 1; i < 4; ++i) {
            const double mag = std::abs(col(i));
            if (mag > best_mag + 1e-12) {
                best = i;
                best_mag = mag;
            }
        }
        col *= std::conj(col(best)) / best_mag;
        col(best) = Complex(best_mag, 0.0);
        out.energies[j] = w(j);
        out.states[j] = col;
    }
    return out;
}

double orbital_splitting(const SymmetryStrain& s, double lambda_so) {
    return std::sqrt(lambda_so * lambda_so + 4.0 * (s.egx * s.egx + s.egy * s.egy));
}

std::string_view to_string(LineLabel l) {
    switch (l) {
        case LineLabel::A: return "A";
        case LineLabel::B: return "B";
        case LineLabel::C: return "C";
        case LineLabel::D: return "D";
        case LineLabel::C1: return "C1";
        case LineLabel::C2: return "C2";
        case LineLabel::C3: return "C3";
        case LineLabel::C4: return "C4";
        case LineLabel::SpinGS: return "spin_gs";
        case LineLabel::SpinES: return "spin_es";
    }
    return "?";
}

std::vector<SpectrumLine> optical_spectrum(const LevelModel& model, const frames::StrainTensor& eps,
                                           const frames::MagneticField& b) {
    require_defect(eps.frame(), "strain");
    require_defect(b.frame, "magnetic field");
    return optical_spectrum(model, project_strain(eps, model.sus_gs, model.shear_pairing),
                            project_strain(eps, model.sus_es, model.shear_pairing), b);
}

std::vector<SpectrumLine> optical_spectrum(const LevelModel& model, const SymmetryStrain& gs,
                                           const SymmetryStrain& es, const frames::MagneticField& b) {
    const auto g = diagonalize_manifold(manifold_hamiltonian(model, Manifold::Ground, gs, b));
    const auto u = diagonalize_manifold(manifold_hamiltonian(model, Manifold::Excited, es, b));
    auto line = [&](LineLabel label, int gi, int ei) {
        return SpectrumLine{label, model.zpl0 + u.energies[ei] - g.energies[gi], gi, ei};
    };

    std::vector<SpectrumLine> out;
    if (b.tesla.norm() == 0.0) {
        out.push_back(line(LineLabel::A, 0, 2));
        out.push_back(line(LineLabel::B, 2, 2));
        out.push_back(line(LineLabel::C, 0, 0));
        out.push_back(line(LineLabel::D, 2, 0));
        return out;
    }
    std::vector<SpectrumLine> quad;
    for (int ei = 0; ei < 2; ++ei)
        for (int gi = 0; gi < 2; ++gi) quad.push_back(line(LineLabel::C1, gi, ei));
    std::stable_sort(quad.begin(), quad.end(),
                     [](const SpectrumLine& a, const SpectrumLine& c) { return a.frequency < c.frequency; });
    const LineLabel labels[] = {LineLabel::C1, LineLabel::C2, LineLabel::C3, LineLabel::C4};
    for (int i = 0; i < 4; ++i) {
        quad[i].label = labels[i];
        out.push_back(quad[i]);
    }
    out.push_back({LineLabel::SpinGS, g.energies[1] - g.energies[0], 0, 1});
    out.push_back({LineLabel::SpinES, u.energies[1] - u.energies[0], 0, 1});
    return out;
}

double mean_zpl(const LevelModel& model, const SymmetryStrain& gs, const SymmetryStrain& es) {
    return model.zpl0 + es.a1g - gs.a1g;
}

}  // namespace sivstrain::levels
