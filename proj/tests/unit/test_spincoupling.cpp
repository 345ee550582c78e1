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

#include <cmath>
#include <random>

#include "sivstrain/spincoupling.hpp"

using namespace sivstrain;
using namespace sivstrain::coupling;
using frames::Frame;
using frames::MagneticField;
using frames::Orientation;
using frames::Vec3;
using levels::LevelModel;
using levels::SymmetryStrain;

namespace {

const Frame kDefect = Frame::defect(Orientation::kBar111);

// 0.17 T along the crystal [001] axis, seen by a transverse emitter.
MagneticField lab_field() {
    return frames::transform_field({Vec3(0, 0, 0.17), Frame::crystal()}, kDefect);
}

MagneticField field(double bx, double by, double bz) { return {Vec3(bx, by, bz), kDefect}; }

SymmetryStrain at_delta(double delta, double lambda = 46.0) {
    return {0.0, 0.5 * std::sqrt(delta * delta - lambda * lambda), 0.0};
}

}  // namespace

TEST(Perturbative, Values) {
    EXPECT_NEAR(d_spin_perturbative(0.1388, 46.0, 1.0), 0.0845, 1e-4);
    EXPECT_EQ(d_spin_perturbative(0.0, 46.0, 1.3e6), 0.0);
    EXPECT_DOUBLE_EQ(d_spin_perturbative(0.2, 46.0, 1.3e6), 2.0 * d_spin_perturbative(0.1, 46.0, 1.3e6));
    EXPECT_THROW(d_spin_perturbative(0.1, 0.0, 1.3e6), ValidationError);
}

TEST(QubitPair, DegenerateWithoutField) {
    const LevelModel m;
    EXPECT_THROW(qubit_pair(m, {}, field(0, 0, 0)), DegeneracyError);
    EXPECT_THROW(d_spin_exact(m, SymmetryStrain{}, field(0, 0, 0)), DegeneracyError);
    EXPECT_GT(qubit_pair(m, {}, lab_field()).omega_s(), 3.0);
}

TEST(DSpinExact, ZeroStrainAnchor) {
    const LevelModel m;
    const auto b = lab_field();
    EXPECT_NEAR(b.tesla.z(), 0.17 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(d_spin_exact(m, SymmetryStrain{}, b) / m.sus_gs.d, 0.085, 0.002);
    // Tensor overload agrees with the symmetry-strain overload.
    EXPECT_DOUBLE_EQ(d_spin_exact(m, frames::StrainTensor::zero(kDefect), b), d_spin_exact(m, SymmetryStrain{}, b));
}

TEST(DSpinExact, PerturbativeLimitAcrossDecades) {
    const LevelModel m;
    double prev_gap = 1.0;
    for (double bx : {0.3, 0.03, 0.003}) {
        const double exact = d_spin_exact(m, SymmetryStrain{}, field(bx, 0, bx / 3.0));
        const double approx = d_spin_perturbative(bx, 46.0, m.sus_gs.d);
        const double gap = std::abs(exact / approx - 1.0);
        EXPECT_LT(gap, 0.05);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
}

TEST(DSpinExact, MaximumAtZeroStrainAndRollOff) {
    const LevelModel m;
    const auto b = lab_field();
    const double d0 = d_spin_exact(m, SymmetryStrain{}, b);
    for (double delta = 50.0; delta <= 2000.0; delta += 25.0) EXPECT_LT(d_spin_exact(m, at_delta(delta), b), d0);
    EXPECT_LT(d_spin_exact(m, at_delta(2000.0), b) / m.sus_gs.d, 0.01);
}

TEST(DSpinExact, PhaseIndependent) {
    const LevelModel m;
    const auto b = lab_field();
    const auto gs = at_delta(80.0);
    const auto q = qubit_pair(m, gs, b);
    const auto v = levels::unit_strain_operator(levels::StrainChannel::Egx);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
    for (int i = 0; i < 10; ++i) {
        const levels::Vec4c a = q.lower_state() * std::polar(1.0, u(rng));
        const levels::Vec4c c = q.upper_state() * std::polar(1.0, u(rng));
        EXPECT_NEAR(std::abs(a.dot(v * c)) * m.sus_gs.d, d_spin_exact(m, gs, b), 1e-9);
    }
}

TEST(Mixing, OppositeSpinWeightAtZeroStrain) {
    const LevelModel m;
    const double bx = 0.05;
    const auto q = qubit_pair(m, {}, field(bx, 0, 0.01));
    auto up_weight = [](const levels::Vec4c& v) { return std::norm(v[1]) + std::norm(v[3]); };
    const double expected = std::pow(m.gamma_s * bx / 46.0, 2);
    const double lower_flip = up_weight(q.lower_state());
    const double upper_flip = 1.0 - up_weight(q.upper_state());
    EXPECT_NEAR(lower_flip / expected, 1.0, 0.05);
    EXPECT_NEAR(upper_flip / expected, 1.0, 0.05);
}

TEST(DFlip, ZeroField) {
    EXPECT_EQ(d_flip_exact(LevelModel{}, at_delta(300.0), field(0, 0, 0)), 0.0);
}

TEST(DFlip, InverseSplittingAtHighStrain) {
    const LevelModel m;
    const auto b = lab_field();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double delta = 500.0; delta <= 2000.0; delta *= 1.1) {
        const double x = std::log(delta), y = std::log(d_flip_exact(m, at_delta(delta), b));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, -1.0, 0.05);
}

TEST(DFlip, LinearInTransverseField) {
    const LevelModel m;
    const auto gs = at_delta(400.0);
    const double a = d_flip_exact(m, gs, field(0.001, 0, 0.1));
    const double b = d_flip_exact(m, gs, field(0.002, 0, 0.1));
    EXPECT_NEAR(b / a, 2.0, 0.01);
}

TEST(TSpin, ZeroAtZeroStrain) {
    const LevelModel m;
    EXPECT_LE(std::abs(t_spin(m, SymmetryStrain{}, lab_field())), 1e-12 * m.sus_gs.d);
}

TEST(TSpin, PeakNearFiftyGigahertz) {
    const LevelModel m;
    const auto b = lab_field();
    double best = 0, arg = 0;
    for (double delta = 46.5; delta <= 400.0; delta += 0.5) {
        const double t = std::abs(t_spin(m, at_delta(delta), b));
        if (t > best) {
            best = t;
            arg = delta;
        }
    }
    EXPECT_NEAR(arg, 50.0, 5.0);
    EXPECT_LT(std::abs(t_spin(m, at_delta(400.0), b)), best);
    EXPECT_LT(std::abs(t_spin(m, at_delta(800.0), b)), std::abs(t_spin(m, at_delta(400.0), b)));
}

TEST(TSpin, EqualsSlopeOfSpinFrequency) {
    const LevelModel m;
    const auto b = lab_field();
    const double h = 1e-8 * m.sus_gs.d;
    for (double delta : {55.0, 100.0, 300.0}) {
        const auto s = at_delta(delta);
        const double wp = qubit_pair(m, {0, s.egx + h, 0}, b).omega_s();
        const double wm = qubit_pair(m, {0, s.egx - h, 0}, b).omega_s();
        const double numeric = (wp - wm) / (2.0 * 1e-8);
        EXPECT_NEAR(t_spin(m, s, b) / numeric, 1.0, 1e-3);
    }
}

TEST(MicrowaveG, Limits) {
    const LevelModel m;
    const auto b = lab_field();
    EXPECT_LT(microwave_g_factor(m, SymmetryStrain{}, b), 0.1);
    const double high = microwave_g_factor(m, at_delta(20.0 * 46.0 + 1.0), b);
    EXPECT_GE(high, 1.98);
    EXPECT_LE(high, 2.0 + 1e-12);
    double prev = -1.0;
    for (double delta = 46.5; delta < 2000.0; delta *= 1.1) {
        const double g = microwave_g_factor(m, at_delta(delta), b);
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(MicrowaveG, DefaultAxis) {
    EXPECT_LT((default_microwave_axis(Vec3(0.1, 0, 0.1)) - Vec3(0, 1, 0)).norm(), 1e-12);
    EXPECT_EQ(default_microwave_axis(Vec3(0, 0, 0.2)), Vec3::UnitX());
}

TEST(Coupling, RateAndCooperativity) {
    MechanicalMode mode;
    EXPECT_NEAR(spin_phonon_g(1e5, mode), 8e-4, 1e-15);
    MechanicalMode zero = mode;
    zero.eps_zpf = 0.0;
    EXPECT_EQ(spin_phonon_g(1e5, zero), 0.0);
    EXPECT_NEAR(cooperativity(8e-4, mode, 1e-7), 5120.0, 1e-6);
    EXPECT_EQ(cooperativity(0.0, mode, 1e-7), 0.0);
    MechanicalMode warm = mode;
    warm.q_m = 1e5;
    warm.n_th = 20;
    // 4 g^2 / (kappa gamma (n+1)) = 2.56e-6 / (5e-5 * 4e-3 * 21).
    EXPECT_NEAR(cooperativity(8e-4, warm, 4e-3), 2.56e-6 / (5e-5 * 4e-3 * 21.0), 1e-12);
    EXPECT_THROW(cooperativity(8e-4, mode, 0.0), ValidationError);
    MechanicalMode bad = mode;
    bad.q_m = 0.0;
    EXPECT_THROW(bad.validate(), ValidationError);
}
