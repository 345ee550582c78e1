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

#include <cmath>
#include <numbers>

#include "sivstrain/error.hpp"
#include "sivstrain/phononkinetics.hpp"

using namespace sivstrain;
using namespace sivstrain::phonon;

namespace {

RateModel unit_model(double n = 3.0, double t = 4.0) {
    RateModel m;
    m.chi_rho = 1.0;
    m.dos_exponent = n;
    m.temperature = t;
    return m;
}

template <typename F>
double golden_max(F f, double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi, c = b - r * (b - a), d = a + r * (b - a);
    while (b - a > 1e-9 * (1.0 + std::abs(a))) {
        if (f(c) > f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(Occupation, HandValues) {
    EXPECT_NEAR(kBoltzmannOverPlanckGhzPerK, 20.8366, 1e-4);
    EXPECT_NEAR(n_th(kBoltzmannOverPlanckGhzPerK * 4.0, 4.0), 1.0 / (std::numbers::e - 1.0), 1e-12);
    EXPECT_NEAR(n_th(83.346, 4.0), 0.58198, 1e-5);
    EXPECT_NEAR(n_th(46.0, 4.0), 1.35764, 1e-4);
    const double x = 40.0;
    EXPECT_NEAR(n_th(x * kBoltzmannOverPlanckGhzPerK * 4.0, 4.0) / std::exp(-x), 1.0, 1e-12);
    EXPECT_THROW(n_th(0.0, 4.0), ValidationError);
    EXPECT_THROW(n_th(-1.0, 4.0), ValidationError);
}

TEST(OrbitalRates, HandValues) {
    const auto m = unit_model();
    const double two_pi = 2.0 * std::numbers::pi;
    EXPECT_NEAR(gamma_up(46.0, m), two_pi * 46.0 * 46.0 * 46.0 * n_th(46.0, 4.0), 1e-6);
    EXPECT_NEAR(gamma_up(46.0, m) / 8.304e5, 1.0, 1e-3);
    EXPECT_NEAR(gamma_down(46.0, m), gamma_up(46.0, m) + two_pi * 46.0 * 46.0 * 46.0, 1e-6);
    RateModel zero = m;
    zero.chi_rho = 0.0;
    EXPECT_EQ(gamma_up(46.0, zero), 0.0);
    EXPECT_THROW(gamma_up(0.0, m), ValidationError);
    EXPECT_THROW(gamma_down(-2.0, m), ValidationError);
}

TEST(OrbitalRates, DetailedBalance) {
    for (double n : {1.9, 3.0}) {
        for (double t : {0.1, 1.0, 4.0, 20.0}) {
            for (double delta : {1.0, 46.0, 300.0}) {
                const auto m = unit_model(n, t);
                const double x = delta / (kBoltzmannOverPlanckGhzPerK * t);
                if (x > 600) continue;
                EXPECT_NEAR(gamma_down(delta, m) / gamma_up(delta, m) / std::exp(x), 1.0, 1e-12);
            }
        }
    }
}

TEST(OrbitalRates, ZeroTemperatureLimit) {
    const auto m = unit_model(3.0, 1e-3);
    EXPECT_NEAR(gamma_down(46.0, m), 2.0 * std::numbers::pi * 46.0 * 46.0 * 46.0, 1e-9);
}

TEST(OrbitalRates, UpwardMaximumMatchesGoldenSection) {
    const auto m = unit_model();
    const double arg = golden_max([&](double d) { return gamma_up(d, m); }, 1.0, 2000.0);
    // Stationary condition n = x / (1 - e^-x) with x = h delta / kT.
    const double x = arg / (kBoltzmannOverPlanckGhzPerK * 4.0);
    EXPECT_NEAR(x / (-std::expm1(-x)), 3.0, 1e-6);
    EXPECT_NEAR(arg, 235.0, 1.0);
    // Grid scan has exactly one interior maximum.
    int peaks = 0;
    const double h = 1.0;
    for (double d = 2.0; d < 2000.0; d += h) {
        if (gamma_up(d, m) > gamma_up(d - h, m) && gamma_up(d, m) >= gamma_up(d + h, m)) ++peaks;
    }
    EXPECT_EQ(peaks, 1);
}

TEST(OrbitalRates, DownwardIsIncreasing) {
    for (double n : {1.9, 3.0}) {
        const auto m = unit_model(n);
        double prev = 0.0;
        for (double d = 0.5; d < 3000.0; d *= 1.05) {
            const double g = gamma_down(d, m);
            EXPECT_GT(g, prev);
            prev = g;
        }
    }
}

TEST(Dephasing, FloorAndTail) {
    const auto m = unit_model();
    EXPECT_EQ(dephasing_rate(46.0, m, 0.0), gamma_up(46.0, m));
    EXPECT_NEAR(dephasing_rate(20000.0, m, 0.3), 0.3, 1e-9);
    double prev = dephasing_rate(240.0, m, 0.3);
    for (double d = 250.0; d < 3000.0; d += 10.0) {
        const double r = dephasing_rate(d, m, 0.3);
        EXPECT_LT(r, prev);
        prev = r;
    }
    EXPECT_THROW(dephasing_rate(46.0, m, -1.0), ValidationError);
}

TEST(SpinT1, NoMixingNoRelaxation) {
    const auto r = spin_t1_rates(4.0, 100.0, RateModel{}, SpinFlipFactors{});
    EXPECT_EQ(r.single, 0.0);
    EXPECT_EQ(r.orbach, 0.0);
    EXPECT_EQ(r.offres, 0.0);
    EXPECT_EQ(r.total, 0.0);
}

TEST(SpinT1, ChannelFormulas) {
    RateModel m;
    const SpinFlipFactors f{0.05, 0.02};
    const double ws = 4.0, dg = 80.0, pi = std::numbers::pi;
    const auto r = spin_t1_rates(ws, dg, m, f);
    EXPECT_NEAR(r.single, 2 * pi * 0.02 * 0.02 * m.chi_rho * ws * ws * ws * n_th(ws, 4.0), 1e-20);
    EXPECT_NEAR(r.orbach, 4 * 0.05 * 0.05 * gamma_up(dg, m), 1e-18);
    const double kt = kBoltzmannOverPlanckGhzPerK * 4.0;
    EXPECT_NEAR(r.offres, 8 * pi * pi * pi * 0.05 * 0.05 * m.chi_rho * m.chi_rho * ws * ws * kt * kt * kt, 1e-20);
    EXPECT_DOUBLE_EQ(r.total, r.single + r.orbach + r.offres);
    EXPECT_THROW(spin_t1_rates(0.0, dg, m, f), ValidationError);
    EXPECT_THROW(spin_t1_rates(ws, dg, m, SpinFlipFactors{1.5, 0.0}), ValidationError);
}

TEST(SpinT1, GeometryCorrectionOnlyWhenFlagged) {
    RateModel m;
    m.dos_exponent = 1.9;
    const SpinFlipFactors f{0.05, 0.02};
    const double a = spin_t1_rates(4.0, 80.0, m, f).single;
    m.geometry_corrected = true;
    const double b = spin_t1_rates(4.0, 80.0, m, f).single;
    EXPECT_NEAR(a / b, std::pow(4.0, 3.0 - 1.9), 1e-12);
}

TEST(SpinT1, OrbachDecreasesAtLargeSplitting) {
    RateModel m;
    double prev = 1e300;
    for (double d = 300.0; d < 3000.0; d += 50.0) {
        const double r = spin_t1_rates(4.0, d, m, SpinFlipFactors::inverse_delta(3.9, d)).total;
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(SpinT1, LinearInChiRhoForLinearChannels) {
    RateModel a, b;
    b.chi_rho = 3.0 * a.chi_rho;
    const SpinFlipFactors f{0.05, 0.02};
    EXPECT_NEAR(spin_t1_rates(4, 80, b, f).orbach / spin_t1_rates(4, 80, a, f).orbach, 3.0, 1e-12);
    EXPECT_NEAR(spin_t1_rates(4, 80, b, f).single / spin_t1_rates(4, 80, a, f).single, 3.0, 1e-12);
    EXPECT_NEAR(gamma_up(80, b) / gamma_up(80, a), 3.0, 1e-12);
}

TEST(FitChiRho, OrbachRoundTrip) {
    RateModel truth;
    truth.chi_rho = 1e-7;
    const ChannelContext ctx{4.0, 3.9};
    std::vector<RateObservation> obs;
    for (double d = 20; d <= 400; d += 20) obs.push_back({d, channel_rate(RateChannel::Orbach, d, truth, ctx)});
    RateModel guess = truth;
    guess.chi_rho = 1.0;
    const auto f = fit_chi_rho(obs, guess, RateChannel::Orbach, ctx);
    EXPECT_NEAR(f.chi_rho, 1e-7, 1e-9);
    EXPECT_LT(f.residual_norm, 1e-9);
    ASSERT_TRUE(f.std_err.has_value());
}

TEST(FitChiRho, OffResonantIsQuadratic) {
    RateModel truth;
    truth.chi_rho = 2e-7;
    const ChannelContext ctx{4.0, 3.9};
    std::vector<RateObservation> obs{{50, channel_rate(RateChannel::OffResonant, 50, truth, ctx)},
                                     {90, channel_rate(RateChannel::OffResonant, 90, truth, ctx)}};
    EXPECT_NEAR(fit_chi_rho(obs, RateModel{}, RateChannel::OffResonant, ctx).chi_rho, 2e-7, 2e-7 * 1e-9);
}

TEST(FitChiRho, SingleRowIsExact) {
    const auto f = fit_chi_rho({{100.0, 1e-3}}, RateModel{}, RateChannel::GammaUp);
    EXPECT_EQ(f.residual_norm, 0.0);
    EXPECT_FALSE(f.std_err.has_value());
    RateModel check;
    check.chi_rho = f.chi_rho;
    EXPECT_NEAR(gamma_up(100.0, check), 1e-3, 1e-15);
    EXPECT_THROW(fit_chi_rho({{100.0, 0.0}}, RateModel{}, RateChannel::GammaUp), ValidationError);
}

TEST(FitChiRho, ExponentModelSelection) {
    RateModel truth;
    truth.dos_exponent = 1.9;
    std::vector<RateObservation> obs;
    std::vector<double> logd;
    for (double d = 20; d <= 800; d *= 1.25) {
        obs.push_back({d, gamma_up(d, truth)});
        logd.push_back(std::log(d));
    }
    const auto right = fit_chi_rho(obs, truth, RateChannel::GammaUp);
    RateModel wrong = truth;
    wrong.dos_exponent = 3.0;
    const auto bad = fit_chi_rho(obs, wrong, RateChannel::GammaUp);
    EXPECT_LT(right.residual_norm, 1e-9);
    // The wrong exponent leaves residuals that track log(delta) exactly.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logd.size(); ++i) {
        mx += logd[i];
        my += bad.log_residuals[i];
    }
    mx /= logd.size();
    my /= logd.size();
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < logd.size(); ++i) {
        sxy += (logd[i] - mx) * (bad.log_residuals[i] - my);
        sxx += (logd[i] - mx) * (logd[i] - mx);
        syy += (bad.log_residuals[i] - my) * (bad.log_residuals[i] - my);
    }
    EXPECT_LT(sxy / std::sqrt(sxx * syy), -0.999);
    EXPECT_GT(bad.residual_norm, 1.0);
}

TEST(RateModel, Validation) {
    RateModel m;
    m.dos_exponent = 5.0;
    EXPECT_THROW(m.validate(), ValidationError);
    m.dos_exponent = 3.0;
    m.temperature = 0.0;
    EXPECT_THROW(m.validate(), ValidationError);
}
