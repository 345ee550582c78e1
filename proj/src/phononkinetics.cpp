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

#include "sivstrain/phononkinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sivstrain/error.hpp"

namespace sivstrain::phonon {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

void RateModel::validate() const {
    require_positive(temperature, "temperature");
    if (!(chi_rho >= 0.0) || !std::isfinite(chi_rho)) throw ValidationError("chi_rho must be >= 0");
    if (!(dos_exponent >= 1.0 && dos_exponent <= 4.0)) {
        throw ValidationError("density-of-states exponent must lie in [1, 4]");
    }
}

void SpinFlipFactors::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(d_flip_over_d) || !in_unit(d_spin_over_d)) {
        throw ValidationError("spin-flip factors must lie in [0, 1]");
    }
}

SpinFlipFactors SpinFlipFactors::inverse_delta(double c_ghz, double delta_gs) {
    require_positive(delta_gs, "delta_gs");
    if (c_ghz < 0.0) throw ValidationError("flip constant must be non-negative");
    const double r = std::min(1.0, c_ghz / delta_gs);
    return {r, r};
}

double n_th(double nu_ghz, double temperature_k) {
    require_positive(nu_ghz, "phonon frequency");
    require_positive(temperature_k, "temperature");
    const double x = nu_ghz / (kBoltzmannOverPlanckGhzPerK * temperature_k);
    return 1.0 / std::expm1(x);
}

double gamma_up(double delta, const RateModel& m) {
    require_positive(delta, "splitting");
    m.validate();
    return 2.0 * kPi * m.chi_rho * std::pow(delta, m.dos_exponent) * n_th(delta, m.temperature);
}

double gamma_down(double delta, const RateModel& m) {
    require_positive(delta, "splitting");
    m.validate();
    return 2.0 * kPi * m.chi_rho * std::pow(delta, m.dos_exponent) *
           (n_th(delta, m.temperature) + 1.0);
}

double dephasing_rate(double delta, const RateModel& m, double floor) {
    if (!(floor >= 0.0)) throw ValidationError("dephasing floor must be >= 0");
    return gamma_up(delta, m) + floor;
}

SpinT1Rates spin_t1_rates(double omega_s, double delta_gs, const RateModel& m,
                          const SpinFlipFactors& factors) {
    require_positive(omega_s, "spin frequency");
    require_positive(delta_gs, "delta_gs");
    m.validate();
    factors.validate();

    const double single_exp = m.geometry_corrected ? m.dos_exponent : 3.0;
    const double kt = m.thermal_frequency();
    const double flip2 = factors.d_flip_over_d * factors.d_flip_over_d;
    const double spin2 = factors.d_spin_over_d * factors.d_spin_over_d;

    SpinT1Rates r;
    r.single = 2.0 * kPi * spin2 * m.chi_rho * std::pow(omega_s, single_exp) * n_th(omega_s, m.temperature);
    r.orbach = 4.0 * flip2 * gamma_up(delta_gs, m);
    r.offres = 8.0 * kPi * kPi * kPi * flip2 * m.chi_rho * m.chi_rho * omega_s * omega_s * kt * kt * kt;
    r.total = r.single + r.orbach + r.offres;
    return r;
}

double channel_rate(RateChannel channel, double delta_gs, const RateModel& m, const ChannelContext& ctx) {
    switch (channel) {
        case RateChannel::GammaUp: return gamma_up(delta_gs, m);
        case RateChannel::GammaDown: return gamma_down(delta_gs, m);
        default: break;
    }
    const auto factors = SpinFlipFactors::inverse_delta(ctx.flip_constant_ghz, delta_gs);
    const auto rates = spin_t1_rates(ctx.omega_s, delta_gs, m, factors);
    if (channel == RateChannel::Orbach) return rates.orbach;
    if (channel == RateChannel::SinglePhonon) return rates.single;
    return rates.offres;
}

ChiRhoFit fit_chi_rho(const std::vector<RateObservation>& observed, const RateModel& model,
                      RateChannel channel, const ChannelContext& ctx) {
    if (observed.empty()) throw ValidationError("fit_chi_rho needs at least one observation");
    const double power = channel == RateChannel::OffResonant ? 2.0 : 1.0;

    RateModel unit = model;
    unit.chi_rho = 1.0;
    std::vector<double> offsets;
    offsets.reserve(observed.size());
    for (const auto& row : observed) {
        if (!(row.rate > 0.0)) throw ValidationError("observed rates must be positive");
        const double base = channel_rate(channel, row.delta_gs, unit, ctx);
        if (!(base > 0.0)) throw IllConditionedError("channel rate vanishes at an observation");
        offsets.push_back(std::log(row.rate) - std::log(base));
    }
    const double n = static_cast<double>(offsets.size());
    double mean = 0.0;
    for (double o : offsets) mean += o;
    mean /= n;

    ChiRhoFit fit;
    const double log_chi = mean / power;
    fit.chi_rho = std::exp(log_chi);
    double ss = 0.0;
    for (double o : offsets) {
        const double r = o - mean;
        fit.log_residuals.push_back(r);
        ss += r * r;
    }
    fit.residual_norm = std::sqrt(ss);
    if (offsets.size() > 1) {
        const double sigma = std::sqrt(ss / (n - 1.0));
        fit.std_err = fit.chi_rho * sigma / (power * std::sqrt(n));
    }
    return fit;
}

}  // namespace sivstrain::phonon
