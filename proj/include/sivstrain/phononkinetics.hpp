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
#include <vector>

namespace sivstrain::phonon {

/// Boltzmann constant over Planck constant, GHz/K (exact SI ratio).
inline constexpr double kBoltzmannOverPlanckGhzPerK = 1.380649e-23 / 6.62607015e-34 * 1e-9;

/// Phonon-bath parameters shared by every rate formula.
///
/// chi_rho is in model units such that rate[GHz] = 2 pi chi_rho delta[GHz]^n occupation.
struct RateModel {
    double temperature = 4.0;     // K
    double chi_rho = 1e-7;
    double dos_exponent = 3.0;    // 1.9 for the cantilever geometry
    /// Use dos_exponent instead of 3 in the single-phonon spin channel.
    bool geometry_corrected = false;

    void validate() const;
    double thermal_frequency() const { return kBoltzmannOverPlanckGhzPerK * temperature; }
};

/// Spin-mixing ratios relative to d_g, both in [0, 1].
struct SpinFlipFactors {
    double d_flip_over_d = 0.0;
    double d_spin_over_d = 0.0;

    void validate() const;
    /// First-order model c / delta_gs for both ratios, clipped at 1.
    static SpinFlipFactors inverse_delta(double c_ghz, double delta_gs);
};

/// Bose-Einstein occupation 1 / (exp(h nu / kT) - 1).
double n_th(double nu_ghz, double temperature_k);

double gamma_up(double delta, const RateModel& m);
double gamma_down(double delta, const RateModel& m);
/// gamma_up plus an additive floor for the secondary dephasing mechanism.
double dephasing_rate(double delta, const RateModel& m, double floor = 0.0);

struct SpinT1Rates {
    double single = 0.0;
    double orbach = 0.0;
    double offres = 0.0;
    double total = 0.0;
};

SpinT1Rates spin_t1_rates(double omega_s, double delta_gs, const RateModel& m,
                          const SpinFlipFactors& factors);

enum class RateChannel { GammaUp, GammaDown, Orbach, SinglePhonon, OffResonant };

struct RateObservation {
    double delta_gs;  // GHz
    double rate;      // GHz
};

/// Everything a channel needs besides chi_rho and delta_gs.
struct ChannelContext {
    double omega_s = 0.0;             // GHz, single and off-resonant channels
    double flip_constant_ghz = 0.0;   // c in d_flip/d = c/delta_gs
};

struct ChiRhoFit {
    double chi_rho = 0.0;
    std::optional<double> std_err;    // empty for a single observation
    std::vector<double> log_residuals;
    double residual_norm = 0.0;
};

/// Rate of `channel` at chi_rho = value; used by the fit and the rates CLI.
double channel_rate(RateChannel channel, double delta_gs, const RateModel& m,
                    const ChannelContext& ctx);

/// One-parameter least squares in log space.
ChiRhoFit fit_chi_rho(const std::vector<RateObservation>& observed, const RateModel& model,
                      RateChannel channel, const ChannelContext& ctx = {});

}  // namespace sivstrain::phonon
