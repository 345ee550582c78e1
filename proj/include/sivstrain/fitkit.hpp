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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sivstrain/error.hpp"
#include "sivstrain/levels.hpp"
#include "sivstrain/spectra.hpp"
#include "sivstrain/tensorframes.hpp"

namespace sivstrain::fit {

/// Diamond elastic constants, GPa. Defaults are standard literature values.
struct ElasticModuli {
    double c11 = 1076.0;
    double c12 = 125.0;
    double c44 = 577.0;

    void validate() const;
};

/// Stress-response coefficients, GHz/GPa.
struct HughesRunciman {
    double a1 = 0.0;
    double a2 = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Strain susceptibilities implied by a set of stress-response coefficients.
levels::Susceptibilities susceptibilities_from(const HughesRunciman& hr, const ElasticModuli& moduli);
/// Inverse of susceptibilities_from.
HughesRunciman hughes_runciman_from(const levels::Susceptibilities& sus, const ElasticModuli& moduli);

/// f from d and the B coefficient: C = (d - (c11-c12) B)/c44, f = sqrt2 (c44 C - 2 (c11-c12) B).
double derive_f(double d, double hr_b, const ElasticModuli& moduli);

struct LinearFit {
    double slope = 0.0;
    double slope_std_err = 0.0;
    double intercept = 0.0;
    double intercept_std_err = 0.0;
    double residual_norm = 0.0;
    std::vector<std::string> warnings;
};

struct NonlinearFit {
    double value = 0.0;
    double std_err = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

struct LmOptions {
    double relative_step_tol = 1e-9;
    int max_iterations = 200;
};

/// Observables of a zero-field A/B/C/D row.
struct RowObservables {
    double mean_zpl;
    double delta_gs;
    double delta_es;
};
RowObservables observables(const SpectraRow& row);

/// Rotates every row's strain into the defect frame of `o`.
SpectraSeries to_defect_frame(const SpectraSeries& series, frames::Orientation o);

/// OLS slope of mean ZPL against eps_zz; the intercept estimates zpl0.
LinearFit fit_t_parallel_diff(const SpectraSeries& axial);

/// Levenberg-Marquardt fit of delta = sqrt(lambda^2 + 4 d^2 eps_perp^2).
NonlinearFit fit_d(const SpectraSeries& transverse, levels::Manifold manifold, double lambda_so,
                   const LmOptions& options = {});

/// OLS slope of (ZPL - t_par_diff eps_zz) against (eps_xx + eps_yy).
LinearFit fit_t_perp_diff(const SpectraSeries& transverse, double t_par_diff);

/// Error raised by full_extraction, tagged with the failing stage (1-4).
class StageError : public Error {
  public:
    StageError(int stage, const std::string& what)
        : Error("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
    int stage() const noexcept { return stage_; }

  private:
    int stage_;
};

struct ParameterEstimate {
    std::string parameter;
    double value = 0.0;            // GHz/strain
    std::optional<double> std_err;
    int stage = 0;
    double residual_norm = 0.0;
};

struct ExtractionResult {
    levels::LevelModel model;
    std::vector<ParameterEstimate> estimates;
    std::vector<std::string> diagnostics;

    const ParameterEstimate& estimate(const std::string& name) const;
};

/// Staged extraction: t_par diff, then d_g/d_u, then t_perp diff, then f_g/f_u.
/// Series strains must already be in their defect frames.
ExtractionResult full_extraction(const std::optional<SpectraSeries>& axial,
                                 const std::optional<SpectraSeries>& transverse, double hr_b_gs,
                                 double hr_b_es, const ElasticModuli& moduli,
                                 const levels::LevelModel& base = {});

/// Zero-field A/B/C/D spectra for defect-frame strains, with optional Gaussian
/// line jitter (sigma in GHz) drawn from a generator seeded with `seed`.
SpectraSeries synthesize_spectra(const levels::LevelModel& model, const std::vector<double>& controls,
                                 const std::vector<frames::StrainTensor>& strains,
                                 double noise_sigma = 0.0, std::uint64_t seed = 0);

/// Strain design behind the bundled synthetic fixtures. Profiles are
/// defect-frame components per unit scale; the scale grows as (V/V_max)^2.
/// The axial profile keeps eps_xx + eps_yy = 0 and the transverse profile has
/// no zx/yz shear, so every extraction stage is exact on noiseless data.
struct SyntheticDesign {
    frames::Orientation axial_orientation = frames::Orientation::k111;
    frames::Orientation transverse_orientation = frames::Orientation::kBar111;
    frames::StrainTensor::Components axial_profile{0.03, -0.03, 1.0, 0.45, 0.0, 0.0};
    frames::StrainTensor::Components transverse_profile{-0.12, 1.0, -0.08, 0.0, 0.0, 0.06};
    double axial_max_scale = 1e-4;
    double transverse_max_scale = 2e-4;
    double volts_max = 100.0;
    int rows = 41;
};

struct SyntheticPair {
    SpectraSeries axial;       // defect-frame strains
    SpectraSeries transverse;
};

/// Both series for `design`; each line gets independent jitter when noise_sigma > 0.
SyntheticPair synthesize_pair(const levels::LevelModel& model, const SyntheticDesign& design = {},
                              double noise_sigma = 0.0, std::uint64_t seed = 0);

}  // namespace sivstrain::fit
