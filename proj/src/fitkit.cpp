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

#include "sivstrain/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <random>

namespace sivstrain::fit {

using frames::StrainTensor;
using levels::Manifold;

namespace {

constexpr double kMinControlSpan = 1e-8;

bool finite(double v) { return std::isfinite(v); }

void require_rows(const SpectraSeries& s, const char* what) {
    if (s.rows.size() < 3) {
        throw IllConditionedError(std::string(what) + ": underdetermined, need at least 3 rows, got " +
                                  std::to_string(s.rows.size()));
    }
    s.validate();
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& r = s.rows[i];
        if (!r.strain) {
            throw ValidationError(std::string(what) + ": row " + std::to_string(i) + " carries no strain");
        }
        if (r.strain->frame().kind() != frames::Frame::Kind::Defect) {
            throw FrameMismatchError(std::string(what) + ": strain must be in a defect frame");
        }
    }
}

double span(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - out.intercept - out.slope * x[i];
        rss += r * r;
    }
    out.residual_norm = std::sqrt(rss);
    const double s2 = x.size() > 2 ? rss / (n - 2.0) : 0.0;
    out.slope_std_err = std::sqrt(s2 / sxx);
    out.intercept_std_err = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return out;
}

double eps_perp(const StrainTensor& e) {
    const double a = e.xx() - e.yy();
    return std::sqrt(a * a + 4.0 * e.xy() * e.xy());
}

}  // namespace

void ElasticModuli::validate() const {
    if (!finite(c11) || !finite(c12) || !finite(c44)) throw ValidationError("elastic moduli must be finite");
    if (!(c12 > 0.0) || !(c11 > c12)) throw ValidationError("elastic moduli require c11 > c12 > 0");
    if (!(c44 > 0.0)) throw ValidationError("elastic moduli require c44 > 0");
}

levels::Susceptibilities susceptibilities_from(const HughesRunciman& hr, const ElasticModuli& m) {
    m.validate();
    const double bulk = m.c11 + 2.0 * m.c12;
    const double x = m.c11 - m.c12;
    return {bulk * hr.a1 - m.c44 * hr.a2, bulk * hr.a1 + 2.0 * m.c44 * hr.a2, x * hr.b + m.c44 * hr.c,
            std::sqrt(2.0) * (m.c44 * hr.c - 2.0 * x * hr.b)};
}

HughesRunciman hughes_runciman_from(const levels::Susceptibilities& s, const ElasticModuli& m) {
    m.validate();
    const double bulk = m.c11 + 2.0 * m.c12;
    const double x = m.c11 - m.c12;
    HughesRunciman hr;
    hr.a2 = (s.t_par - s.t_perp) / (3.0 * m.c44);
    hr.a1 = (s.t_perp + m.c44 * hr.a2) / bulk;
    hr.b = (s.d - s.f / std::sqrt(2.0)) / (3.0 * x);
    hr.c = (s.d - x * hr.b) / m.c44;
    return hr;
}

double derive_f(double d, double hr_b, const ElasticModuli& m) {
    m.validate();
    if (!finite(d) || !finite(hr_b)) throw ValidationError("derive_f: inputs must be finite");
    const double x = m.c11 - m.c12;
    const double c = (d - x * hr_b) / m.c44;
    return std::sqrt(2.0) * (m.c44 * c - 2.0 * x * hr_b);
}

RowObservables observables(const SpectraRow& row) {
    auto get = [&](const char* k) {
        auto it = row.lines.find(k);
        if (it == row.lines.end()) throw SchemaError(std::string("missing line ") + k, 0);
        return it->second;
    };
    const double a = get("A"), b = get("B"), c = get("C"), d = get("D");
    return {(a + b + c + d) / 4.0, ((a - b) + (c - d)) / 2.0, ((a - c) + (b - d)) / 2.0};
}

SpectraSeries to_defect_frame(const SpectraSeries& series, frames::Orientation o) {
    SpectraSeries out = series;
    const auto target = frames::Frame::defect(o);
    for (auto& r : out.rows) {
        if (r.strain) r.strain = frames::transform_strain(*r.strain, target);
    }
    return out;
}

LinearFit fit_t_parallel_diff(const SpectraSeries& axial) {
    if (axial.family != LineFamily::ABCD) throw ValidationError("fit_t_parallel_diff: needs A/B/C/D lines");
    require_rows(axial, "fit_t_parallel_diff");
    std::vector<double> x, y, trace;
    for (const auto& r : axial.rows) {
        x.push_back(r.strain->zz());
        trace.push_back(r.strain->xx() + r.strain->yy());
        y.push_back(observables(r).mean_zpl);
    }
    if (span(x) < kMinControlSpan) {
        throw IllConditionedError("fit_t_parallel_diff: eps_zz span below 1e-8");
    }
    LinearFit out = ols(x, y);
    const double contamination = span(trace);
    if (contamination > 0.0 && span(x) / contamination < 10.0) {
        out.warnings.push_back("eps_zz does not dominate eps_xx+eps_yy (ratio < 10); slope is biased by t_perp");
    }
    return out;
}

NonlinearFit fit_d(const SpectraSeries& transverse, Manifold manifold, double lambda_so,
                   const LmOptions& options) {
    if (transverse.family != LineFamily::ABCD) throw ValidationError("fit_d: needs A/B/C/D lines");
    if (!(lambda_so > 0.0) || !finite(lambda_so)) throw ValidationError("fit_d: lambda must be positive");
    require_rows(transverse, "fit_d");
    std::vector<double> x, y;
    for (const auto& r : transverse.rows) {
        const auto obs = observables(r);
        x.push_back(eps_perp(*r.strain));
        y.push_back(manifold == Manifold::Ground ? obs.delta_gs : obs.delta_es);
    }
    const std::size_t imax = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
    if (!(x[imax] > 1e-12)) throw IllConditionedError("fit_d: eps_perp span is zero");

    const double l2 = lambda_so * lambda_so;
    auto rss_at = [&](double d) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - std::sqrt(l2 + 4.0 * d * d * x[i] * x[i]);
            s += r * r;
        }
        return s;
    };

    double d = (y[imax] - lambda_so) / (2.0 * x[imax]);
    if (!(d > 0.0)) {
        d = std::sqrt(std::max(y[imax] * y[imax] - l2, 0.0)) / (2.0 * x[imax]);
        if (!(d > 0.0)) d = lambda_so / x[imax];
    }

    double mu = 1e-3;
    double rss = rss_at(d);
    double jtj = 0;
    int it = 0;
    for (;; ++it) {
        if (it >= options.max_iterations) {
            throw ConvergenceError("fit_d: no convergence after " + std::to_string(options.max_iterations) +
                                   " iterations");
        }
        double jtr = 0;
        jtj = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double m = std::sqrt(l2 + 4.0 * d * d * x[i] * x[i]);
            const double j = 4.0 * d * x[i] * x[i] / m;
            jtj += j * j;
            jtr += j * (y[i] - m);
        }
        if (jtj == 0.0) throw IllConditionedError("fit_d: zero Jacobian");
        bool accepted = false;
        double step = 0;
        for (int k = 0; k < 60 && !accepted; ++k) {
            step = jtr / (jtj * (1.0 + mu));
            const double trial = rss_at(d + step);
            if (trial <= rss) {
                d += step;
                rss = trial;
                mu = std::max(mu / 10.0, 1e-12);
                accepted = true;
            } else {
                mu *= 10.0;
            }
        }
        if (!accepted || std::abs(step) <= options.relative_step_tol * std::abs(d)) break;
    }

    NonlinearFit out;
    out.value = std::abs(d);
    out.iterations = it + 1;
    out.residual_norm = std::sqrt(rss);
    const double dof = static_cast<double>(x.size()) - 1.0;
    out.std_err = std::sqrt(rss / dof / jtj);
    return out;
}

LinearFit fit_t_perp_diff(const SpectraSeries& transverse, double t_par_diff) {
    if (transverse.family != LineFamily::ABCD) throw ValidationError("fit_t_perp_diff: needs A/B/C/D lines");
    if (!finite(t_par_diff)) throw ValidationError("fit_t_perp_diff: t_par_diff must be finite");
    require_rows(transverse, "fit_t_perp_diff");
    std::vector<double> x, y;
    for (const auto& r : transverse.rows) {
        x.push_back(r.strain->xx() + r.strain->yy());
        y.push_back(observables(r).mean_zpl - t_par_diff * r.strain->zz());
    }
    if (span(x) < kMinControlSpan) {
        throw IllConditionedError("fit_t_perp_diff: eps_xx+eps_yy span below 1e-8");
    }
    return ols(x, y);
}

const ParameterEstimate& ExtractionResult::estimate(const std::string& name) const {
    for (const auto& e : estimates) {
        if (e.parameter == name) return e;
    }
    throw ValidationError("no estimate named " + name);
}

ExtractionResult full_extraction(const std::optional<SpectraSeries>& axial,
                                 const std::optional<SpectraSeries>& transverse, double hr_b_gs,
                                 double hr_b_es, const ElasticModuli& moduli, const levels::LevelModel& base) {
    base.validate();
    ExtractionResult res;
    res.model = base;

    auto run = [](int stage, auto&& fn) {
        try {
            return fn();
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
    };

    if (!axial) throw StageError(1, "axial series missing");
    const LinearFit par = run(1, [&] { return fit_t_parallel_diff(*axial); });
    res.estimates.push_back({"t_par_diff", par.slope, par.slope_std_err, 1, par.residual_norm});
    res.diagnostics.push_back("stage 1: zpl0 = " + std::to_string(par.intercept) + " GHz");
    for (const auto& w : par.warnings) res.diagnostics.push_back("stage 1: " + w);

    if (!transverse) throw StageError(2, "transverse series missing");
    const NonlinearFit dg = run(2, [&] { return fit_d(*transverse, Manifold::Ground, base.lambda_so_gs); });
    const NonlinearFit du = run(2, [&] { return fit_d(*transverse, Manifold::Excited, base.lambda_so_es); });
    res.estimates.push_back({"d_g", dg.value, dg.std_err, 2, dg.residual_norm});
    res.estimates.push_back({"d_u", du.value, du.std_err, 2, du.residual_norm});
    res.diagnostics.push_back("stage 2: LM iterations gs=" + std::to_string(dg.iterations) +
                              " es=" + std::to_string(du.iterations));

    const LinearFit perp = run(3, [&] { return fit_t_perp_diff(*transverse, par.slope); });
    res.estimates.push_back({"t_perp_diff", perp.slope, perp.slope_std_err, 3, perp.residual_norm});
    res.diagnostics.push_back("stage 3: transverse intercept = " + std::to_string(perp.intercept) + " GHz");

    const double fg = run(4, [&] { return derive_f(dg.value, hr_b_gs, moduli); });
    const double fu = run(4, [&] { return derive_f(du.value, hr_b_es, moduli); });
    res.estimates.push_back({"f_g", fg, std::nullopt, 4, 0.0});
    res.estimates.push_back({"f_u", fu, std::nullopt, 4, 0.0});

    res.model.sus_gs = {0.0, 0.0, dg.value, fg};
    res.model.sus_es = {perp.slope, par.slope, du.value, fu};
    res.model.zpl0 = par.intercept;
    return res;
}

SpectraSeries synthesize_spectra(const levels::LevelModel& model, const std::vector<double>& controls,
                                 const std::vector<StrainTensor>& strains, double noise_sigma,
                                 std::uint64_t seed) {
    if (controls.size() != strains.size()) throw ValidationError("synthesize_spectra: size mismatch");
    if (!(noise_sigma >= 0.0) || !finite(noise_sigma)) {
        throw ValidationError("synthesize_spectra: noise sigma must be finite and >= 0");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
    SpectraSeries out;
    out.family = LineFamily::ABCD;
    for (std::size_t i = 0; i < controls.size(); ++i) {
        const frames::MagneticField zero_field{frames::Vec3::Zero(), strains[i].frame()};
        SpectraRow row;
        row.control = controls[i];
        row.strain = strains[i];
        for (const auto& line : levels::optical_spectrum(model, strains[i], zero_field)) {
            double f = line.frequency;
            if (noise_sigma > 0.0) f += jitter(rng);
            row.lines[std::string(levels::to_string(line.label))] = f;
        }
        out.rows.push_back(std::move(row));
    }
    out.validate();
    return out;
}

SyntheticPair synthesize_pair(const levels::LevelModel& model, const SyntheticDesign& design,
                              double noise_sigma, std::uint64_t seed) {
    if (design.rows < 3 || !(design.volts_max > 0.0)) throw ValidationError("synthetic design needs >= 3 rows");
    auto build = [&](frames::Orientation o, const StrainTensor::Components& profile, double max_scale,
                     std::uint64_t s) {
        std::vector<double> controls;
        std::vector<StrainTensor> strains;
        for (int i = 0; i < design.rows; ++i) {
            const double v = design.volts_max * i / (design.rows - 1);
            const double k = max_scale * (v / design.volts_max) * (v / design.volts_max);
            StrainTensor::Components c{};
            for (int j = 0; j < 6; ++j) c[j] = profile[j] * k;
            controls.push_back(v);
            strains.emplace_back(c, frames::Frame::defect(o));
        }
        return synthesize_spectra(model, controls, strains, noise_sigma, s);
    };
    // Distinct streams for the two series from one seed.
    std::seed_seq seq{seed, std::uint64_t{0x5eed}};
    std::array<std::uint64_t, 2> streams{};
    seq.generate(streams.begin(), streams.end());
    return {build(design.axial_orientation, design.axial_profile, design.axial_max_scale, streams[0]),
            build(design.transverse_orientation, design.transverse_profile, design.transverse_max_scale, streams[1])};
}

}  // namespace sivstrain::fit
