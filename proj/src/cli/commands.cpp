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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "sivstrain/format.hpp"

namespace sivstrain::cli {

using nlohmann::json;

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

std::string format_output(const std::string& command, const RunConfig& cfg, const Table& t,
                          const std::string& fmt) {
    std::ostringstream os;
    if (fmt == "json") {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json row = json::array();
            for (const auto& c : r) {
                if (std::holds_alternative<double>(c)) {
                    row.push_back(std::get<double>(c));
                } else {
                    row.push_back(std::get<std::string>(c));
                }
            }
            rows.push_back(std::move(row));
        }
        json doc = {{"command", command}, {"config_echo", to_json(cfg)}, {"columns", t.columns}, {"rows", rows}};
        if (!t.metadata.empty()) {
            json meta = json::object();
            for (const auto& [k, v] : t.metadata) meta[k] = v;
            doc["metadata"] = meta;
        }
        os << doc.dump(2) << '\n';
        return os.str();
    }
    os << "# config: " << to_json(cfg).dump() << '\n';
    for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (std::holds_alternative<double>(r[i])) {
                os << format_number(std::get<double>(r[i]));
            } else {
                os << std::get<std::string>(r[i]);
            }
        }
        os << '\n';
    }
    return os.str();
}

frames::Frame defect_frame(const RunConfig& cfg) { return frames::Frame::defect(cfg.orientation); }

frames::MagneticField defect_field(const RunConfig& cfg) { return frames::transform_field(cfg.field, defect_frame(cfg)); }

bool has_field(const RunConfig& cfg) { return cfg.field.tesla.norm() > 0.0; }

struct OperatingPoint {
    levels::SymmetryStrain gs;
    levels::SymmetryStrain es;
    frames::MagneticField b;  // defect frame
};

OperatingPoint point_from_strain(const RunConfig& cfg, const frames::StrainTensor& eps) {
    const auto d = frames::transform_strain(eps, defect_frame(cfg));
    return {levels::project_strain(d, cfg.model.sus_gs, cfg.model.shear_pairing),
            levels::project_strain(d, cfg.model.sus_es, cfg.model.shear_pairing), defect_field(cfg)};
}

/// Pure E_gx ground-state strain giving the requested branch splitting; the
/// excited state follows with the ratio of d susceptibilities.
OperatingPoint point_from_delta_gs(const RunConfig& cfg, double delta_gs) {
    const double lam = cfg.model.lambda_so_gs;
    if (!(delta_gs >= lam)) throw ValidationError("delta_gs must be >= the ground-state spin-orbit splitting");
    OperatingPoint p;
    p.gs.egx = 0.5 * std::sqrt(delta_gs * delta_gs - lam * lam);
    const double dg = cfg.model.sus_gs.d;
    p.es.egx = dg != 0.0 ? p.gs.egx * cfg.model.sus_es.d / dg : 0.0;
    p.b = defect_field(cfg);
    return p;
}

std::vector<double> grid(const SweepConfig& s) {
    std::vector<double> xs(static_cast<std::size_t>(s.steps));
    for (int i = 0; i < s.steps; ++i) {
        xs[static_cast<std::size_t>(i)] = s.steps == 1 ? s.start : s.start + (s.stop - s.start) * i / (s.steps - 1);
    }
    return xs;
}

/// Evaluates fn over xs in parallel chunks; results keep the input order.
template <typename Fn>
std::vector<std::vector<Cell>> parallel_rows(const std::vector<double>& xs, Fn fn) {
    std::vector<std::vector<Cell>> rows(xs.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    const std::size_t chunk = (xs.size() + workers - 1) / workers;
    std::vector<std::future<void>> jobs;
    for (std::size_t lo = 0; lo < xs.size(); lo += chunk) {
        const std::size_t hi = std::min(xs.size(), lo + chunk);
        jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) rows[i] = fn(xs[i]);
        }));
    }
    for (auto& j : jobs) j.get();
    return rows;
}

coupling::CouplingOptions coupling_options(const RunConfig& cfg) {
    coupling::CouplingOptions opt;
    opt.ac_channel = cfg.coupling.ac_channel;
    opt.microwave_axis = cfg.coupling.microwave_axis;
    return opt;
}

Table cmd_spectrum(const RunConfig& cfg) {
    const auto p = point_from_strain(cfg, cfg.strain);
    Table t{{"label", "frequency_ghz", "gs_index", "es_index"}, {}, {}};
    for (const auto& l : levels::optical_spectrum(cfg.model, p.gs, p.es, p.b)) {
        t.rows.push_back({std::string(levels::to_string(l.label)), l.frequency, double(l.gs_index), double(l.es_index)});
    }
    return t;
}

Table cmd_sweep(const RunConfig& cfg) {
    const auto& var = cfg.sweep.variable;
    std::optional<device::StrainTrajectory> traj;
    if (var == "voltage" && cfg.trajectory) traj = device::load_strain_trajectory(*cfg.trajectory);
    if (var == "field_tesla" && !(cfg.sweep.start > 0.0 && cfg.sweep.stop > 0.0)) {
        throw ConfigError("field_tesla sweeps need positive start and stop");
    }
    if (var == "field_tesla" && !has_field(cfg)) throw ConfigError("field_tesla sweeps need a field direction");
    const bool spin = has_field(cfg);
    const frames::Vec3 b_dir = spin ? frames::Vec3(cfg.field.tesla.normalized()) : frames::Vec3::Zero();

    auto point_at = [&](double x) {
        if (var == "voltage") {
            return point_from_strain(cfg, traj ? traj->strain_at(x) : device::surrogate_strain(x, cfg.beam));
        }
        if (var == "strain_scale") return point_from_strain(cfg, cfg.strain.scaled(x));
        if (var == "delta_gs") return point_from_delta_gs(cfg, x);
        RunConfig scaled = cfg;
        scaled.field.tesla = b_dir * x;
        return point_from_strain(scaled, cfg.strain);
    };

    Table t;
    t.columns = {"control", "delta_gs", "delta_es", "mean_zpl"};
    const auto probe = levels::optical_spectrum(cfg.model, levels::SymmetryStrain{}, levels::SymmetryStrain{},
                                                point_at(cfg.sweep.start).b);
    for (const auto& l : probe) t.columns.push_back(std::string(levels::to_string(l.label)));
    if (spin) {
        for (const char* c : {"omega_s", "d_spin_over_dg", "d_flip_over_dg", "t_spin_over_dg", "g_microwave"}) {
            t.columns.push_back(c);
        }
    }
    const auto opt = coupling_options(cfg);
    const double dg = cfg.model.sus_gs.d;
    t.rows = parallel_rows(grid(cfg.sweep), [&](double x) {
        const auto p = point_at(x);
        std::vector<Cell> row{x, levels::orbital_splitting(p.gs, cfg.model.lambda_so_gs),
                              levels::orbital_splitting(p.es, cfg.model.lambda_so_es),
                              levels::mean_zpl(cfg.model, p.gs, p.es)};
        for (const auto& l : levels::optical_spectrum(cfg.model, p.gs, p.es, p.b)) row.push_back(l.frequency);
        if (spin) {
            row.push_back(coupling::qubit_pair(cfg.model, p.gs, p.b).omega_s());
            row.push_back(coupling::d_spin_exact(cfg.model, p.gs, p.b, opt) / dg);
            row.push_back(coupling::d_flip_exact(cfg.model, p.gs, p.b, opt));
            row.push_back(coupling::t_spin(cfg.model, p.gs, p.b, opt) / dg);
            row.push_back(coupling::microwave_g_factor(cfg.model, p.gs, p.b, opt));
        }
        return row;
    });
    return t;
}

double flip_constant(const RunConfig& cfg) {
    if (cfg.rate.flip_constant_ghz) return *cfg.rate.flip_constant_ghz;
    const auto b = defect_field(cfg).tesla;
    return 2.0 * cfg.model.gamma_s * std::hypot(b.x(), b.y());
}

Table cmd_rates(const RunConfig& cfg) {
    if (cfg.sweep.variable != "delta_gs") throw ConfigError("rates sweeps require sweep.variable = delta_gs");
    if (!cfg.rate.omega_s_ghz && !has_field(cfg)) {
        throw ConfigError("rates need rate.omega_s_ghz or a nonzero field");
    }
    const double c = flip_constant(cfg);
    const auto& m = cfg.rate.model;
    Table t{{"delta_ghz", "n_th", "gamma_up", "gamma_down", "dephasing", "omega_s", "t1_single", "t1_orbach",
             "t1_offres", "t1_total"},
            {},
            {{"units", "GHz; rate = 2 pi chi_rho delta^n occupation with delta in GHz"},
             {"flip_model", "d_flip/d = d_spin/d = min(1, " + format_number(c) + " / delta_gs)"}}};
    t.rows = parallel_rows(grid(cfg.sweep), [&](double delta) {
        const double ws = cfg.rate.omega_s_ghz
                              ? *cfg.rate.omega_s_ghz
                              : coupling::qubit_pair(cfg.model, point_from_delta_gs(cfg, delta).gs, defect_field(cfg))
                                    .omega_s();
        const auto r = phonon::spin_t1_rates(ws, delta, m, phonon::SpinFlipFactors::inverse_delta(c, delta));
        return std::vector<Cell>{delta,
                                 phonon::n_th(delta, m.temperature),
                                 phonon::gamma_up(delta, m),
                                 phonon::gamma_down(delta, m),
                                 phonon::dephasing_rate(delta, m, cfg.rate.dephasing_floor_ghz),
                                 ws,
                                 r.single,
                                 r.orbach,
                                 r.offres,
                                 r.total};
    });
    return t;
}

Table cmd_coupling(const RunConfig& cfg) {
    const auto& cc = cfg.coupling;
    const auto& var = cfg.sweep.variable;
    if (var != "delta_gs" && var != "strain_scale" && var != "voltage") {
        throw ConfigError("coupling sweeps delta_gs, strain_scale or voltage");
    }
    if (!has_field(cfg)) throw ConfigError("coupling needs a nonzero static field");
    std::optional<device::StrainTrajectory> traj;
    if (var == "voltage" && cfg.trajectory) traj = device::load_strain_trajectory(*cfg.trajectory);
    const auto opt = coupling_options(cfg);

    Table t{{"static_strain", "delta_gs", "omega_s", "d_spin", "t_spin", "g_factor", "g_coupling", "cooperativity"},
            {},
            {{"cooperativity", "C = 4 g^2 / (kappa gamma_spin (n_th + 1)), kappa = omega_m / Q_m"},
             {"d_spin", cc.d_spin_override ? "override from config" : "exact, E_g AC strain between qubit states"}}};
    t.rows = parallel_rows(grid(cfg.sweep), [&](double x) {
        OperatingPoint p;
        if (var == "delta_gs") {
            p = point_from_delta_gs(cfg, x);
        } else if (var == "strain_scale") {
            p = point_from_strain(cfg, cfg.strain.scaled(x));
        } else {
            p = point_from_strain(cfg, traj ? traj->strain_at(x) : device::surrogate_strain(x, cfg.beam));
        }
        const double d_spin = cc.d_spin_override ? *cc.d_spin_override : coupling::d_spin_exact(cfg.model, p.gs, p.b, opt);
        const double g = coupling::spin_phonon_g(d_spin, cc.mode);
        return std::vector<Cell>{x,
                                 levels::orbital_splitting(p.gs, cfg.model.lambda_so_gs),
                                 coupling::qubit_pair(cfg.model, p.gs, p.b).omega_s(),
                                 d_spin,
                                 coupling::t_spin(cfg.model, p.gs, p.b, opt),
                                 coupling::microwave_g_factor(cfg.model, p.gs, p.b, opt),
                                 g,
                                 coupling::cooperativity(g, cc.mode, cc.gamma_spin_ghz)};
    });
    return t;
}

SpectraSeries load_fit_series(const FitInput& in, const RunConfig& cfg, std::mt19937_64& rng) {
    namespace fs = std::filesystem;
    if (in.spectra != "-" && !fs::exists(in.spectra)) throw InputNotFound("input not found: " + in.spectra);
    if (in.trajectory && !fs::exists(*in.trajectory)) throw InputNotFound("input not found: " + *in.trajectory);
    auto series = device::load_spectra(in.spectra);
    if (!series.has_strain()) {
        if (!in.trajectory) throw ConfigError("spectra without strain columns need a trajectory: " + in.spectra);
        const auto traj = device::load_strain_trajectory(*in.trajectory);
        for (auto& r : series.rows) r.strain = traj.strain_at(r.control);
    }
    if (cfg.fit.inject_noise_ghz > 0.0) {
        std::normal_distribution<double> jitter(0.0, cfg.fit.inject_noise_ghz);
        for (auto& r : series.rows) {
            for (auto& [k, v] : r.lines) v += jitter(rng);
        }
    }
    return fit::to_defect_frame(series, in.orientation);
}

json sus_json(const levels::Susceptibilities& s) {
    return {{"t_perp", s.t_perp}, {"t_par", s.t_par}, {"d", s.d}, {"f", s.f}};
}

std::string cmd_fit(const RunConfig& cfg, const std::string& fmt) {
    std::mt19937_64 rng(cfg.seed);
    std::optional<SpectraSeries> axial, transverse;
    if (cfg.fit.axial) axial = load_fit_series(*cfg.fit.axial, cfg, rng);
    if (cfg.fit.transverse) transverse = load_fit_series(*cfg.fit.transverse, cfg, rng);

    std::vector<fit::ParameterEstimate> estimates;
    std::vector<std::string> diagnostics;
    std::optional<levels::LevelModel> model;
    if (cfg.fit.stage == "full") {
        auto res = fit::full_extraction(axial, transverse, cfg.fit.hr_b_gs, cfg.fit.hr_b_es, cfg.moduli, cfg.model);
        estimates = res.estimates;
        diagnostics = res.diagnostics;
        model = res.model;
    } else if (cfg.fit.stage == "t_par") {
        if (!axial) throw ConfigError("stage t_par needs fit.axial");
        const auto r = fit::fit_t_parallel_diff(*axial);
        estimates.push_back({"t_par_diff", r.slope, r.slope_std_err, 1, r.residual_norm});
        estimates.push_back({"zpl0", r.intercept, r.intercept_std_err, 1, r.residual_norm});
        diagnostics = r.warnings;
    } else {
        if (!transverse) throw ConfigError("stage d needs fit.transverse");
        const auto g = fit::fit_d(*transverse, levels::Manifold::Ground, cfg.model.lambda_so_gs);
        const auto u = fit::fit_d(*transverse, levels::Manifold::Excited, cfg.model.lambda_so_es);
        estimates.push_back({"d_g", g.value, g.std_err, 2, g.residual_norm});
        estimates.push_back({"d_u", u.value, u.std_err, 2, u.residual_norm});
    }

    if (fmt == "csv") {
        Table t{{"parameter", "value", "std_err", "stage", "residual_norm"}, {}, {}};
        for (const auto& e : estimates) {
            t.rows.push_back({e.parameter, e.value, e.std_err ? Cell(*e.std_err) : Cell(std::string("")),
                              double(e.stage), e.residual_norm});
        }
        return format_output("fit", cfg, t, "csv");
    }
    json params = json::array();
    for (const auto& e : estimates) {
        params.push_back({{"name", e.parameter},
                          {"value", e.value},
                          {"std_err", e.std_err ? json(*e.std_err) : json(nullptr)},
                          {"stage", e.stage},
                          {"residual_norm", e.residual_norm}});
    }
    json doc = {{"command", "fit"}, {"config_echo", to_json(cfg)}, {"parameters", params}, {"diagnostics", diagnostics}};
    if (model) {
        doc["model"] = {{"sus_gs", sus_json(model->sus_gs)}, {"sus_es", sus_json(model->sus_es)}, {"zpl0", model->zpl0}};
    }
    return doc.dump(2) + "\n";
}

struct Failure {
    int code;
    std::string reason;
};

Failure classify(const std::exception& e) {
    if (dynamic_cast<const InputNotFound*>(&e)) return {2, "input-not-found"};
    if (dynamic_cast<const ConfigError*>(&e)) return {2, "invalid-config"};
    if (dynamic_cast<const SchemaError*>(&e)) return {2, "invalid-input"};
    if (dynamic_cast<const fit::StageError*>(&e)) return {1, "stage-failed"};
    if (dynamic_cast<const IllConditionedError*>(&e)) return {1, "ill-conditioned"};
    if (dynamic_cast<const ConvergenceError*>(&e)) return {1, "no-convergence"};
    if (dynamic_cast<const DegeneracyError*>(&e)) return {1, "degenerate"};
    if (dynamic_cast<const RangeError*>(&e)) return {1, "out-of-range"};
    if (dynamic_cast<const ValidationError*>(&e)) return {1, "validation-failed"};
    if (dynamic_cast<const Error*>(&e)) return {1, "computation-failed"};
    return {1, "internal-error"};
}

}  // namespace

std::string render(const std::string& command, const RunConfig& cfg) {
    const std::string fmt = cfg.format.empty() ? (command == "fit" ? "json" : "csv") : cfg.format;
    if (command == "fit") return cmd_fit(cfg, fmt);
    Table t;
    if (command == "spectrum") {
        t = cmd_spectrum(cfg);
    } else if (command == "sweep") {
        t = cmd_sweep(cfg);
    } else if (command == "rates") {
        t = cmd_rates(cfg);
    } else if (command == "coupling") {
        t = cmd_coupling(cfg);
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return format_output(command, cfg, t, fmt);
}

int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = inv.config ? load_config(*inv.config) : parse_config(json::object(), std::filesystem::current_path());
        if (inv.seed) cfg.seed = *inv.seed;
        if (inv.format) cfg.format = *inv.format;
        cfg.validate();
        const std::string text = render(inv.command, cfg);
        if (inv.out) {
            std::ofstream f(*inv.out, std::ios::binary);
            if (!f || !(f << text)) {
                err << json{{"error", "output-not-writable"}, {"message", *inv.out}}.dump() << '\n';
                return 2;
            }
        } else {
            out << text;
        }
        return 0;
    } catch (const std::exception& e) {
        const auto f = classify(e);
        json msg = {{"error", f.reason}, {"message", e.what()}, {"exit_code", f.code}};
        if (const auto* s = dynamic_cast<const fit::StageError*>(&e)) msg["stage"] = s->stage();
        err << msg.dump() << '\n';
        return f.code;
    }
}

}  // namespace sivstrain::cli
