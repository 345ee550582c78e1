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

#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace sivstrain::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string("section '") + section + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
        if (!ok.count(k)) throw ConfigError(std::string("unknown key '") + k + "' in " + section);
    }
}

double num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    if (!obj[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

std::optional<double> opt_num(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    return num(obj, key, 0.0);
}

std::string str(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    if (!obj[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    return obj[key].get<std::string>();
}

frames::Vec3 vec3(const json& v, const char* key) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(std::string("'") + key + "' must be a 3-vector");
    frames::Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError(std::string("'") + key + "' must be numeric");
        out[i] = v[i].get<double>();
    }
    return out;
}

json vec3_json(const frames::Vec3& v) { return json::array({v[0], v[1], v[2]}); }

std::string resolve_path(const std::string& p, const fs::path& base) {
    if (p == "-") return p;
    fs::path path(p);
    if (path.is_relative()) path = base / path;
    return path.lexically_normal().string();
}

frames::Frame parse_frame(const std::string& name, frames::Orientation o) {
    if (name == "crystal") return frames::Frame::crystal();
    if (name == "defect") return frames::Frame::defect(o);
    throw ConfigError("frame must be 'crystal' or 'defect', got '" + name + "'");
}

std::string frame_name(const frames::Frame& f) {
    return f.kind() == frames::Frame::Kind::Crystal ? "crystal" : "defect";
}

levels::Susceptibilities parse_sus(const json& j, const char* section, levels::Susceptibilities s) {
    check_keys(j, section, {"t_perp", "t_par", "d", "f"});
    return {num(j, "t_perp", s.t_perp), num(j, "t_par", s.t_par), num(j, "d", s.d), num(j, "f", s.f)};
}

json sus_json(const levels::Susceptibilities& s) {
    return {{"t_perp", s.t_perp}, {"t_par", s.t_par}, {"d", s.d}, {"f", s.f}};
}

levels::LevelModel parse_model(const json& j) {
    check_keys(j, "model",
               {"lambda_so_gs", "lambda_so_es", "sus_gs", "sus_es", "gamma_s", "gamma_l", "orbital_quench", "zpl0",
                "shear_pairing"});
    levels::LevelModel m;
    m.lambda_so_gs = num(j, "lambda_so_gs", m.lambda_so_gs);
    m.lambda_so_es = num(j, "lambda_so_es", m.lambda_so_es);
    if (j.contains("sus_gs")) m.sus_gs = parse_sus(j["sus_gs"], "model.sus_gs", m.sus_gs);
    if (j.contains("sus_es")) m.sus_es = parse_sus(j["sus_es"], "model.sus_es", m.sus_es);
    m.gamma_s = num(j, "gamma_s", m.gamma_s);
    m.gamma_l = num(j, "gamma_l", m.gamma_l);
    m.orbital_quench = num(j, "orbital_quench", m.orbital_quench);
    m.zpl0 = num(j, "zpl0", m.zpl0);
    const auto pairing = str(j, "shear_pairing", "zx_in_egx");
    if (pairing == "zx_in_egx") {
        m.shear_pairing = levels::ShearPairing::kZxInEgx;
    } else if (pairing == "yz_in_egx") {
        m.shear_pairing = levels::ShearPairing::kYzInEgx;
    } else {
        throw ConfigError("shear_pairing must be 'zx_in_egx' or 'yz_in_egx'");
    }
    return m;
}

FitInput parse_fit_input(const json& j, const char* section, const fs::path& base) {
    check_keys(j, section, {"spectra", "orientation", "trajectory"});
    FitInput in;
    if (!j.contains("spectra")) throw ConfigError(std::string(section) + ".spectra is required");
    in.spectra = resolve_path(str(j, "spectra", ""), base);
    in.orientation = frames::parse_orientation(str(j, "orientation", "111"));
    if (j.contains("trajectory") && !j["trajectory"].is_null()) {
        in.trajectory = resolve_path(str(j, "trajectory", ""), base);
    }
    return in;
}

json fit_input_json(const FitInput& in) {
    json j = {{"spectra", in.spectra}, {"orientation", std::string(frames::to_string(in.orientation))}};
    j["trajectory"] = in.trajectory ? json(*in.trajectory) : json(nullptr);
    return j;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig parse_config(const json& doc, const fs::path& base) {
    check_keys(doc, "config",
               {"model", "orientation", "field", "strain", "device", "sweep", "rate", "coupling", "fit", "moduli",
                "seed", "format"});
    RunConfig c;
    try {
        if (doc.contains("model")) c.model = parse_model(doc["model"]);
        c.orientation = frames::parse_orientation(str(doc, "orientation", "-111"));

        if (doc.contains("field")) {
            const auto& j = doc["field"];
            check_keys(j, "field", {"tesla", "frame"});
            if (j.contains("tesla")) c.field.tesla = vec3(j["tesla"], "field.tesla");
            c.field.frame = parse_frame(str(j, "frame", "crystal"), c.orientation);
        }
        if (doc.contains("strain")) {
            const auto& j = doc["strain"];
            check_keys(j, "strain", {"components", "frame"});
            frames::StrainTensor::Components comp{};
            if (j.contains("components")) {
                const auto& v = j["components"];
                if (!v.is_array() || v.size() != 6) {
                    throw ConfigError("strain.components must list xx, yy, zz, yz, zx, xy");
                }
                for (int i = 0; i < 6; ++i) comp[i] = v[i].get<double>();
            }
            c.strain = frames::StrainTensor(comp, parse_frame(str(j, "frame", "crystal"), c.orientation));
        }
        if (doc.contains("device")) {
            const auto& j = doc["device"];
            check_keys(j, "device", {"gain", "load_axis", "poisson", "trajectory"});
            c.beam.gain = num(j, "gain", c.beam.gain);
            if (j.contains("load_axis")) {
                const auto axis = vec3(j["load_axis"], "device.load_axis");
                if (!(axis.norm() > 0.0)) throw ConfigError("device.load_axis must be nonzero");
                c.beam.load_axis = std::abs(axis.norm() - 1.0) < 1e-12 ? axis : frames::Vec3(axis.normalized());
            }
            c.beam.poisson = num(j, "poisson", c.beam.poisson);
            if (j.contains("trajectory") && !j["trajectory"].is_null()) {
                c.trajectory = resolve_path(str(j, "trajectory", ""), base);
            }
        }
        if (doc.contains("sweep")) {
            const auto& j = doc["sweep"];
            check_keys(j, "sweep", {"variable", "start", "stop", "steps"});
            c.sweep.variable = str(j, "variable", c.sweep.variable);
            c.sweep.start = num(j, "start", c.sweep.start);
            c.sweep.stop = num(j, "stop", c.sweep.stop);
            if (j.contains("steps")) {
                if (!j["steps"].is_number_integer()) throw ConfigError("sweep.steps must be an integer");
                c.sweep.steps = j["steps"].get<int>();
            }
        }
        if (doc.contains("rate")) {
            const auto& j = doc["rate"];
            check_keys(j, "rate",
                       {"temperature_k", "chi_rho", "dos_exponent", "geometry_corrected", "dephasing_floor_ghz",
                        "flip_constant_ghz", "omega_s_ghz"});
            auto& m = c.rate.model;
            m.temperature = num(j, "temperature_k", m.temperature);
            m.chi_rho = num(j, "chi_rho", m.chi_rho);
            m.dos_exponent = num(j, "dos_exponent", m.dos_exponent);
            if (j.contains("geometry_corrected")) m.geometry_corrected = j["geometry_corrected"].get<bool>();
            c.rate.dephasing_floor_ghz = num(j, "dephasing_floor_ghz", 0.0);
            c.rate.flip_constant_ghz = opt_num(j, "flip_constant_ghz");
            c.rate.omega_s_ghz = opt_num(j, "omega_s_ghz");
        }
        if (doc.contains("coupling")) {
            const auto& j = doc["coupling"];
            check_keys(j, "coupling",
                       {"ac_channel", "microwave_axis", "d_spin_override", "mode", "gamma_spin_ghz", "note"});
            const auto ch = str(j, "ac_channel", "egx");
            if (ch == "egx") {
                c.coupling.ac_channel = levels::StrainChannel::Egx;
            } else if (ch == "egy") {
                c.coupling.ac_channel = levels::StrainChannel::Egy;
            } else {
                throw ConfigError("coupling.ac_channel must be 'egx' or 'egy'");
            }
            if (j.contains("microwave_axis") && !j["microwave_axis"].is_null()) {
                c.coupling.microwave_axis = vec3(j["microwave_axis"], "coupling.microwave_axis");
            }
            c.coupling.d_spin_override = opt_num(j, "d_spin_override");
            if (j.contains("mode")) {
                const auto& mj = j["mode"];
                check_keys(mj, "coupling.mode", {"omega_m", "q_m", "eps_zpf", "n_th"});
                auto& mode = c.coupling.mode;
                mode.omega_m = num(mj, "omega_m", mode.omega_m);
                mode.q_m = num(mj, "q_m", mode.q_m);
                mode.eps_zpf = num(mj, "eps_zpf", mode.eps_zpf);
                mode.n_th = num(mj, "n_th", mode.n_th);
            }
            c.coupling.gamma_spin_ghz = num(j, "gamma_spin_ghz", c.coupling.gamma_spin_ghz);
            c.coupling.note = str(j, "note", "");
        }
        if (doc.contains("fit")) {
            const auto& j = doc["fit"];
            check_keys(j, "fit", {"axial", "transverse", "hr_b_gs", "hr_b_es", "stage", "inject_noise_ghz", "note"});
            if (j.contains("axial") && !j["axial"].is_null()) {
                c.fit.axial = parse_fit_input(j["axial"], "fit.axial", base);
            }
            if (j.contains("transverse") && !j["transverse"].is_null()) {
                c.fit.transverse = parse_fit_input(j["transverse"], "fit.transverse", base);
            }
            c.fit.hr_b_gs = num(j, "hr_b_gs", c.fit.hr_b_gs);
            c.fit.hr_b_es = num(j, "hr_b_es", c.fit.hr_b_es);
            c.fit.stage = str(j, "stage", c.fit.stage);
            c.fit.inject_noise_ghz = num(j, "inject_noise_ghz", 0.0);
            c.fit.note = str(j, "note", "");
        }
        if (doc.contains("moduli")) {
            const auto& j = doc["moduli"];
            check_keys(j, "moduli", {"c11", "c12", "c44"});
            c.moduli.c11 = num(j, "c11", c.moduli.c11);
            c.moduli.c12 = num(j, "c12", c.moduli.c12);
            c.moduli.c44 = num(j, "c44", c.moduli.c44);
        }
        if (doc.contains("seed")) {
            if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
            c.seed = doc["seed"].get<std::uint64_t>();
        }
        c.format = str(doc, "format", "");
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

void RunConfig::validate() const {
    try {
        model.validate();
        beam.validate();
        rate.model.validate();
        coupling.mode.validate();
        moduli.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (sweep.steps < 1) throw ConfigError("sweep.steps must be >= 1");
    if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop)) throw ConfigError("sweep bounds must be finite");
    static const std::set<std::string> vars{"voltage", "strain_scale", "delta_gs", "field_tesla"};
    if (!vars.count(sweep.variable)) throw ConfigError("unknown sweep.variable '" + sweep.variable + "'");
    if (!field.tesla.allFinite()) throw ConfigError("field must be finite");
    if (!(rate.dephasing_floor_ghz >= 0.0)) throw ConfigError("rate.dephasing_floor_ghz must be >= 0");
    if (!(coupling.gamma_spin_ghz > 0.0)) throw ConfigError("coupling.gamma_spin_ghz must be positive");
    if (coupling.microwave_axis && !(coupling.microwave_axis->norm() > 0.0)) {
        throw ConfigError("coupling.microwave_axis must be nonzero");
    }
    if (fit.stage != "full" && fit.stage != "t_par" && fit.stage != "d") {
        throw ConfigError("fit.stage must be 'full', 't_par' or 'd'");
    }
    if (!(fit.inject_noise_ghz >= 0.0)) throw ConfigError("fit.inject_noise_ghz must be >= 0");
    if (!format.empty() && format != "csv" && format != "json") throw ConfigError("format must be csv or json");
}

json to_json(const RunConfig& c) {
    const auto& m = c.model;
    json j;
    j["model"] = {{"lambda_so_gs", m.lambda_so_gs},
                  {"lambda_so_es", m.lambda_so_es},
                  {"sus_gs", sus_json(m.sus_gs)},
                  {"sus_es", sus_json(m.sus_es)},
                  {"gamma_s", m.gamma_s},
                  {"gamma_l", m.gamma_l},
                  {"orbital_quench", m.orbital_quench},
                  {"zpl0", m.zpl0},
                  {"shear_pairing", m.shear_pairing == levels::ShearPairing::kZxInEgx ? "zx_in_egx" : "yz_in_egx"}};
    j["orientation"] = std::string(frames::to_string(c.orientation));
    j["field"] = {{"tesla", vec3_json(c.field.tesla)}, {"frame", frame_name(c.field.frame)}};
    const auto& s = c.strain.components();
    j["strain"] = {{"components", json::array({s[0], s[1], s[2], s[3], s[4], s[5]})},
                   {"frame", frame_name(c.strain.frame())}};
    j["device"] = {{"gain", c.beam.gain},
                   {"load_axis", vec3_json(c.beam.load_axis)},
                   {"poisson", c.beam.poisson},
                   {"trajectory", c.trajectory ? json(*c.trajectory) : json(nullptr)}};
    j["sweep"] = {{"variable", c.sweep.variable},
                  {"start", c.sweep.start},
                  {"stop", c.sweep.stop},
                  {"steps", c.sweep.steps}};
    j["rate"] = {{"temperature_k", c.rate.model.temperature},
                 {"chi_rho", c.rate.model.chi_rho},
                 {"dos_exponent", c.rate.model.dos_exponent},
                 {"geometry_corrected", c.rate.model.geometry_corrected},
                 {"dephasing_floor_ghz", c.rate.dephasing_floor_ghz},
                 {"flip_constant_ghz", opt_json(c.rate.flip_constant_ghz)},
                 {"omega_s_ghz", opt_json(c.rate.omega_s_ghz)}};
    const auto& mode = c.coupling.mode;
    j["coupling"] = {
        {"ac_channel", c.coupling.ac_channel == levels::StrainChannel::Egx ? "egx" : "egy"},
        {"microwave_axis", c.coupling.microwave_axis ? vec3_json(*c.coupling.microwave_axis) : json(nullptr)},
        {"d_spin_override", opt_json(c.coupling.d_spin_override)},
        {"mode", {{"omega_m", mode.omega_m}, {"q_m", mode.q_m}, {"eps_zpf", mode.eps_zpf}, {"n_th", mode.n_th}}},
        {"gamma_spin_ghz", c.coupling.gamma_spin_ghz},
        {"note", c.coupling.note}};
    j["fit"] = {{"axial", c.fit.axial ? fit_input_json(*c.fit.axial) : json(nullptr)},
                {"transverse", c.fit.transverse ? fit_input_json(*c.fit.transverse) : json(nullptr)},
                {"hr_b_gs", c.fit.hr_b_gs},
                {"hr_b_es", c.fit.hr_b_es},
                {"stage", c.fit.stage},
                {"inject_noise_ghz", c.fit.inject_noise_ghz},
                {"note", c.fit.note}};
    j["moduli"] = {{"c11", c.moduli.c11}, {"c12", c.moduli.c12}, {"c44", c.moduli.c44}};
    j["seed"] = c.seed;
    j["format"] = c.format;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputNotFound("config not found: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();
    const fs::path base = fs::absolute(fs::path(path)).parent_path();

    static const std::string kPrefix = "# config: ";
    json doc;
    try {
        if (text.rfind(kPrefix, 0) == 0) {
            const auto eol = text.find('\n');
            doc = json::parse(text.substr(kPrefix.size(), eol == std::string::npos ? std::string::npos
                                                                                     : eol - kPrefix.size()));
        } else {
            doc = json::parse(text);
            if (doc.is_object() && doc.contains("config_echo")) doc = doc["config_echo"];
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc, base);
}

}  // namespace sivstrain::cli
