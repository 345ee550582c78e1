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
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sivstrain/devicemodel.hpp"
#include "sivstrain/error.hpp"
#include "sivstrain/fitkit.hpp"
#include "sivstrain/levels.hpp"
#include "sivstrain/phononkinetics.hpp"
#include "sivstrain/spincoupling.hpp"
#include "sivstrain/tensorframes.hpp"

namespace sivstrain::cli {

/// Raised for a configuration that cannot be dispatched (exit code 2).
class ConfigError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Raised when a referenced input file does not exist (exit code 2).
class InputNotFound : public Error {
  public:
    using Error::Error;
};

struct SweepConfig {
    std::string variable = "voltage";  // voltage | strain_scale | delta_gs | field_tesla
    double start = 0.0;
    double stop = 100.0;
    int steps = 11;
};

struct RateConfig {
    phonon::RateModel model;
    double dephasing_floor_ghz = 0.0;
    std::optional<double> flip_constant_ghz;
    std::optional<double> omega_s_ghz;
};

struct CouplingConfig {
    levels::StrainChannel ac_channel = levels::StrainChannel::Egx;
    std::optional<frames::Vec3> microwave_axis;
    std::optional<double> d_spin_override;  // GHz/strain
    coupling::MechanicalMode mode;
    double gamma_spin_ghz = 1e-7;
    std::string note;
};

struct FitInput {
    std::string spectra;
    frames::Orientation orientation = frames::Orientation::k111;
    std::optional<std::string> trajectory;
};

struct FitConfig {
    std::optional<FitInput> axial;
    std::optional<FitInput> transverse;
    double hr_b_gs = 484.0;
    double hr_b_es = 630.0;
    std::string stage = "full";        // full | t_par | d
    double inject_noise_ghz = 0.0;     // jitter added to loaded lines, drawn with `seed`
    std::string note;
};

struct RunConfig {
    levels::LevelModel model;
    frames::Orientation orientation = frames::Orientation::kBar111;
    frames::MagneticField field;       // frame resolved against `orientation`
    frames::StrainTensor strain;       // operating point
    device::BeamSurrogate beam;
    std::optional<std::string> trajectory;
    SweepConfig sweep;
    RateConfig rate;
    CouplingConfig coupling;
    FitConfig fit;
    fit::ElasticModuli moduli;
    std::uint64_t seed = 0;
    std::string format;                // empty: command default

    /// Checks every module precondition; throws ConfigError.
    void validate() const;
};

/// Builds a config from JSON; relative paths resolve against `base_dir`.
/// Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Fully resolved form, every default spelled out, paths absolute.
nlohmann::json to_json(const RunConfig& cfg);

/// Reads a config file. Accepts a plain JSON document, a JSON report with a
/// "config_echo" member, or a CSV whose first line is "# config: {...}".
RunConfig load_config(const std::string& path);

}  // namespace sivstrain::cli
