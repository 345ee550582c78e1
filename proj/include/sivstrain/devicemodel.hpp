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

#include <iosfwd>
#include <string>
#include <vector>

#include "sivstrain/spectra.hpp"
#include "sivstrain/tensorframes.hpp"

namespace sivstrain::device {

/// Capacitively loaded beam: eps = k V^2 (n n^T - nu (I - n n^T)).
struct BeamSurrogate {
    double gain = 1e-6;  // strain / V^2
    frames::Vec3 load_axis = frames::Vec3(1, 1, 0).normalized();
    double poisson = 0.1;

    void validate() const;
};

/// Crystal-frame strain produced by the surrogate at `volts`.
frames::StrainTensor surrogate_strain(double volts, const BeamSurrogate& beam);

struct TrajectoryRow {
    double control;
    frames::StrainTensor strain;  // crystal frame
};

/// Piecewise-linear strain-versus-voltage table.
class StrainTrajectory {
  public:
    explicit StrainTrajectory(std::vector<TrajectoryRow> rows);

    const std::vector<TrajectoryRow>& rows() const { return rows_; }
    double min_control() const;
    double max_control() const;

    /// Linear interpolation; RangeError outside the tabulated controls.
    frames::StrainTensor strain_at(double control) const;

  private:
    std::vector<TrajectoryRow> rows_;
};

inline frames::StrainTensor strain_at(const StrainTrajectory& traj, double control) {
    return traj.strain_at(control);
}

inline constexpr const char* kTrajectoryHeader = "control_v,exx,eyy,ezz,eyz,ezx,exy";

/// `path` may be "-" for standard input.
StrainTrajectory load_strain_trajectory(const std::string& path);
StrainTrajectory read_strain_trajectory(std::istream& in);
void write_strain_trajectory(std::ostream& out, const StrainTrajectory& traj);

SpectraSeries load_spectra(const std::string& path);
SpectraSeries read_spectra(std::istream& in);
/// Strain columns are written when every row carries a strain tensor.
void write_spectra(std::ostream& out, const SpectraSeries& series);

}  // namespace sivstrain::device
