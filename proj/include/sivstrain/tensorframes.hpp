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

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace sivstrain::frames {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// The four <111> bond directions an SiV can align with.
enum class Orientation {
    k111,       // [111]
    kBar1Bar11, // [-1-11]
    k1Bar11,    // [1-11]
    kBar111,    // [-111]
};

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::k111, Orientation::kBar1Bar11, Orientation::k1Bar11, Orientation::kBar111};

std::string_view to_string(Orientation o);
/// Accepts "111", "-1-11", "1-11", "-111" (brackets optional).
Orientation parse_orientation(std::string_view text);
/// Unnormalized integer direction of the orientation in crystal coordinates.
Vec3 orientation_vector(Orientation o);

class Frame {
  public:
    enum class Kind { Crystal, Defect };

    static Frame crystal() { return Frame(Kind::Crystal, Orientation::k111); }
    static Frame defect(Orientation o) { return Frame(Kind::Defect, o); }

    Kind kind() const { return kind_; }
    bool is_crystal() const { return kind_ == Kind::Crystal; }
    bool is_defect() const { return kind_ == Kind::Defect; }
    /// Only meaningful for defect frames.
    Orientation orientation() const { return orientation_; }

    std::string describe() const;

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.kind_ == b.kind_ && (a.kind_ == Kind::Crystal || a.orientation_ == b.orientation_);
    }

  private:
    Frame(Kind k, Orientation o) : kind_(k), orientation_(o) {}
    Kind kind_;
    Orientation orientation_;
};

/// Largest admissible |eps_ij| for the first-order strain model.
inline constexpr double kMaxStrainComponent = 1e-2;

/// Symmetric dimensionless strain tensor tagged with its frame.
///
/// Component order is (xx, yy, zz, yz, zx, xy); shear entries are tensor
/// (not engineering) components. Construction rejects non-finite values and
/// anything at or beyond kMaxStrainComponent.
class StrainTensor {
  public:
    using Components = std::array<double, 6>;

    StrainTensor() : StrainTensor(Components{}, Frame::crystal()) {}
    StrainTensor(const Components& c, Frame frame);
    /// Symmetrizes (m + m^T)/2; throws if m is asymmetric beyond 1e-12 relative.
    static StrainTensor from_matrix(const Mat3& m, Frame frame);
    static StrainTensor zero(Frame frame) { return StrainTensor(Components{}, frame); }

    const Components& components() const { return c_; }
    const Frame& frame() const { return frame_; }
    Mat3 matrix() const;

    double xx() const { return c_[0]; }
    double yy() const { return c_[1]; }
    double zz() const { return c_[2]; }
    double yz() const { return c_[3]; }
    double zx() const { return c_[4]; }
    double xy() const { return c_[5]; }

    StrainTensor scaled(double s) const;

  private:
    Components c_;
    Frame frame_;
};

/// Orthonormal defect axes expressed in crystal coordinates.
struct DefectAxes {
    Vec3 x;
    Vec3 y;
    Vec3 z;

    /// Rows are x, y, z: maps crystal-frame vectors to defect-frame components.
    Mat3 crystal_to_defect() const;
};

DefectAxes defect_axes(Orientation o);

/// Returns eps expressed in `to`. Identity when the frames already agree.
StrainTensor transform_strain(const StrainTensor& eps, const Frame& to);

struct MagneticField {
    Vec3 tesla = Vec3::Zero();
    Frame frame = Frame::crystal();
};

MagneticField transform_field(const MagneticField& b, const Frame& to);

enum class LoadClass { Axial, Transverse };

/// Transverse iff the defect axis is perpendicular to the load (|z.n| < 1e-6).
LoadClass classify_orientation(Orientation o, const Vec3& load_axis);

}  // namespace sivstrain::frames
