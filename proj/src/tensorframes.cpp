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

#include "sivstrain/tensorframes.hpp"

#include <cmath>
#include <string>

#include "sivstrain/error.hpp"

namespace sivstrain::frames {

namespace {

// 180-degree rotation about the (unnormalized) axis a.
Mat3 half_turn(const Vec3& a) {
    const Vec3 n = a.normalized();
    return 2.0 * n * n.transpose() - Mat3::Identity();
}

// Proper rotation of the cubic group carrying [111] onto the orientation.
Mat3 symmetry_from_111(Orientation o) {
    switch (o) {
        case Orientation::k111: return Mat3::Identity();
        case Orientation::kBar1Bar11: return half_turn(Vec3(0, 0, 1));
        case Orientation::k1Bar11: return half_turn(Vec3(1, 0, 1));
        case Orientation::kBar111: return half_turn(Vec3(0, 1, 1));
    }
    return Mat3::Identity();
}

Mat3 to_crystal_rotation(const Frame& f) {
    // crystal = R^T * defect * R with R = crystal_to_defect
    return defect_axes(f.orientation()).crystal_to_defect();
}

}  // namespace

std::string_view to_string(Orientation o) {
    switch (o) {
        case Orientation::k111: return "111";
        case Orientation::kBar1Bar11: return "-1-11";
        case Orientation::k1Bar11: return "1-11";
        case Orientation::kBar111: return "-111";
    }
    return "?";
}

Orientation parse_orientation(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (ch != '[' && ch != ']' && ch != ' ') s.push_back(ch);
    }
    for (auto o : kAllOrientations) {
        if (s == to_string(o)) return o;
    }
    throw ValidationError("unknown orientation '" + std::string(text) +
                          "' (expected one of 111, -1-11, 1-11, -111)");
}

Vec3 orientation_vector(Orientation o) {
    switch (o) {
        case Orientation::k111: return {1, 1, 1};
        case Orientation::kBar1Bar11: return {-1, -1, 1};
        case Orientation::k1Bar11: return {1, -1, 1};
        case Orientation::kBar111: return {-1, 1, 1};
    }
    return {1, 1, 1};
}

std::string Frame::describe() const {
    if (is_crystal()) return "crystal";
    return "defect[" + std::string(to_string(orientation_)) + "]";
}

StrainTensor::StrainTensor(const Components& c, Frame frame) : c_(c), frame_(frame) {
    for (double v : c_) {
        if (!std::isfinite(v)) throw ValidationError("strain component is not finite");
        if (std::abs(v) >= kMaxStrainComponent) {
            throw ValidationError("strain component " + std::to_string(v) +
                                  " exceeds the linear-elasticity bound 1e-2");
        }
    }
}

StrainTensor StrainTensor::from_matrix(const Mat3& m, Frame frame) {
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ValidationError("strain matrix is not symmetric");
    }
    const Mat3 s = 0.5 * (m + m.transpose());
    return StrainTensor({s(0, 0), s(1, 1), s(2, 2), s(1, 2), s(2, 0), s(0, 1)}, frame);
}

Mat3 StrainTensor::matrix() const {
    Mat3 m;
    m << c_[0], c_[5], c_[4],
         c_[5], c_[1], c_[3],
         c_[4], c_[3], c_[2];
    return m;
}

StrainTensor StrainTensor::scaled(double s) const {
    Components c = c_;
    for (double& v : c) v *= s;
    return StrainTensor(c, frame_);
}

Mat3 DefectAxes::crystal_to_defect() const {
    Mat3 r;
    r.row(0) = x.transpose();
    r.row(1) = y.transpose();
    r.row(2) = z.transpose();
    return r;
}

DefectAxes defect_axes(Orientation o) {
    // Canonical [111] triad: R = Rz(45) Ry(arccos(1/sqrt3)) applied to the
    // cubic axes, built from exact vectors.
    const Vec3 x0 = Vec3(1, 1, -2) / std::sqrt(6.0);
    const Vec3 y0 = Vec3(-1, 1, 0) / std::sqrt(2.0);
    const Vec3 z0 = Vec3(1, 1, 1) / std::sqrt(3.0);
    const Mat3 g = symmetry_from_111(o);
    return {g * x0, g * y0, g * z0};
}

StrainTensor transform_strain(const StrainTensor& eps, const Frame& to) {
    if (eps.frame() == to) return eps;
    Mat3 crystal = eps.matrix();
    if (eps.frame().is_defect()) {
        const Mat3 r = to_crystal_rotation(eps.frame());
        crystal = r.transpose() * crystal * r;
    }
    if (to.is_crystal()) return StrainTensor::from_matrix(crystal, to);
    const Mat3 r = to_crystal_rotation(to);
    return StrainTensor::from_matrix(r * crystal * r.transpose(), to);
}

MagneticField transform_field(const MagneticField& b, const Frame& to) {
    if (!b.tesla.allFinite()) throw ValidationError("magnetic field is not finite");
    if (b.frame == to) return b;
    Vec3 crystal = b.tesla;
    if (b.frame.is_defect()) crystal = to_crystal_rotation(b.frame).transpose() * crystal;
    if (to.is_crystal()) return {crystal, to};
    return {to_crystal_rotation(to) * crystal, to};
}

LoadClass classify_orientation(Orientation o, const Vec3& load_axis) {
    if (std::abs(load_axis.norm() - 1.0) > 1e-9) {
        throw ValidationError("load axis must be a unit vector");
    }
    const double c = defect_axes(o).z.dot(load_axis);
    return std::abs(c) < 1e-6 ? LoadClass::Transverse : LoadClass::Axial;
}

}  // namespace sivstrain::frames
