// Copyright 2026 The URDD Authors.
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
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace urdd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Rigid transform stored as a rotation matrix plus translation (meters).
struct Transform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Transform identity() { return {}; }

  Transform operator*(const Transform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }
  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

  Transform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
};

/// URDF fixed-axis roll/pitch/yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rpy_to_matrix(const Vec3& rpy);

/// Inverse of rpy_to_matrix; pitch in [-pi/2, pi/2].
Vec3 matrix_to_rpy(const Mat3& rotation);

/// Rotation of `angle` radians about the unit vector `axis`.
Mat3 axis_angle(const Vec3& axis, double angle);

/// Unit quaternion (w, x, y, z) with w >= 0, so equal rotations serialize
/// to equal bytes.
std::array<double, 4> canonical_quaternion(const Mat3& rotation);
Mat3 quaternion_to_matrix(const std::array<double, 4>& wxyz);

/// Deterministic completion of `normal` to a right-handed orthonormal frame.
/// The first in-plane axis is built from the smallest-index world axis that
/// is not parallel to the normal.
void plane_basis(const Vec3& normal, Vec3& u, Vec3& v);

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

}  // namespace urdd
