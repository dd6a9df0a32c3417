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

#include <vector>

#include "urdd/hull.hpp"
#include "urdd/math.hpp"
#include "urdd/mesh.hpp"

namespace urdd {

struct OrientedBoundingBox {
  Vec3 center = Vec3::Zero();
  Mat3 axes = Mat3::Identity();  // columns are the box axes (a rotation)
  Vec3 half_extents = Vec3::Zero();

  double volume() const { return 8.0 * half_extents.prod(); }
  std::vector<Vec3> corners() const;
  /// Largest signed excursion of p outside the box (<= 0 when inside).
  double excess(const Vec3& p) const;
};

struct BoundingSphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;

  double volume() const { return 4.0 / 3.0 * kPi * radius * radius * radius; }
};

/// Relative tolerance under which covariance eigenvalues count as equal.
inline constexpr double kEigenTieTolerance = 1e-6;
/// Smallest reported half-extent.
inline constexpr double kMinHalfExtent = 1e-9;

/// Principal frame of the mesh surface (area-weighted second moments of the
/// triangles; the vertex cloud when there are no triangles). Equal
/// eigenvalues resolve to world axes.
Mat3 principal_axes(const TriMesh& mesh);

/// Oriented bounding box. Starts from the principal frame and keeps it
/// unless a frame aligned with a hull face (minimum-area rectangle in the
/// face plane) encloses the vertices with a strictly smaller volume.
OrientedBoundingBox oriented_bounding_box(const TriMesh& mesh);

/// Box of the given frame fitted to the points.
OrientedBoundingBox fit_box(const std::vector<Vec3>& points, const Mat3& axes);

/// Exact minimal enclosing sphere of a point set (move-to-front).
BoundingSphere bounding_sphere(const std::vector<Vec3>& points);

}  // namespace urdd
