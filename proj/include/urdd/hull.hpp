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
#include <vector>

#include "urdd/math.hpp"
#include "urdd/mesh.hpp"

namespace urdd {

/// Closed convex polytope with outward-oriented triangular faces.
struct ConvexHull {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  double volume = 0.0;
  Vec3 centroid = Vec3::Zero();
  /// True when the input was flat or linear and was thickened before hulling.
  bool inflated = false;
  /// Vertex adjacency along hull edges (used for hill-climbing support).
  std::vector<std::vector<int>> neighbors;

  TriMesh as_mesh() const;

  /// Index of a vertex maximizing dot(v, direction). `hint` is a starting
  /// vertex for hill climbing and is updated to the result.
  int support_index(const Vec3& direction, int& hint) const;
  Vec3 support(const Vec3& direction) const {
    int hint = 0;
    return vertices[static_cast<std::size_t>(support_index(direction, hint))];
  }
};

/// Quickhull over a point set. Throws kDegenerateGeometry when the points
/// are coplanar, collinear or coincident.
ConvexHull convex_hull(const std::vector<Vec3>& points);
ConvexHull convex_hull(const TriMesh& mesh);

/// Thickness used when flat or linear input has to be inflated.
inline constexpr double kInflationThickness = 1e-6;

/// convex_hull, falling back to an inflated hull (thickness
/// kInflationThickness along each deficient direction) for degenerate input.
/// Throws kDegenerateGeometry only for an empty point set.
ConvexHull convex_hull_or_inflated(const std::vector<Vec3>& points);

/// Oriented plane (outward normal n, offset d: n.x <= d inside) per face.
std::vector<std::pair<Vec3, double>> face_planes(const ConvexHull& hull);

}  // namespace urdd
