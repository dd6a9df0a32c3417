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
#include "urdd/mesh.hpp"

namespace urdd {

struct DecompositionParams {
  int max_pieces = 32;
  /// Allowed hull-volume fraction not backed by solid voxels, per piece.
  double concavity_tolerance = 0.02;
  /// Voxels along the longest bounding-box edge.
  int voxel_resolution = 64;
};

/// Approximate convex decomposition. Volumes are voxel estimates on the
/// decomposition grid.
struct ConvexDecomposition {
  std::vector<ConvexHull> pieces;
  double concavity_tolerance_used = 0.0;
  /// source_volume / union_volume: 1 for a tight cover, below 1 when the
  /// pieces overshoot the solid (for instance a single hull of a concave
  /// shape).
  double coverage_ratio = 1.0;
  /// Fraction of the source solid inside at least one piece.
  double covered_fraction = 1.0;
  double union_volume = 0.0;
  double source_volume = 0.0;
};

/// Voxelizes the mesh (winding number along +x rays) and recursively splits
/// axis-aligned voxel regions, largest hull deficit first, until every piece
/// is within tolerance or the piece budget is spent. Each piece is the hull
/// of the mesh clipped to its region plus region corners inside the solid.
/// Deterministic for fixed input and parameters.
ConvexDecomposition convex_decomposition(const TriMesh& mesh, const DecompositionParams& params = {});

}  // namespace urdd
