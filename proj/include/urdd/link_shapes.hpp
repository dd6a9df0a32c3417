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

#include <optional>
#include <string>
#include <vector>

#include "urdd/bounding.hpp"
#include "urdd/decomposition.hpp"
#include "urdd/hull.hpp"
#include "urdd/mesh.hpp"
#include "urdd/model.hpp"
#include "urdd/store.hpp"

namespace urdd {

struct GeometryOptions {
  DecompositionParams decomposition;
  int segments = 32;  // divisions of tessellated revolution surfaces
  bool glb = false;   // also export .glb files
  int jobs = 1;
  /// Searched in order for relative and package:// mesh paths.
  std::vector<fs::path> asset_roots;
};

/// Resolves a mesh filename against the asset roots in order; the first
/// existing candidate wins.
fs::path resolve_asset(const std::string& filename, const std::vector<fs::path>& asset_roots);

/// Geometries merged into one cleaned mesh in the link frame. Errors are
/// annotated with the link name.
TriMesh merge_geometry(const std::string& link, const std::vector<GeometryRef>& geometries,
                       const GeometryOptions& options);

/// File-system safe, injective encoding of a link name for mesh paths.
std::string encode_link_name(const std::string& link);

/// Derived collision geometry of one link, in the link frame.
struct LinkGeometry {
  std::string link;
  bool has_geometry = false;  // false: the link carries the no_geometry marker
  TriMesh mesh;               // merged collision geometry
  std::optional<ConvexHull> hull;
  std::optional<ConvexDecomposition> decomposition;
  std::optional<OrientedBoundingBox> obb;
  std::optional<BoundingSphere> sphere;
  std::vector<OrientedBoundingBox> piece_obbs;
  std::vector<BoundingSphere> piece_spheres;
};

struct LinkShapeRequest {
  bool hull = true;
  bool decomposition = true;
  bool approximations = true;
};

/// Per-link shape bundles for every link, in document order. Links are
/// processed in parallel (options.jobs); the result does not depend on it.
std::vector<LinkGeometry> derive_link_shapes(const RobotModel& model, const GeometryOptions& options,
                                             const LinkShapeRequest& request = {});

struct ModuleOutput {
  Json payload;
  std::vector<MeshFile> files;
};

ModuleOutput original_meshes_module(const RobotModel& model, const GeometryOptions& options);
ModuleOutput convex_hull_module(const std::vector<LinkGeometry>& links, const GeometryOptions& options);
ModuleOutput decomposition_module(const std::vector<LinkGeometry>& links, const GeometryOptions& options);
ModuleOutput approximations_module(const std::vector<LinkGeometry>& links);

Json obb_to_json(const OrientedBoundingBox& box);
OrientedBoundingBox obb_from_json(const Json& doc);
Json sphere_to_json(const BoundingSphere& sphere);
BoundingSphere sphere_from_json(const Json& doc);

/// Shapes read back from a URDD for proximity queries.
struct LinkShapes {
  std::string link;
  bool has_geometry = false;
  ConvexHull hull;
  OrientedBoundingBox obb;
  BoundingSphere sphere;
  std::vector<ConvexHull> pieces;
  std::vector<BoundingSphere> piece_spheres;
};

struct ShapeLoad {
  bool hulls = true;
  bool approximations = false;
  bool pieces = false;
};

/// Reads link shapes from the hull, approximation and decomposition modules
/// (only those requested). Links are listed in urdf_module order.
std::vector<LinkShapes> load_link_shapes(const UrddHandle& urdd, const ShapeLoad& what);

}  // namespace urdd
