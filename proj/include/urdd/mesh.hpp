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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "urdd/math.hpp"
#include "urdd/model.hpp"

namespace urdd {

/// Indexed triangle mesh in meters. Triangles are counter-clockwise seen from
/// outside when the source is consistently oriented.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::string source;

  bool empty() const { return vertices.empty(); }
};

/// Welds vertices closer than `weld_tolerance`, drops triangles with area
/// below `area_tolerance` (or repeated indices), and removes unreferenced
/// vertices. A mesh without triangles keeps its (welded) vertices.
TriMesh clean_mesh(const TriMesh& mesh, double weld_tolerance = 1e-9, double area_tolerance = 1e-12);

TriMesh transform_mesh(const TriMesh& mesh, const Transform& t);
TriMesh scale_mesh(const TriMesh& mesh, const Vec3& scale);
void append_mesh(TriMesh& into, const TriMesh& other);

/// Signed volume by tetrahedron summation (positive for outward-oriented
/// closed meshes).
double signed_volume(const TriMesh& mesh);
void bounds(const std::vector<Vec3>& points, Vec3& lo, Vec3& hi);

/// Triangle mesh for a URDF primitive. Boxes are exact (8 vertices); round
/// surfaces use `segments` divisions around their axis (z, as in URDF).
TriMesh tessellate(const Shape& shape, int segments = 32);

// Readers. Throw kUnsupportedFormat or kCorruptMesh.
TriMesh parse_obj(std::string_view text);
TriMesh parse_stl(std::string_view bytes);
TriMesh parse_glb(std::string_view bytes);

/// Reads .obj/.stl/.glb by extension, applies `scale` componentwise and
/// cleans the result.
TriMesh load_mesh(const fs::path& path, const Vec3& scale = Vec3::Ones());
TriMesh load_mesh_bytes(std::string_view bytes, std::string_view extension, const Vec3& scale = Vec3::Ones());

// Writers. OBJ keeps full double precision; STL is binary; GLB is
// geometry-only glTF 2.0 (float32 positions, uint32 indices).
std::string export_obj(const TriMesh& mesh);
std::string export_stl(const TriMesh& mesh);
std::string export_glb(const TriMesh& mesh);

}  // namespace urdd
