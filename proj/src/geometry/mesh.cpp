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

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "urdd/error.hpp"
#include "urdd/mesh.hpp"

namespace urdd {
namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

// Ring of `segments` points at height z.
void add_ring(std::vector<Vec3>& v, double radius, double z, int segments) {
  for (int j = 0; j < segments; ++j) {
    const double phi = 2.0 * kPi * j / segments;
    v.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
  }
}

/// Connects consecutive rings (each `segments` long, starting at `first`)
/// plus optional pole vertices into a closed surface.
void stitch(TriMesh& m, int first_ring, int rings, int segments, int top_pole, int bottom_pole) {
  auto at = [&](int ring, int j) { return first_ring + ring * segments + (j % segments); };
  for (int r = 0; r + 1 < rings; ++r) {
    for (int j = 0; j < segments; ++j) {
      m.triangles.push_back({at(r, j), at(r + 1, j), at(r + 1, j + 1)});
      m.triangles.push_back({at(r, j), at(r + 1, j + 1), at(r, j + 1)});
    }
  }
  for (int j = 0; j < segments; ++j) {
    m.triangles.push_back({top_pole, at(0, j), at(0, j + 1)});
    m.triangles.push_back({bottom_pole, at(rings - 1, j + 1), at(rings - 1, j)});
  }
}

/// Primitive surfaces are star-shaped about the origin, so outward
/// orientation can be fixed per triangle.
void orient_outward(TriMesh& m) {
  for (auto& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(t[1], t[2]);
  }
}

}  // namespace

TriMesh clean_mesh(const TriMesh& mesh, double weld_tolerance, double area_tolerance) {
  TriMesh out;
  out.source = mesh.source;
  std::vector<int> remap(mesh.vertices.size(), -1);
  std::unordered_map<CellKey, std::vector<int>, CellHash> cells;
  const double tol2 = weld_tolerance * weld_tolerance;
  std::vector<Vec3> welded;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = mesh.vertices[i];
    if (!all_finite(p)) throw Error(ErrorCode::kCorruptMesh, "non-finite vertex in " + mesh.source);
    const CellKey key{static_cast<std::int64_t>(std::floor(p.x() / weld_tolerance)),
                      static_cast<std::int64_t>(std::floor(p.y() / weld_tolerance)),
                      static_cast<std::int64_t>(std::floor(p.z() / weld_tolerance))};
    int found = -1;
    for (int dx = -1; dx <= 1 && found < 0; ++dx)
      for (int dy = -1; dy <= 1 && found < 0; ++dy)
        for (int dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = cells.find({key.x + dx, key.y + dy, key.z + dz});
          if (it == cells.end()) continue;
          for (int w : it->second)
            if ((welded[static_cast<std::size_t>(w)] - p).squaredNorm() <= tol2) {
              found = w;
              break;
            }
        }
    if (found < 0) {
      found = static_cast<int>(welded.size());
      welded.push_back(p);
      cells[key].push_back(found);
    }
    remap[i] = found;
  }

  std::vector<std::array<int, 3>> tris;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || static_cast<std::size_t>(t[k]) >= mesh.vertices.size()) {
        throw Error(ErrorCode::kCorruptMesh, "triangle index out of range in " + mesh.source);
      }
    }
    std::array<int, 3> w{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) continue;
    const Vec3& a = welded[w[0]];
    const double area = 0.5 * (welded[w[1]] - a).cross(welded[w[2]] - a).norm();
    if (area <= area_tolerance) continue;
    tris.push_back(w);
  }

  if (mesh.triangles.empty()) {
    out.vertices = std::move(welded);
    return out;
  }
  std::vector<int> compact(welded.size(), -1);
  for (auto& t : tris) {
    for (int& idx : t) {
      if (compact[static_cast<std::size_t>(idx)] < 0) {
        compact[static_cast<std::size_t>(idx)] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(welded[static_cast<std::size_t>(idx)]);
      }
      idx = compact[static_cast<std::size_t>(idx)];
    }
  }
  out.triangles = std::move(tris);
  return out;
}

TriMesh transform_mesh(const TriMesh& mesh, const Transform& t) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = t * v;
  if (t.rotation.determinant() < 0.0)
    for (auto& tri : out.triangles) std::swap(tri[1], tri[2]);
  return out;
}

TriMesh scale_mesh(const TriMesh& mesh, const Vec3& scale) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = v.cwiseProduct(scale);
  if (scale.x() * scale.y() * scale.z() < 0.0)
    for (auto& tri : out.triangles) std::swap(tri[1], tri[2]);
  return out;
}

void append_mesh(TriMesh& into, const TriMesh& other) {
  const int base = static_cast<int>(into.vertices.size());
  into.vertices.insert(into.vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles) into.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  if (into.source.empty()) {
    into.source = other.source;
  } else if (!other.source.empty()) {
    into.source += ";" + other.source;
  }
}

double signed_volume(const TriMesh& mesh) {
  double v = 0.0;
  for (const auto& t : mesh.triangles) {
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return v / 6.0;
}

void bounds(const std::vector<Vec3>& points, Vec3& lo, Vec3& hi) {
  lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

TriMesh tessellate(const Shape& shape, int segments) {
  segments = std::max(segments, 8);
  TriMesh m;
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const Vec3& h = box->half_extents;
    for (int i = 0; i < 8; ++i) {
      m.vertices.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(), (i & 4) ? h.z() : -h.z());
    }
    const int quads[6][4] = {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1},
                             {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}};
    for (const auto& q : quads) {
      m.triangles.push_back({q[0], q[1], q[2]});
      m.triangles.push_back({q[0], q[2], q[3]});
    }
    m.source = "box";
  } else if (const auto* sphere = std::get_if<SphereShape>(&shape)) {
    const int rings = segments / 2;
    for (int i = 1; i < rings; ++i) {
      const double theta = kPi * i / rings;
      add_ring(m.vertices, sphere->radius * std::sin(theta), sphere->radius * std::cos(theta), segments);
    }
    const int top = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(0, 0, sphere->radius);
    m.vertices.emplace_back(0, 0, -sphere->radius);
    stitch(m, 0, rings - 1, segments, top, top + 1);
    m.source = "sphere";
  } else if (const auto* cyl = std::get_if<CylinderShape>(&shape)) {
    add_ring(m.vertices, cyl->radius, cyl->length / 2, segments);
    add_ring(m.vertices, cyl->radius, -cyl->length / 2, segments);
    const int top = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(0, 0, cyl->length / 2);
    m.vertices.emplace_back(0, 0, -cyl->length / 2);
    stitch(m, 0, 2, segments, top, top + 1);
    m.source = "cylinder";
  } else if (const auto* cap = std::get_if<CapsuleShape>(&shape)) {
    const int half_rings = std::max(segments / 4, 2);
    int rings = 0;
    for (int i = 1; i <= half_rings; ++i, ++rings) {
      const double theta = 0.5 * kPi * i / half_rings;
      add_ring(m.vertices, cap->radius * std::sin(theta), cap->length / 2 + cap->radius * std::cos(theta), segments);
    }
    for (int i = half_rings; i >= 1; --i, ++rings) {
      const double theta = 0.5 * kPi * i / half_rings;
      add_ring(m.vertices, cap->radius * std::sin(theta), -cap->length / 2 - cap->radius * std::cos(theta), segments);
    }
    const int top = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(0, 0, cap->length / 2 + cap->radius);
    m.vertices.emplace_back(0, 0, -cap->length / 2 - cap->radius);
    stitch(m, 0, rings, segments, top, top + 1);
    m.source = "capsule";
  } else {
    throw Error(ErrorCode::kInvalidGeometry, "mesh shapes are loaded, not tessellated");
  }
  orient_outward(m);
  return m;
}

}  // namespace urdd
