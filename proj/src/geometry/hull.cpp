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

#include "urdd/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "urdd/error.hpp"

namespace urdd {
namespace {

struct Face {
  std::array<int, 3> v;
  Vec3 normal;
  double offset;  // normal.dot(x) == offset on the plane
  std::vector<int> outside;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

class QuickHull {
 public:
  explicit QuickHull(const std::vector<Vec3>& points) : p_(points) {}

  ConvexHull run() {
    if (p_.size() < 4) throw Error(ErrorCode::kDegenerateGeometry, "fewer than 4 points");
    Vec3 lo, hi;
    bounds(p_, lo, hi);
    const double scale = std::max({lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff(), (hi - lo).norm()});
    eps_ = std::max(scale * 1e-11, 1e-15);
    initial_simplex();
    expand();
    return collect();
  }

 private:
  double distance(const Face& f, const Vec3& x) const { return f.normal.dot(x) - f.offset; }

  int add_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    const Vec3 n = (p_[b] - p_[a]).cross(p_[c] - p_[a]);
    const double len = n.norm();
    f.normal = len > 0 ? Vec3(n / len) : Vec3::Zero();
    f.offset = f.normal.dot(p_[a]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(std::move(f));
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    return id;
  }

  void initial_simplex() {
    const int n = static_cast<int>(p_.size());
    // Extremes along the coordinate axes.
    std::array<int, 6> ext{};
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) {
        if (p_[i][k] < p_[ext[2 * k]][k]) ext[2 * k] = i;
        if (p_[i][k] > p_[ext[2 * k + 1]][k]) ext[2 * k + 1] = i;
      }
    }
    int a = ext[0], b = ext[1];
    double best = -1;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        const double d = (p_[ext[i]] - p_[ext[j]]).squaredNorm();
        if (d > best) {
          best = d;
          a = ext[i];
          b = ext[j];
        }
      }
    if (std::sqrt(best) <= eps_) throw Error(ErrorCode::kDegenerateGeometry, "coincident points");

    const Vec3 ab = (p_[b] - p_[a]).normalized();
    int c = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const double d = (p_[i] - p_[a]).cross(ab).norm();
      if (d > best) {
        best = d;
        c = i;
      }
    }
    if (c < 0) throw Error(ErrorCode::kDegenerateGeometry, "collinear points");

    const Vec3 normal = (p_[b] - p_[a]).cross(p_[c] - p_[a]).normalized();
    int d = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const double h = std::abs(normal.dot(p_[i] - p_[a]));
      if (h > best) {
        best = h;
        d = i;
      }
    }
    if (d < 0) throw Error(ErrorCode::kDegenerateGeometry, "coplanar points");

    interior_ = (p_[a] + p_[b] + p_[c] + p_[d]) / 4.0;
    if (normal.dot(p_[d] - p_[a]) > 0) std::swap(b, c);  // make (a, b, c) face away from d
    add_face(a, b, c);
    add_face(a, d, b);
    add_face(b, d, c);
    add_face(c, d, a);

    for (int i = 0; i < n; ++i) {
      if (i == a || i == b || i == c || i == d) continue;
      assign(i, {0, 1, 2, 3});
    }
  }

  void assign(int point, const std::vector<int>& candidates) {
    for (int f : candidates) {
      if (distance(faces_[f], p_[point]) > eps_) {
        faces_[f].outside.push_back(point);
        return;
      }
    }
  }

  void expand() {
    std::vector<int> pending;
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f) pending.push_back(f);
    std::size_t cursor = 0;
    while (cursor < pending.size()) {
      const int fi = pending[cursor++];
      if (!faces_[fi].alive || faces_[fi].outside.empty()) continue;

      // Furthest outside point of this face.
      int eye = -1;
      double far = -1;
      for (int pt : faces_[fi].outside) {
        const double d = distance(faces_[fi], p_[pt]);
        if (d > far) {
          far = d;
          eye = pt;
        }
      }
      const Vec3& e = p_[eye];

      // Visible faces: flood fill from fi across edges.
      std::vector<int> visible{fi};
      faces_[fi].alive = false;
      for (std::size_t k = 0; k < visible.size(); ++k) {
        const Face& f = faces_[visible[k]];
        for (int j = 0; j < 3; ++j) {
          auto it = edges_.find(edge_key(f.v[(j + 1) % 3], f.v[j]));
          if (it == edges_.end()) continue;
          Face& nb = faces_[it->second];
          if (nb.alive && distance(nb, e) > eps_) {
            nb.alive = false;
            visible.push_back(it->second);
          }
        }
      }

      // Horizon: edges of visible faces whose twin belongs to a live face.
      std::vector<std::pair<int, int>> horizon;
      for (int vf : visible) {
        const Face& f = faces_[vf];
        for (int j = 0; j < 3; ++j) {
          const int a = f.v[j], b = f.v[(j + 1) % 3];
          auto it = edges_.find(edge_key(b, a));
          if (it != edges_.end() && faces_[it->second].alive) horizon.emplace_back(a, b);
        }
      }
      std::vector<int> orphans;
      for (int vf : visible) {
        const Face& f = faces_[vf];
        for (int j = 0; j < 3; ++j) {
          auto it = edges_.find(edge_key(f.v[j], f.v[(j + 1) % 3]));
          if (it != edges_.end() && it->second == vf) edges_.erase(it);
        }
        for (int pt : f.outside)
          if (pt != eye) orphans.push_back(pt);
        faces_[vf].outside.clear();
        faces_[vf].outside.shrink_to_fit();
      }

      std::vector<int> created;
      created.reserve(horizon.size());
      for (const auto& [a, b] : horizon) created.push_back(add_face(a, b, eye));
      std::sort(orphans.begin(), orphans.end());
      for (int pt : orphans) assign(pt, created);
      for (int f : created)
        if (!faces_[f].outside.empty()) pending.push_back(f);
    }
  }

  ConvexHull collect() const {
    ConvexHull hull;
    std::vector<int> remap(p_.size(), -1);
    for (const Face& f : faces_) {
      if (!f.alive) continue;
      std::array<int, 3> t{};
      for (int k = 0; k < 3; ++k) {
        int& r = remap[static_cast<std::size_t>(f.v[k])];
        if (r < 0) {
          r = static_cast<int>(hull.vertices.size());
          hull.vertices.push_back(p_[static_cast<std::size_t>(f.v[k])]);
        }
        t[k] = r;
      }
      hull.triangles.push_back(t);
    }
    // Volume and centroid by tetrahedra against an interior point.
    double vol = 0.0;
    Vec3 weighted = Vec3::Zero();
    for (const auto& t : hull.triangles) {
      const Vec3& a = hull.vertices[t[0]];
      const Vec3& b = hull.vertices[t[1]];
      const Vec3& c = hull.vertices[t[2]];
      const double v = (a - interior_).dot((b - interior_).cross(c - interior_)) / 6.0;
      vol += v;
      weighted += v * (a + b + c + interior_) / 4.0;
    }
    hull.volume = vol;
    hull.centroid = vol > 0 ? Vec3(weighted / vol) : interior_;
    hull.neighbors.assign(hull.vertices.size(), {});
    for (const auto& t : hull.triangles) {
      for (int k = 0; k < 3; ++k) hull.neighbors[t[k]].push_back(t[(k + 1) % 3]);
    }
    for (auto& nb : hull.neighbors) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return hull;
  }

  const std::vector<Vec3>& p_;
  double eps_ = 0.0;
  Vec3 interior_ = Vec3::Zero();
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
};

}  // namespace

TriMesh ConvexHull::as_mesh() const {
  TriMesh m;
  m.vertices = vertices;
  m.triangles = triangles;
  m.source = "convex_hull";
  return m;
}

int ConvexHull::support_index(const Vec3& direction, int& hint) const {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) return -1;
  if (n <= 32 || neighbors.size() != vertices.size()) {
    int best = 0;
    double best_dot = vertices[0].dot(direction);
    for (int i = 1; i < n; ++i) {
      const double d = vertices[static_cast<std::size_t>(i)].dot(direction);
      if (d > best_dot) {
        best_dot = d;
        best = i;
      }
    }
    hint = best;
    return best;
  }
  int cur = (hint >= 0 && hint < n) ? hint : 0;
  double cur_dot = vertices[static_cast<std::size_t>(cur)].dot(direction);
  for (;;) {
    int next = cur;
    double next_dot = cur_dot;
    for (int nb : neighbors[static_cast<std::size_t>(cur)]) {
      const double d = vertices[static_cast<std::size_t>(nb)].dot(direction);
      if (d > next_dot) {
        next_dot = d;
        next = nb;
      }
    }
    if (next == cur) break;
    cur = next;
    cur_dot = next_dot;
  }
  hint = cur;
  return cur;
}

ConvexHull convex_hull(const std::vector<Vec3>& points) {
  for (const auto& p : points)
    if (!all_finite(p)) throw Error(ErrorCode::kDegenerateGeometry, "non-finite point");
  return QuickHull(points).run();
}

ConvexHull convex_hull(const TriMesh& mesh) { return convex_hull(mesh.vertices); }

ConvexHull convex_hull_or_inflated(const std::vector<Vec3>& points) {
  if (points.empty()) throw Error(ErrorCode::kDegenerateGeometry, "empty point set");
  try {
    return convex_hull(points);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateGeometry) throw;
  }
  // Principal directions; those with negligible spread get thickened.
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  const Mat3 axes = solver.eigenvectors();
  std::vector<Vec3> deficient;
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = axes.col(k);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : points) {
      lo = std::min(lo, axis.dot(p));
      hi = std::max(hi, axis.dot(p));
    }
    if (hi - lo < kInflationThickness) deficient.push_back(axis);
  }
  std::vector<Vec3> grown;
  const std::size_t copies = std::size_t{1} << deficient.size();
  grown.reserve(points.size() * copies);
  for (const auto& p : points) {
    for (std::size_t mask = 0; mask < copies; ++mask) {
      Vec3 q = p;
      for (std::size_t k = 0; k < deficient.size(); ++k) {
        q += ((mask >> k) & 1 ? 0.5 : -0.5) * kInflationThickness * deficient[k];
      }
      grown.push_back(q);
    }
  }
  ConvexHull hull = convex_hull(grown);
  hull.inflated = true;
  return hull;
}

std::vector<std::pair<Vec3, double>> face_planes(const ConvexHull& hull) {
  std::vector<std::pair<Vec3, double>> planes;
  planes.reserve(hull.triangles.size());
  for (const auto& t : hull.triangles) {
    const Vec3& a = hull.vertices[t[0]];
    Vec3 n = (hull.vertices[t[1]] - a).cross(hull.vertices[t[2]] - a);
    const double len = n.norm();
    if (len <= 0) continue;
    n /= len;
    planes.emplace_back(n, n.dot(a));
  }
  return planes;
}

}  // namespace urdd
