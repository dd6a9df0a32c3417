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

#include "urdd/decomposition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "urdd/error.hpp"

namespace urdd {
namespace {

using Index3 = std::array<int, 3>;

/// Half-open box of voxel indices.
struct Region {
  Index3 lo{};
  Index3 hi{};

  int extent(int axis) const { return hi[axis] - lo[axis]; }
  bool empty() const { return extent(0) <= 0 || extent(1) <= 0 || extent(2) <= 0; }
};

double cross2(double ay, double az, double by, double bz) { return ay * bz - az * by; }

/// Edge function of p against edge u->v in the (y, z) plane, evaluated in a
/// canonical vertex order so that the reversed edge yields the exact
/// negation.
double edge_function(const Vec3& u, const Vec3& v, double py, double pz) {
  const bool forward = u.y() < v.y() || (u.y() == v.y() && u.z() < v.z());
  const Vec3& s = forward ? u : v;
  const Vec3& t = forward ? v : u;
  const double e = cross2(t.y() - s.y(), t.z() - s.z(), py - s.y(), pz - s.z());
  return forward ? e : -e;
}

/// Tie rule for points exactly on an edge: exactly one of d and -d passes.
bool owns_edge(double dy, double dz) { return dz < 0 || (dz == 0 && dy > 0); }

class VoxelGrid {
 public:
  VoxelGrid(const TriMesh& mesh, int resolution) {
    Vec3 lo, hi;
    bounds(mesh.vertices, lo, hi);
    const Vec3 ext = hi - lo;
    const double longest = ext.maxCoeff();
    if (!(longest > 0)) throw Error(ErrorCode::kDegenerateGeometry, "mesh has no extent");
    h_ = longest / std::max(resolution, 1);
    for (int k = 0; k < 3; ++k) {
      n_[k] = std::max(1, static_cast<int>(std::ceil(ext[k] / h_ - 1e-9))) + 2;
    }
    origin_ = lo - Vec3::Constant(h_);
    solid_.assign(static_cast<std::size_t>(n_[0]) * n_[1] * n_[2], 0);
    fill(mesh);
    prefix_.assign(static_cast<std::size_t>(n_[0] + 1) * n_[1] * n_[2], 0);
    for (int k = 0; k < n_[2]; ++k)
      for (int j = 0; j < n_[1]; ++j) {
        int* row = &prefix_[row_index(j, k) * static_cast<std::size_t>(n_[0] + 1)];
        for (int i = 0; i < n_[0]; ++i) row[i + 1] = row[i] + (solid(i, j, k) ? 1 : 0);
      }
  }

  double h() const { return h_; }
  const Index3& dims() const { return n_; }
  double center(int axis, int index) const { return origin_[axis] + (index + 0.5) * h_; }
  double plane(int axis, int index) const { return origin_[axis] + index * h_; }

  bool solid(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= n_[0] || j >= n_[1] || k >= n_[2]) return false;
    return solid_[static_cast<std::size_t>(i) + static_cast<std::size_t>(n_[0]) * row_index(j, k)] != 0;
  }

  /// Solid voxels with i in [i0, i1) on row (j, k).
  int row_count(int j, int k, int i0, int i1) const {
    if (i1 <= i0) return 0;
    const int* row = &prefix_[row_index(j, k) * static_cast<std::size_t>(n_[0] + 1)];
    return row[i1] - row[i0];
  }

  long long count(const Region& r) const {
    long long c = 0;
    for (int k = r.lo[2]; k < r.hi[2]; ++k)
      for (int j = r.lo[1]; j < r.hi[1]; ++j) c += row_count(j, k, r.lo[0], r.hi[0]);
    return c;
  }

  Region full() const { return {{0, 0, 0}, n_}; }

  /// Bounding box of the solid voxels in r, grown by one voxel and clamped
  /// to r. Empty when r holds no solid voxel.
  Region tighten(const Region& r) const {
    Index3 lo{n_[0], n_[1], n_[2]}, hi{-1, -1, -1};
    for (int k = r.lo[2]; k < r.hi[2]; ++k)
      for (int j = r.lo[1]; j < r.hi[1]; ++j) {
        if (row_count(j, k, r.lo[0], r.hi[0]) == 0) continue;
        int first = r.lo[0], last = r.hi[0] - 1;
        while (!solid(first, j, k)) ++first;
        while (!solid(last, j, k)) --last;
        lo = {std::min(lo[0], first), std::min(lo[1], j), std::min(lo[2], k)};
        hi = {std::max(hi[0], last), std::max(hi[1], j), std::max(hi[2], k)};
      }
    if (hi[0] < 0) return {{0, 0, 0}, {0, 0, 0}};
    Region out;
    for (int a = 0; a < 3; ++a) {
      out.lo[a] = std::max(r.lo[a], lo[a] - 1);
      out.hi[a] = std::min(r.hi[a], hi[a] + 2);
    }
    return out;
  }

  /// Index range [i0, i1) of voxel centers on row (j, k) inside the convex
  /// set given by planes, clamped to [lo, hi).
  std::pair<int, int> row_interval(const std::vector<std::pair<Vec3, double>>& planes, int j, int k, int lo,
                                   int hi) const {
    const double y = center(1, j), z = center(2, k);
    double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
    const double slack = 1e-9 * h_;
    for (const auto& [n, d] : planes) {
      const double rhs = d + slack - n.y() * y - n.z() * z;
      if (std::abs(n.x()) < 1e-15) {
        if (rhs < 0) return {0, 0};
        continue;
      }
      const double t = rhs / n.x();
      if (n.x() > 0) {
        t1 = std::min(t1, t);
      } else {
        t0 = std::max(t0, t);
      }
      if (t0 > t1) return {0, 0};
    }
    const double f0 = (t0 - origin_.x()) / h_ - 0.5;
    const double f1 = (t1 - origin_.x()) / h_ - 0.5;
    const int i0 = std::isfinite(f0) ? std::max(lo, static_cast<int>(std::ceil(std::max(f0, -1.0)))) : lo;
    const int i1 = std::isfinite(f1) ? std::min(hi, static_cast<int>(std::floor(std::min(f1, 1e9))) + 1) : hi;
    return i0 < i1 ? std::make_pair(i0, i1) : std::make_pair(0, 0);
  }

 private:
  std::size_t row_index(int j, int k) const {
    return static_cast<std::size_t>(j) + static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(k);
  }

  void fill(const TriMesh& mesh) {
    std::vector<std::vector<std::pair<double, int>>> crossings(static_cast<std::size_t>(n_[1]) * n_[2]);
    for (const auto& t : mesh.triangles) {
      const Vec3& a = mesh.vertices[t[0]];
      const Vec3& b = mesh.vertices[t[1]];
      const Vec3& c = mesh.vertices[t[2]];
      const Vec3 normal = (b - a).cross(c - a);
      const double area = normal.x();  // twice the signed (y, z) projected area
      if (area == 0) continue;
      const int sign = area > 0 ? 1 : -1;
      const double ymin = std::min({a.y(), b.y(), c.y()}), ymax = std::max({a.y(), b.y(), c.y()});
      const double zmin = std::min({a.z(), b.z(), c.z()}), zmax = std::max({a.z(), b.z(), c.z()});
      const int j0 = std::max(0, static_cast<int>(std::ceil((ymin - origin_.y()) / h_ - 0.5)));
      const int j1 = std::min(n_[1] - 1, static_cast<int>(std::floor((ymax - origin_.y()) / h_ - 0.5)));
      const int k0 = std::max(0, static_cast<int>(std::ceil((zmin - origin_.z()) / h_ - 0.5)));
      const int k1 = std::min(n_[2] - 1, static_cast<int>(std::floor((zmax - origin_.z()) / h_ - 0.5)));
      const std::array<const Vec3*, 3> v{&a, &b, &c};
      for (int k = k0; k <= k1; ++k) {
        const double pz = center(2, k);
        for (int j = j0; j <= j1; ++j) {
          const double py = center(1, j);
          bool inside = true;
          for (int e = 0; e < 3 && inside; ++e) {
            const Vec3& u = *v[e];
            const Vec3& w = *v[(e + 1) % 3];
            const double f = sign * edge_function(u, w, py, pz);
            if (f < 0) {
              inside = false;
            } else if (f == 0) {
              inside = owns_edge(sign * (w.y() - u.y()), sign * (w.z() - u.z()));
            }
          }
          if (!inside) continue;
          const double x = a.x() - (normal.y() * (py - a.y()) + normal.z() * (pz - a.z())) / normal.x();
          crossings[row_index(j, k)].emplace_back(x, sign);
        }
      }
    }
    for (int k = 0; k < n_[2]; ++k)
      for (int j = 0; j < n_[1]; ++j) {
        auto& row = crossings[row_index(j, k)];
        if (row.empty()) continue;
        std::sort(row.begin(), row.end());
        // Winding number of a +x ray from each voxel center.
        int winding = 0;
        std::size_t next = row.size();
        for (int i = n_[0] - 1; i >= 0; --i) {
          const double x = center(0, i);
          while (next > 0 && row[next - 1].first > x) winding += row[--next].second;
          if (winding != 0) {
            solid_[static_cast<std::size_t>(i) + static_cast<std::size_t>(n_[0]) * row_index(j, k)] = 1;
          }
        }
      }
  }

  double h_ = 0;
  Index3 n_{};
  Vec3 origin_ = Vec3::Zero();
  std::vector<std::uint8_t> solid_;
  std::vector<int> prefix_;
};

/// Sutherland-Hodgman clip of a polygon against lo[a] <= x[a] <= hi[a].
void clip_polygon(std::vector<Vec3>& poly, const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> next;
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      if (poly.empty()) return;
      const double bound = side == 0 ? lo[axis] : hi[axis];
      auto inside = [&](const Vec3& p) { return side == 0 ? p[axis] >= bound : p[axis] <= bound; };
      next.clear();
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec3& cur = poly[i];
        const Vec3& prev = poly[(i + poly.size() - 1) % poly.size()];
        const bool in_cur = inside(cur), in_prev = inside(prev);
        if (in_cur != in_prev) {
          const double t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
          Vec3 q = prev + t * (cur - prev);
          q[axis] = bound;
          next.push_back(q);
        }
        if (in_cur) next.push_back(cur);
      }
      poly.swap(next);
    }
  }
}

struct Piece {
  Region region;
  ConvexHull hull;
  bool has_hull = false;
  long long hull_voxels = 0;
  long long solid_in_hull = 0;
  bool final = false;

  double concavity() const {
    return hull_voxels > 0 ? static_cast<double>(hull_voxels - solid_in_hull) / static_cast<double>(hull_voxels)
                           : 0.0;
  }
  long long deficit() const { return hull_voxels - solid_in_hull; }
};

class Decomposer {
 public:
  Decomposer(const TriMesh& mesh, const DecompositionParams& params)
      : mesh_(mesh), params_(params), grid_(mesh, params.voxel_resolution) {}

  ConvexDecomposition run() {
    std::vector<Piece> pieces;
    Piece root;
    root.region = grid_.full();
    root.hull = convex_hull_or_inflated(mesh_.vertices);
    root.has_hull = true;
    measure(root);
    pieces.push_back(std::move(root));

    const long long total_solid = grid_.count(grid_.full());
    while (total_solid > 0 && static_cast<int>(pieces.size()) < params_.max_pieces) {
      // Largest absolute deficit among pieces still over tolerance.
      int pick = -1;
      for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        const Piece& p = pieces[static_cast<std::size_t>(i)];
        if (p.final || p.concavity() <= params_.concavity_tolerance) continue;
        if (pick < 0 || p.deficit() > pieces[static_cast<std::size_t>(pick)].deficit()) pick = i;
      }
      if (pick < 0) break;
      Piece left, right;
      if (!split(pieces[static_cast<std::size_t>(pick)], left, right)) {
        pieces[static_cast<std::size_t>(pick)].final = true;
        continue;
      }
      pieces[static_cast<std::size_t>(pick)] = std::move(left);
      pieces.insert(pieces.begin() + pick + 1, std::move(right));
    }

    ConvexDecomposition out;
    out.concavity_tolerance_used = params_.concavity_tolerance;
    for (auto& p : pieces)
      if (p.has_hull) out.pieces.push_back(std::move(p.hull));
    summarize(out);
    return out;
  }

 private:
  void measure(Piece& p) const {
    p.hull_voxels = 0;
    p.solid_in_hull = 0;
    if (!p.has_hull) return;
    const auto planes = face_planes(p.hull);
    for (int k = p.region.lo[2]; k < p.region.hi[2]; ++k)
      for (int j = p.region.lo[1]; j < p.region.hi[1]; ++j) {
        const auto [i0, i1] = grid_.row_interval(planes, j, k, p.region.lo[0], p.region.hi[0]);
        p.hull_voxels += i1 - i0;
        p.solid_in_hull += grid_.row_count(j, k, i0, i1);
      }
  }

  /// Hull of the mesh clipped to the region box plus box corners that lie
  /// deep inside the solid.
  bool build_hull(Piece& p) const {
    const Region& r = p.region;
    const Vec3 lo(grid_.plane(0, r.lo[0]), grid_.plane(1, r.lo[1]), grid_.plane(2, r.lo[2]));
    const Vec3 hi(grid_.plane(0, r.hi[0]), grid_.plane(1, r.hi[1]), grid_.plane(2, r.hi[2]));
    std::vector<Vec3> points;
    std::vector<Vec3> poly;
    for (const auto& t : mesh_.triangles) {
      const Vec3& a = mesh_.vertices[t[0]];
      const Vec3& b = mesh_.vertices[t[1]];
      const Vec3& c = mesh_.vertices[t[2]];
      const Vec3 tlo = a.cwiseMin(b).cwiseMin(c), thi = a.cwiseMax(b).cwiseMax(c);
      if ((tlo.array() > hi.array()).any() || (thi.array() < lo.array()).any()) continue;
      if ((tlo.array() >= lo.array()).all() && (thi.array() <= hi.array()).all()) {
        points.insert(points.end(), {a, b, c});
        continue;
      }
      poly = {a, b, c};
      clip_polygon(poly, lo, hi);
      points.insert(points.end(), poly.begin(), poly.end());
    }
    for (int mask = 0; mask < 8; ++mask) {
      const Index3 corner{(mask & 1) ? r.hi[0] : r.lo[0], (mask & 2) ? r.hi[1] : r.lo[1],
                          (mask & 4) ? r.hi[2] : r.lo[2]};
      bool deep = true;
      for (int n = 0; n < 8 && deep; ++n) {
        deep = grid_.solid(corner[0] - 1 + (n & 1), corner[1] - 1 + ((n >> 1) & 1), corner[2] - 1 + ((n >> 2) & 1));
      }
      if (deep) {
        points.emplace_back(grid_.plane(0, corner[0]), grid_.plane(1, corner[1]), grid_.plane(2, corner[2]));
      }
    }
    if (points.empty()) return false;
    p.hull = convex_hull_or_inflated(points);
    p.has_hull = true;
    return true;
  }

  /// Hull-deficit estimate of one side of a candidate cut: hull of the
  /// extreme solid voxel centers on a subsample of rows, compared against
  /// the solid voxels on those rows.
  double estimate_deficit(const Region& r) const {
    const int stride_j = std::max(1, (r.extent(1) + 23) / 24);
    const int stride_k = std::max(1, (r.extent(2) + 23) / 24);
    std::vector<Vec3> pts;
    std::vector<std::pair<int, int>> rows;
    for (int k = r.lo[2]; k < r.hi[2]; k += stride_k)
      for (int j = r.lo[1]; j < r.hi[1]; j += stride_j) {
        if (grid_.row_count(j, k, r.lo[0], r.hi[0]) == 0) continue;
        int first = r.lo[0], last = r.hi[0] - 1;
        while (!grid_.solid(first, j, k)) ++first;
        while (!grid_.solid(last, j, k)) --last;
        pts.emplace_back(grid_.center(0, first), grid_.center(1, j), grid_.center(2, k));
        pts.emplace_back(grid_.center(0, last), grid_.center(1, j), grid_.center(2, k));
        rows.emplace_back(j, k);
      }
    if (pts.empty()) return 0.0;
    ConvexHull hull;
    try {
      hull = convex_hull(pts);
    } catch (const Error&) {
      return 0.0;  // flat: nothing to gain by splitting further
    }
    const auto planes = face_planes(hull);
    long long deficit = 0;
    for (const auto& [j, k] : rows) {
      const auto [i0, i1] = grid_.row_interval(planes, j, k, r.lo[0], r.hi[0]);
      deficit += (i1 - i0) - grid_.row_count(j, k, i0, i1);
    }
    return static_cast<double>(deficit) * stride_j * stride_k;
  }

  std::vector<int> candidate_cuts(const Region& r, int axis) const {
    const int lo = r.lo[axis], hi = r.hi[axis];
    std::vector<int> cuts;
    if (hi - lo < 2) return cuts;
    for (int m = 1; m < 8; ++m) cuts.push_back(lo + static_cast<int>(std::lround((hi - lo) * m / 8.0)));
    // Positions where the solid cross-section changes most.
    std::vector<long long> slice(static_cast<std::size_t>(hi - lo), 0);
    for (int s = lo; s < hi; ++s) {
      Region sl = r;
      sl.lo[axis] = s;
      sl.hi[axis] = s + 1;
      slice[static_cast<std::size_t>(s - lo)] = grid_.count(sl);
    }
    std::vector<std::pair<long long, int>> jumps;
    for (int s = lo + 1; s < hi; ++s) {
      const long long jump = std::llabs(slice[static_cast<std::size_t>(s - lo)] - slice[static_cast<std::size_t>(s - lo - 1)]);
      if (jump > 0) jumps.emplace_back(-jump, s);
    }
    std::sort(jumps.begin(), jumps.end());
    for (std::size_t i = 0; i < jumps.size() && i < 4; ++i) cuts.push_back(jumps[i].second);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](int c) { return c <= lo || c >= hi; }), cuts.end());
    return cuts;
  }

  bool split(const Piece& parent, Piece& left, Piece& right) const {
    const Region& r = parent.region;
    double best_score = std::numeric_limits<double>::infinity();
    int best_axis = -1, best_cut = -1;
    for (int axis = 0; axis < 3; ++axis) {
      for (int cut : candidate_cuts(r, axis)) {
        Region a = r, b = r;
        a.hi[axis] = cut;
        b.lo[axis] = cut;
        if (grid_.count(a) == 0 || grid_.count(b) == 0) continue;
        const double score = estimate_deficit(a) + estimate_deficit(b);
        if (score < best_score) {
          best_score = score;
          best_axis = axis;
          best_cut = cut;
        }
      }
    }
    if (best_axis < 0) return false;
    Region a = r, b = r;
    a.hi[best_axis] = best_cut;
    b.lo[best_axis] = best_cut;
    left.region = grid_.tighten(a);
    right.region = grid_.tighten(b);
    if (left.region.empty() || right.region.empty()) return false;
    if (!build_hull(left) || !build_hull(right)) return false;
    measure(left);
    measure(right);
    // Regions too thin to cut again are final.
    for (Piece* p : {&left, &right}) {
      p->final = p->region.extent(0) < 2 && p->region.extent(1) < 2 && p->region.extent(2) < 2;
    }
    return true;
  }

  void summarize(ConvexDecomposition& out) const {
    const Index3& n = grid_.dims();
    const double cell = grid_.h() * grid_.h() * grid_.h();
    std::vector<std::vector<std::pair<Vec3, double>>> planes;
    std::vector<std::pair<Vec3, Vec3>> boxes;
    for (const auto& piece : out.pieces) {
      planes.push_back(face_planes(piece));
      Vec3 lo, hi;
      bounds(piece.vertices, lo, hi);
      boxes.emplace_back(lo, hi);
    }
    long long source = 0, covered = 0, united = 0;
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(n[0]));
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j) {
        std::fill(mark.begin(), mark.end(), 0);
        const double y = grid_.center(1, j), z = grid_.center(2, k);
        for (std::size_t p = 0; p < planes.size(); ++p) {
          const auto& [lo, hi] = boxes[p];
          if (y < lo.y() - grid_.h() || y > hi.y() + grid_.h() || z < lo.z() - grid_.h() || z > hi.z() + grid_.h())
            continue;
          const auto [i0, i1] = grid_.row_interval(planes[p], j, k, 0, n[0]);
          for (int i = i0; i < i1; ++i) mark[static_cast<std::size_t>(i)] = 1;
        }
        for (int i = 0; i < n[0]; ++i) {
          const bool s = grid_.solid(i, j, k);
          source += s;
          united += mark[static_cast<std::size_t>(i)];
          covered += s && mark[static_cast<std::size_t>(i)];
        }
      }
    out.source_volume = static_cast<double>(source) * cell;
    out.union_volume = static_cast<double>(united) * cell;
    out.coverage_ratio = united > 0 ? static_cast<double>(source) / static_cast<double>(united) : 1.0;
    out.covered_fraction = source > 0 ? static_cast<double>(covered) / static_cast<double>(source) : 1.0;
  }

  const TriMesh& mesh_;
  DecompositionParams params_;
  VoxelGrid grid_;
};

}  // namespace

ConvexDecomposition convex_decomposition(const TriMesh& mesh, const DecompositionParams& params) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::kDegenerateGeometry, "empty mesh");
  if (params.max_pieces < 1 || params.voxel_resolution < 1 || !(params.concavity_tolerance >= 0)) {
    throw Error(ErrorCode::kInvalidGeometry, "invalid decomposition parameters");
  }
  Vec3 lo, hi;
  bounds(mesh.vertices, lo, hi);
  if (!((hi - lo).maxCoeff() > 0)) {
    ConvexDecomposition out;
    out.concavity_tolerance_used = params.concavity_tolerance;
    out.pieces.push_back(convex_hull_or_inflated(mesh.vertices));
    return out;
  }
  return Decomposer(mesh, params).run();
}

}  // namespace urdd
