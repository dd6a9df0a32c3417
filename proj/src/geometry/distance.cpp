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

#include "urdd/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace urdd {
namespace {

struct Simplex {
  std::array<Vec3, 4> p;
  int n = 0;
};

/// Closest point to the origin on segment ab; reduces `s` to the support.
Vec3 closest_segment(Simplex& s) {
  const Vec3 a = s.p[0], b = s.p[1];
  const Vec3 ab = b - a;
  const double denom = ab.squaredNorm();
  const double t = denom > 0 ? -a.dot(ab) / denom : 0.0;
  if (t <= 0) {
    s.n = 1;
    return a;
  }
  if (t >= 1) {
    s.p[0] = b;
    s.n = 1;
    return b;
  }
  return a + t * ab;
}

/// Closest point to the origin on triangle abc (Voronoi-region walk).
Vec3 closest_triangle(const Vec3& a, const Vec3& b, const Vec3& c, Simplex& out) {
  const Vec3 ab = b - a, ac = c - a, ap = -a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) {
    out.p[0] = a;
    out.n = 1;
    return a;
  }
  const Vec3 bp = -b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) {
    out.p[0] = b;
    out.n = 1;
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const double v = d1 / (d1 - d3);
    out.p[0] = a;
    out.p[1] = b;
    out.n = 2;
    return a + v * ab;
  }
  const Vec3 cp = -c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) {
    out.p[0] = c;
    out.n = 1;
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const double w = d2 / (d2 - d6);
    out.p[0] = a;
    out.p[1] = c;
    out.n = 2;
    return a + w * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    out.p[0] = b;
    out.p[1] = c;
    out.n = 2;
    return b + w * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  out.p[0] = a;
  out.p[1] = b;
  out.p[2] = c;
  out.n = 3;
  return a + ab * v + ac * w;
}

/// Closest point on the tetrahedron; sets `inside` when it contains the
/// origin.
Vec3 closest_tetrahedron(Simplex& s, bool& inside) {
  static constexpr int kFaces[4][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 3, 2, 0}};
  const double volume = (s.p[1] - s.p[0]).dot((s.p[2] - s.p[0]).cross(s.p[3] - s.p[0]));
  double scale = 0;
  for (int i = 0; i < 4; ++i) scale = std::max(scale, s.p[i].norm());
  const bool degenerate = std::abs(volume) <= 1e-14 * scale * scale * scale;
  inside = !degenerate;
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_point = Vec3::Zero();
  Simplex best_simplex;
  for (const auto& f : kFaces) {
    const Vec3& a = s.p[f[0]];
    const Vec3& b = s.p[f[1]];
    const Vec3& c = s.p[f[2]];
    const Vec3& d = s.p[f[3]];
    const Vec3 n = (b - a).cross(c - a);
    const double side_origin = n.dot(-a);
    const double side_d = n.dot(d - a);
    const bool outside = degenerate || side_origin * side_d < 0 || side_origin == 0;
    if (!outside) continue;
    if (side_origin != 0 || degenerate) inside = false;
    Simplex cand;
    const Vec3 q = closest_triangle(a, b, c, cand);
    if (q.squaredNorm() < best) {
      best = q.squaredNorm();
      best_point = q;
      best_simplex = cand;
    }
  }
  if (inside) return Vec3::Zero();
  if (!std::isfinite(best)) {
    inside = true;
    return Vec3::Zero();
  }
  s = best_simplex;
  return best_point;
}

template <typename SupportA, typename SupportB>
double gjk(const SupportA& support_a, const SupportB& support_b, Vec3 direction) {
  if (direction.squaredNorm() <= 0) direction = Vec3::UnitX();
  Simplex s;
  Vec3 v = support_a(direction) - support_b(-direction);
  s.p[0] = v;
  s.n = 1;
  double scale = v.norm();
  double prev = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 128; ++iter) {
    const double vv = v.squaredNorm();
    if (vv <= 1e-24 * std::max(scale * scale, 1e-30)) return 0.0;
    const Vec3 w = support_a(-v) - support_b(v);
    scale = std::max(scale, w.norm());
    // Converged: the support point does not get closer than v itself.
    if (vv - v.dot(w) <= 1e-12 * vv) return std::sqrt(vv);
    bool duplicate = false;
    for (int i = 0; i < s.n; ++i) duplicate = duplicate || (s.p[i] - w).squaredNorm() <= 1e-28 * scale * scale;
    if (duplicate) return std::sqrt(vv);
    s.p[s.n++] = w;
    bool inside = false;
    switch (s.n) {
      case 2: v = closest_segment(s); break;
      case 3: {
        Simplex out;
        v = closest_triangle(s.p[0], s.p[1], s.p[2], out);
        s = out;
        break;
      }
      default: v = closest_tetrahedron(s, inside); break;
    }
    if (inside) return 0.0;
    const double nv = v.squaredNorm();
    if (nv >= prev) return std::sqrt(std::min(nv, prev));
    prev = nv;
  }
  return v.norm();
}

}  // namespace

double gjk_distance(const SupportFn& a, const SupportFn& b, const Vec3& initial_direction) {
  return gjk(a, b, initial_direction);
}

double convex_distance(const ConvexHull& a, const Transform& pose_a, const ConvexHull& b, const Transform& pose_b) {
  int hint_a = 0, hint_b = 0;
  const Mat3 ra_t = pose_a.rotation.transpose();
  const Mat3 rb_t = pose_b.rotation.transpose();
  auto sa = [&](const Vec3& d) {
    const int i = a.support_index(ra_t * d, hint_a);
    return pose_a * a.vertices[static_cast<std::size_t>(i)];
  };
  auto sb = [&](const Vec3& d) {
    const int i = b.support_index(rb_t * d, hint_b);
    return pose_b * b.vertices[static_cast<std::size_t>(i)];
  };
  return gjk(sa, sb, pose_a * a.centroid - pose_b * b.centroid);
}

double box_distance(const OrientedBoundingBox& a, const Transform& pose_a, const OrientedBoundingBox& b,
                    const Transform& pose_b) {
  const Mat3 axes_a = pose_a.rotation * a.axes;
  const Mat3 axes_b = pose_b.rotation * b.axes;
  const Vec3 ca = pose_a * a.center;
  const Vec3 cb = pose_b * b.center;
  auto support = [](const Mat3& axes, const Vec3& center, const Vec3& half) {
    return [&axes, &center, &half](const Vec3& d) {
      Vec3 p = center;
      for (int k = 0; k < 3; ++k) p += (axes.col(k).dot(d) >= 0 ? half[k] : -half[k]) * axes.col(k);
      return p;
    };
  };
  return gjk(support(axes_a, ca, a.half_extents), support(axes_b, cb, b.half_extents), ca - cb);
}

double sphere_distance(const BoundingSphere& a, const Transform& pose_a, const BoundingSphere& b,
                       const Transform& pose_b) {
  const double d = ((pose_a * a.center) - (pose_b * b.center)).norm() - a.radius - b.radius;
  return d > 0 ? d : 0.0;
}

}  // namespace urdd
