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

#include "urdd/bounding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <list>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "urdd/error.hpp"

namespace urdd {
namespace {

/// Permutes and flips the columns of a rotation so that it is as close to
/// the identity as possible; keeps the result right-handed.
Mat3 canonical_frame(const Mat3& frame) {
  static const std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  Mat3 best = frame;
  double best_score = -1;
  for (const auto& perm : kPerms) {
    double score = 0;
    for (int k = 0; k < 3; ++k) score += std::abs(frame(k, perm[k]));
    if (score > best_score + 1e-12) {
      best_score = score;
      for (int k = 0; k < 3; ++k) best.col(k) = frame.col(perm[k]);
    }
  }
  for (int k = 0; k < 3; ++k)
    if (best(k, k) < 0) best.col(k) = -best.col(k);
  if (best.determinant() < 0) {
    int weakest = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(best(k, k)) < std::abs(best(weakest, weakest))) weakest = k;
    best.col(weakest) = -best.col(weakest);
  }
  return best;
}

bool nearly_equal(double a, double b, double scale) { return std::abs(a - b) <= kEigenTieTolerance * scale; }

/// Completes a single well-defined axis with the world axis that projects
/// most strongly onto its orthogonal plane.
Mat3 frame_from_axis(const Vec3& axis) {
  Vec3 best_proj = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    const Vec3 w = Vec3::Unit(k);
    const Vec3 proj = w - w.dot(axis) * axis;
    if (proj.norm() > best_proj.norm() + 1e-12) best_proj = proj;
  }
  const Vec3 u = best_proj.normalized();
  Mat3 frame;
  frame.col(0) = axis;
  frame.col(1) = u;
  frame.col(2) = axis.cross(u);
  return frame;
}

std::vector<Eigen::Vector2d> hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

/// Frame whose first axis is `normal` and whose other two axes give the
/// minimum-area rectangle of the projected points. Returns the box volume.
double best_frame_for_normal(const std::vector<Vec3>& points, const Vec3& normal, Mat3& frame) {
  Vec3 u, v;
  plane_basis(normal, u, v);
  std::vector<Eigen::Vector2d> proj;
  proj.reserve(points.size());
  double nlo = std::numeric_limits<double>::infinity(), nhi = -nlo;
  for (const auto& p : points) {
    proj.emplace_back(p.dot(u), p.dot(v));
    nlo = std::min(nlo, p.dot(normal));
    nhi = std::max(nhi, p.dot(normal));
  }
  const auto h = hull_2d(std::move(proj));
  Eigen::Vector2d best_dir(1, 0);
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    Eigen::Vector2d e = h[(i + 1) % h.size()] - h[i];
    if (e.norm() <= 0) continue;
    e.normalize();
    const Eigen::Vector2d f(-e.y(), e.x());
    double alo = std::numeric_limits<double>::infinity(), ahi = -alo, blo = alo, bhi = -alo;
    for (const auto& q : h) {
      alo = std::min(alo, q.dot(e));
      ahi = std::max(ahi, q.dot(e));
      blo = std::min(blo, q.dot(f));
      bhi = std::max(bhi, q.dot(f));
    }
    const double area = (ahi - alo) * (bhi - blo);
    if (area < best_area) {
      best_area = area;
      best_dir = e;
    }
  }
  const Vec3 d = (best_dir.x() * u + best_dir.y() * v).normalized();
  frame.col(0) = normal;
  frame.col(1) = d;
  frame.col(2) = normal.cross(d);
  return best_area * (nhi - nlo);
}

struct Ball {
  Vec3 center = Vec3::Zero();
  double r2 = -1.0;  // empty ball

  bool contains(const Vec3& p) const {
    return (p - center).squaredNorm() <= r2 * (1.0 + 1e-12) + 1e-300;
  }
};

Ball ball_two(const Vec3& a, const Vec3& b) {
  Ball ball;
  ball.center = 0.5 * (a + b);
  ball.r2 = (a - ball.center).squaredNorm();
  return ball;
}

Ball ball_three(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a;
  const Vec3 n = ab.cross(ac);
  const double n2 = n.squaredNorm();
  if (n2 <= 1e-24 * ab.squaredNorm() * ac.squaredNorm()) {
    // Collinear: the farthest pair decides.
    Ball best = ball_two(a, b);
    for (const Ball& cand : {ball_two(a, c), ball_two(b, c)})
      if (cand.r2 > best.r2) best = cand;
    return best;
  }
  Ball ball;
  ball.center = a + (n.cross(ab) * ac.squaredNorm() + ac.cross(n) * ab.squaredNorm()) / (2.0 * n2);
  ball.r2 = std::max({(a - ball.center).squaredNorm(), (b - ball.center).squaredNorm(),
                      (c - ball.center).squaredNorm()});
  return ball;
}

Ball ball_four(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Mat3 m;
  m.row(0) = 2.0 * (b - a);
  m.row(1) = 2.0 * (c - a);
  m.row(2) = 2.0 * (d - a);
  const double scale = (b - a).norm() * (c - a).norm() * (d - a).norm() * 8.0;
  const double det = m.determinant();
  if (std::abs(det) > 1e-12 * scale) {
    const Vec3 rhs((b - a).squaredNorm(), (c - a).squaredNorm(), (d - a).squaredNorm());
    Ball ball;
    ball.center = a + m.fullPivLu().solve(rhs);
    ball.r2 = std::max({(a - ball.center).squaredNorm(), (b - ball.center).squaredNorm(),
                        (c - ball.center).squaredNorm(), (d - ball.center).squaredNorm()});
    return ball;
  }
  // Coplanar support: the smallest circumscribed 3-subset ball that
  // contains the fourth point.
  const std::array<Vec3, 4> pts{a, b, c, d};
  Ball best;
  for (int skip = 3; skip >= 0; --skip) {
    std::array<Vec3, 3> tri;
    for (int i = 0, k = 0; i < 4; ++i)
      if (i != skip) tri[k++] = pts[i];
    Ball cand = ball_three(tri[0], tri[1], tri[2]);
    if (!cand.contains(pts[skip])) continue;
    if (best.r2 < 0 || cand.r2 < best.r2) best = cand;
  }
  if (best.r2 < 0) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        Ball cand = ball_two(pts[i], pts[j]);
        if (cand.r2 > best.r2) best = cand;
      }
  }
  return best;
}

Ball ball_from_support(const std::vector<Vec3>& s) {
  switch (s.size()) {
    case 0: return {};
    case 1: return {s[0], 0.0};
    case 2: return ball_two(s[0], s[1]);
    case 3: return ball_three(s[0], s[1], s[2]);
    default: return ball_four(s[0], s[1], s[2], s[3]);
  }
}

Ball move_to_front(std::list<Vec3>& pts, std::list<Vec3>::iterator end, std::vector<Vec3>& support) {
  Ball ball = ball_from_support(support);
  if (support.size() == 4) return ball;
  for (auto it = pts.begin(); it != end;) {
    auto next = std::next(it);
    if (!ball.contains(*it)) {
      support.push_back(*it);
      ball = move_to_front(pts, it, support);
      support.pop_back();
      pts.splice(pts.begin(), pts, it);
    }
    it = next;
  }
  return ball;
}

}  // namespace

std::vector<Vec3> OrientedBoundingBox::corners() const {
  std::vector<Vec3> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? half_extents.x() : -half_extents.x(), (i & 2) ? half_extents.y() : -half_extents.y(),
                     (i & 4) ? half_extents.z() : -half_extents.z());
    out.push_back(center + axes * local);
  }
  return out;
}

double OrientedBoundingBox::excess(const Vec3& p) const {
  const Vec3 local = axes.transpose() * (p - center);
  return (local.cwiseAbs() - half_extents).maxCoeff();
}

Mat3 principal_axes(const TriMesh& mesh) {
  Mat3 second = Mat3::Zero();
  Vec3 first = Vec3::Zero();
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    const Vec3 s = a + b + c;
    second += area / 12.0 * (a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose());
    first += area / 3.0 * s;
    total += area;
  }
  if (total <= 0.0) {
    for (const auto& p : mesh.vertices) {
      second += p * p.transpose();
      first += p;
    }
    total = static_cast<double>(mesh.vertices.size());
  }
  if (total <= 0.0) return Mat3::Identity();
  const Vec3 mean = first / total;
  const Mat3 cov = second / total - mean * mean.transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  const Vec3 ev = solver.eigenvalues();  // ascending
  const Mat3 vecs = solver.eigenvectors();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  const bool e01 = nearly_equal(ev[0], ev[1], scale);
  const bool e12 = nearly_equal(ev[1], ev[2], scale);
  if (e01 && e12) return Mat3::Identity();
  if (e01) return canonical_frame(frame_from_axis(vecs.col(2)));
  if (e12) return canonical_frame(frame_from_axis(vecs.col(0)));
  Mat3 frame = vecs;
  frame.col(2) = frame.col(0).cross(frame.col(1));
  return canonical_frame(frame);
}

OrientedBoundingBox fit_box(const std::vector<Vec3>& points, const Mat3& axes) {
  OrientedBoundingBox box;
  box.axes = axes;
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const auto& p : points) {
    const Vec3 local = axes.transpose() * p;
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }
  if (points.empty()) lo = hi = Vec3::Zero();
  box.center = axes * (0.5 * (lo + hi));
  box.half_extents = (0.5 * (hi - lo)).cwiseMax(kMinHalfExtent);
  // Guard against rounding in the center reconstruction.
  for (const auto& p : points) {
    const Vec3 local = (axes.transpose() * (p - box.center)).cwiseAbs();
    box.half_extents = box.half_extents.cwiseMax(local);
  }
  return box;
}

OrientedBoundingBox oriented_bounding_box(const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::kInvalidGeometry, "bounding box of an empty mesh");
  const Mat3 pca = principal_axes(mesh);
  OrientedBoundingBox best = fit_box(mesh.vertices, pca);
  if (mesh.vertices.size() < 4) return best;

  ConvexHull hull;
  try {
    hull = convex_hull(mesh.vertices);
  } catch (const Error&) {
    return best;  // flat or linear: the principal frame is already tight
  }
  // Candidate normals: the principal axes, then hull face normals by area.
  std::vector<std::pair<double, Vec3>> faces;
  for (const auto& t : hull.triangles) {
    const Vec3& a = hull.vertices[t[0]];
    const Vec3 n = (hull.vertices[t[1]] - a).cross(hull.vertices[t[2]] - a);
    if (n.norm() > 0) faces.emplace_back(0.5 * n.norm(), n.normalized());
  }
  std::stable_sort(faces.begin(), faces.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<Vec3> normals{pca.col(0), pca.col(1), pca.col(2)};
  for (const auto& [area, n] : faces) {
    if (normals.size() >= 3 + 64) break;
    bool seen = false;
    for (const auto& m : normals) seen = seen || std::abs(m.dot(n)) > 1.0 - 1e-12;
    if (!seen) normals.push_back(n);
  }

  double best_volume = best.volume();
  for (const auto& n : normals) {
    Mat3 frame;
    const double volume = best_frame_for_normal(hull.vertices, n, frame);
    if (volume < best_volume * (1.0 - 1e-9)) {
      best_volume = volume;
      best = fit_box(mesh.vertices, canonical_frame(frame));
    }
  }
  return best;
}

BoundingSphere bounding_sphere(const std::vector<Vec3>& points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidGeometry, "bounding sphere of an empty point set");
  std::vector<Vec3> shuffled = points;
  std::mt19937_64 rng(0x5eed);
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng() % i]);
  std::list<Vec3> pts(shuffled.begin(), shuffled.end());
  std::vector<Vec3> support;
  const Ball ball = move_to_front(pts, pts.end(), support);
  BoundingSphere sphere;
  sphere.center = ball.center;
  double r2 = 0.0;
  for (const auto& p : points) r2 = std::max(r2, (p - sphere.center).squaredNorm());
  sphere.radius = std::sqrt(r2);
  return sphere;
}

}  // namespace urdd
