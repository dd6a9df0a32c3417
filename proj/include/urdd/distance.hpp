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

#include <functional>

#include "urdd/bounding.hpp"
#include "urdd/hull.hpp"
#include "urdd/math.hpp"

namespace urdd {

/// Support mapping of a convex set: a point of the set maximizing
/// dot(point, direction).
using SupportFn = std::function<Vec3(const Vec3& direction)>;

/// Euclidean distance between two convex sets given by support mappings
/// (GJK). Exactly 0 when the sets touch or overlap.
double gjk_distance(const SupportFn& a, const SupportFn& b, const Vec3& initial_direction);

/// Separation distance between two posed convex hulls; 0 on contact.
double convex_distance(const ConvexHull& a, const Transform& pose_a, const ConvexHull& b, const Transform& pose_b);

double box_distance(const OrientedBoundingBox& a, const Transform& pose_a, const OrientedBoundingBox& b,
                    const Transform& pose_b);

double sphere_distance(const BoundingSphere& a, const Transform& pose_a, const BoundingSphere& b,
                       const Transform& pose_b);

}  // namespace urdd
