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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "urdd/math.hpp"
#include "urdd/store.hpp"

namespace urdd {

/// World-frame pose of every link, in chain order.
struct FkResult {
  std::vector<std::string> links;
  std::vector<Transform> poses;

  /// Throws kUnknownLink.
  const Transform& at(std::string_view link) const;
};

/// Forward kinematics built from the urdf, chain and DOF modules of a URDD.
/// Nothing here re-derives structure from URDF: the chain order, DOF
/// indices and mimic bindings are read as stored.
class FkModel {
 public:
  /// Throws kMissingDependencyModule if urdf_module, chain_module or
  /// dof_module is absent.
  static FkModel from_urdd(const UrddHandle& urdd);

  int num_dofs() const { return num_dofs_; }
  const std::vector<std::string>& links() const { return link_names_; }
  int link_index(std::string_view link) const;  // -1 when unknown

  /// Throws kDimensionMismatch when q.size() != num_dofs() or q is not finite.
  FkResult compute(std::span<const double> q, const Transform& base = Transform::identity()) const;

  /// Pose of one link by walking the stored root-to-link path of the
  /// connections module. Throws kUnknownLink, kMissingDependencyModule.
  Transform link_pose(std::span<const double> q, std::string_view link,
                      const Transform& base = Transform::identity()) const;

 private:
  enum class Motion { kFixed, kRevolute, kPrismatic, kPlanar, kFloating };
  struct Joint {
    std::string name;
    Motion motion = Motion::kFixed;
    Transform origin;
    Vec3 axis = Vec3::UnitX();
    Vec3 plane_u = Vec3::UnitY();
    Vec3 plane_v = Vec3::UnitZ();
    // Single-DOF joints (including mimics): value = scale * q[dof] + offset.
    int dof = -1;
    double scale = 1.0;
    double offset = 0.0;
    // First DOF of planar/floating joints.
    int first_dof = -1;
  };

  Transform joint_transform(const Joint& joint, std::span<const double> q) const;
  void check(std::span<const double> q) const;

  int num_dofs_ = 0;
  std::vector<std::string> link_names_;
  std::vector<int> parent_;       // chain index of parent link, -1 for root
  std::vector<int> entry_joint_;  // joint entering each link, -1 for root
  std::vector<Joint> joints_;
  // Root-to-link joint indices from the connections module (may be empty).
  std::vector<std::vector<int>> root_paths_;
  bool has_connections_ = false;
};

FkResult fk(const UrddHandle& urdd, std::span<const double> q,
            const Transform& base = Transform::identity());

Transform fk_link(const UrddHandle& urdd, std::span<const double> q, std::string_view link,
                  const Transform& base = Transform::identity());

/// Translation + canonical (w >= 0) quaternion.
Json transform_to_json(const Transform& t);
Transform transform_from_json(const Json& doc);

}  // namespace urdd
