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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urdd/model.hpp"
#include "urdd/store.hpp"

namespace urdd {

enum class DofKind { kRotation, kTranslation };

std::string_view to_string(DofKind kind);

/// Kind of sub-DOF `sub_index` of a joint. Planar joints are (u, v, theta);
/// floating joints are (x, y, z, roll, pitch, yaw).
DofKind dof_kind(JointType type, int sub_index);

struct DofEntry {
  std::string joint;
  int sub_index = 0;
  int joint_index = 0;  // position of the joint in document order
  DofKind kind = DofKind::kRotation;
};

struct DofMap {
  int num_dofs = 0;
  std::vector<DofEntry> dof_to_joint;
  /// Every joint, in document order, with its DOF indices (empty for fixed
  /// and mimic joints).
  std::vector<std::pair<std::string, std::vector<int>>> joint_to_dofs;
  std::map<std::string, MimicSpec> mimic_bindings;

  const std::vector<int>& dofs_of(std::string_view joint) const;
};

struct ChainNode {
  std::string link_name;
  std::optional<std::string> parent_joint;
  std::optional<std::string> parent_link;
  std::vector<std::string> child_joints;
};

struct ConnectionPath {
  std::string from_link;
  std::string to_link;
  std::vector<std::string> joint_sequence;
  std::vector<std::string> link_sequence;
};

struct BoundsEntry {
  int dof_index = 0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool unbounded = false;
  DofKind kind = DofKind::kRotation;
};

DofMap derive_dof_map(const RobotModel& model);

/// One node per link, root first, every parent before its children.
std::vector<ChainNode> derive_chain(const RobotModel& model);

/// All L*L ordered pairs (including self-paths), `from` major in link
/// document order.
std::vector<ConnectionPath> derive_connections(const RobotModel& model);

/// Throws kInvertedLimits when a source limit has lower > upper, and
/// kDimensionMismatch when the map does not belong to the model.
std::vector<BoundsEntry> derive_bounds(const RobotModel& model, const DofMap& dof_map);

Json dof_map_to_json(const DofMap& map);
Json chain_to_json(const RobotModel& model, const std::vector<ChainNode>& chain);
Json connections_to_json(const RobotModel& model, const std::vector<ConnectionPath>& paths);
Json bounds_to_json(const std::vector<BoundsEntry>& bounds);

DofMap dof_map_from_json(const Json& doc);
std::vector<ChainNode> chain_from_json(const Json& doc);
std::vector<BoundsEntry> bounds_from_json(const Json& doc);

}  // namespace urdd
