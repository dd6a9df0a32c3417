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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "urdd/math.hpp"
#include "urdd/store.hpp"

namespace urdd {

/// Translation (meters) plus URDF roll/pitch/yaw (radians).
struct Pose {
  Vec3 xyz = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();

  Transform transform() const { return {rpy_to_matrix(rpy), xyz}; }
};

enum class JointType { kRevolute, kContinuous, kPrismatic, kFixed, kFloating, kPlanar };

std::string_view to_string(JointType type);
std::optional<JointType> joint_type_from_string(std::string_view name);

/// Number of configuration values a joint of this type owns when it is not a
/// mimic joint.
int dof_contribution(JointType type);

struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
  double velocity = 0.0;
  double effort = 0.0;
};

struct MimicSpec {
  std::string source_joint;
  double multiplier = 1.0;
  double offset = 0.0;
};

/// Unknown child elements (verbatim XML) and attributes kept so the URDF
/// module loses nothing from the source file.
struct Passthrough {
  std::vector<std::string> elements;
  std::map<std::string, std::string> attributes;

  bool empty() const { return elements.empty() && attributes.empty(); }
};

struct JointSpec {
  std::string name;
  JointType type = JointType::kFixed;
  std::string parent_link;
  std::string child_link;
  Pose origin;
  Vec3 axis = Vec3::UnitX();
  std::optional<JointLimits> limits;
  std::optional<MimicSpec> mimic;
  Passthrough passthrough;

  bool is_mimic() const { return mimic.has_value(); }
};

struct MeshShape {
  std::string filename;  // as written in the source, e.g. package://pkg/meshes/a.stl
  Vec3 scale = Vec3::Ones();
};
struct BoxShape {
  Vec3 half_extents = Vec3::Zero();
};
struct CylinderShape {
  double radius = 0.0;
  double length = 0.0;
};
struct SphereShape {
  double radius = 0.0;
};
struct CapsuleShape {
  double radius = 0.0;
  double length = 0.0;
};
using Shape = std::variant<MeshShape, BoxShape, CylinderShape, SphereShape, CapsuleShape>;

struct GeometryRef {
  std::optional<std::string> name;
  Pose origin;
  Shape shape;
  Passthrough passthrough;
};

struct Inertial {
  double mass = 0.0;
  Pose origin;
  Mat3 inertia = Mat3::Zero();
};

struct LinkSpec {
  std::string name;
  std::optional<Inertial> inertial;
  std::vector<GeometryRef> visual_geometries;
  std::vector<GeometryRef> collision_geometries;
  Passthrough passthrough;
};

struct RobotModel {
  std::string name;
  std::vector<LinkSpec> links;
  std::vector<JointSpec> joints;
  std::string root_link;
  Passthrough passthrough;

  const LinkSpec* find_link(std::string_view link_name) const;
  const JointSpec* find_joint(std::string_view joint_name) const;
  /// Joint whose child is `link_name`; nullptr for the root.
  const JointSpec* parent_joint(std::string_view link_name) const;
};

struct ParseOptions {
  /// Check at parse time that every referenced mesh file exists.
  bool check_assets = false;
};

/// Parses URDF XML. Links and joints keep document order. Throws Error with
/// kMalformedXml, kDuplicateName, kDanglingLinkReference, kKinematicLoop,
/// kMultipleRoots, kMimicCycle, kInvalidMimic, kInvalidJoint,
/// kInvalidGeometry, kInvertedLimits or kMissingMeshFile.
RobotModel parse_urdf(const std::string& xml_text, const fs::path& asset_root,
                      const ParseOptions& options = {});

RobotModel parse_urdf_file(const fs::path& urdf_path, std::optional<fs::path> asset_root = std::nullopt,
                           const ParseOptions& options = {});

/// Resolves a mesh filename (relative, absolute, file:// or package://)
/// against the asset root. Returns the first candidate that exists, or the
/// primary candidate when none does.
fs::path resolve_mesh_path(const std::string& filename, const fs::path& asset_root);

/// Checks the tree and naming invariants, and normalizes joint axes. Used by
/// the parser and by anything that builds a RobotModel by hand.
void validate_model(RobotModel& model);

/// urdf_module payload and its inverse.
Json model_to_json(const RobotModel& model);
RobotModel model_from_json(const Json& doc);

/// One joint entry of the urdf_module payload. On input, origin, axis,
/// limit, mimic and passthrough are optional.
Json joint_to_json(const JointSpec& joint);
JointSpec joint_from_json(const Json& doc);

}  // namespace urdd
