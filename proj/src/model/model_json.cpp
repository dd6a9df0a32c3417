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

#include "urdd/error.hpp"
#include "urdd/model.hpp"

namespace urdd {
namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kMalformedModule, "expected 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json pose_json(const Pose& p) { return {{"xyz", vec_json(p.xyz)}, {"rpy", vec_json(p.rpy)}}; }
Pose pose_from(const Json& j) { return {vec_from(j.at("xyz")), vec_from(j.at("rpy"))}; }

Json passthrough_json(const Passthrough& p) {
  return {{"elements", p.elements}, {"attributes", p.attributes}};
}

Passthrough passthrough_from(const Json& j) {
  Passthrough p;
  if (j.is_null()) return p;
  p.elements = j.at("elements").get<std::vector<std::string>>();
  p.attributes = j.at("attributes").get<std::map<std::string, std::string>>();
  return p;
}

Json shape_json(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MeshShape>) {
          return {{"type", "mesh"}, {"filename", s.filename}, {"scale", vec_json(s.scale)}};
        } else if constexpr (std::is_same_v<T, BoxShape>) {
          return {{"type", "box"}, {"half_extents", vec_json(s.half_extents)}};
        } else if constexpr (std::is_same_v<T, CylinderShape>) {
          return {{"type", "cylinder"}, {"radius", s.radius}, {"length", s.length}};
        } else if constexpr (std::is_same_v<T, SphereShape>) {
          return {{"type", "sphere"}, {"radius", s.radius}};
        } else {
          return {{"type", "capsule"}, {"radius", s.radius}, {"length", s.length}};
        }
      },
      shape);
}

Shape shape_from(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "mesh") return MeshShape{j.at("filename").get<std::string>(), vec_from(j.at("scale"))};
  if (type == "box") return BoxShape{vec_from(j.at("half_extents"))};
  if (type == "cylinder") return CylinderShape{j.at("radius").get<double>(), j.at("length").get<double>()};
  if (type == "sphere") return SphereShape{j.at("radius").get<double>()};
  if (type == "capsule") return CapsuleShape{j.at("radius").get<double>(), j.at("length").get<double>()};
  throw Error(ErrorCode::kMalformedModule, "unknown shape type " + type);
}

Json geometry_json(const GeometryRef& g) {
  return {{"name", g.name ? Json(*g.name) : Json(nullptr)},
          {"origin", pose_json(g.origin)},
          {"shape", shape_json(g.shape)},
          {"passthrough", passthrough_json(g.passthrough)}};
}

GeometryRef geometry_from(const Json& j) {
  GeometryRef g;
  if (!j.at("name").is_null()) g.name = j.at("name").get<std::string>();
  g.origin = pose_from(j.at("origin"));
  g.shape = shape_from(j.at("shape"));
  g.passthrough = passthrough_from(j.value("passthrough", Json()));
  return g;
}

}  // namespace

Json joint_to_json(const JointSpec& joint) {
  Json limit = nullptr, mimic = nullptr;
  if (joint.limits) {
    limit = {{"lower", joint.limits->lower},
             {"upper", joint.limits->upper},
             {"velocity", joint.limits->velocity},
             {"effort", joint.limits->effort}};
  }
  if (joint.mimic) {
    mimic = {{"joint", joint.mimic->source_joint},
             {"multiplier", joint.mimic->multiplier},
             {"offset", joint.mimic->offset}};
  }
  return {{"name", joint.name},
          {"type", std::string(to_string(joint.type))},
          {"parent", joint.parent_link},
          {"child", joint.child_link},
          {"origin", pose_json(joint.origin)},
          {"axis", vec_json(joint.axis)},
          {"limit", limit},
          {"mimic", mimic},
          {"passthrough", passthrough_json(joint.passthrough)}};
}

JointSpec joint_from_json(const Json& j) {
  try {
    JointSpec joint;
    joint.name = j.at("name").get<std::string>();
    auto type = joint_type_from_string(j.at("type").get<std::string>());
    if (!type) throw Error(ErrorCode::kMalformedModule, "joint '" + joint.name + "' has unknown type");
    joint.type = *type;
    joint.parent_link = j.at("parent").get<std::string>();
    joint.child_link = j.at("child").get<std::string>();
    if (j.contains("origin")) joint.origin = pose_from(j.at("origin"));
    if (j.contains("axis")) joint.axis = vec_from(j.at("axis"));
    if (j.contains("limit") && !j.at("limit").is_null()) {
      const Json& lim = j.at("limit");
      joint.limits = JointLimits{lim.at("lower"), lim.at("upper"), lim.value("velocity", 0.0), lim.value("effort", 0.0)};
    }
    if (j.contains("mimic") && !j.at("mimic").is_null()) {
      const Json& m = j.at("mimic");
      joint.mimic = MimicSpec{m.at("joint").get<std::string>(), m.value("multiplier", 1.0), m.value("offset", 0.0)};
    }
    joint.passthrough = passthrough_from(j.value("passthrough", Json()));
    return joint;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("joint entry: ") + e.what());
  }
}

Json model_to_json(const RobotModel& model) {
  Json links = Json::array();
  for (const auto& link : model.links) {
    Json inertial = nullptr;
    if (link.inertial) {
      const Mat3& I = link.inertial->inertia;
      inertial = {{"mass", link.inertial->mass},
                  {"origin", pose_json(link.inertial->origin)},
                  {"inertia",
                   {{"ixx", I(0, 0)}, {"ixy", I(0, 1)}, {"ixz", I(0, 2)},
                    {"iyy", I(1, 1)}, {"iyz", I(1, 2)}, {"izz", I(2, 2)}}}};
    }
    Json visuals = Json::array(), collisions = Json::array();
    for (const auto& g : link.visual_geometries) visuals.push_back(geometry_json(g));
    for (const auto& g : link.collision_geometries) collisions.push_back(geometry_json(g));
    links.push_back({{"name", link.name},
                     {"inertial", inertial},
                     {"visuals", visuals},
                     {"collisions", collisions},
                     {"passthrough", passthrough_json(link.passthrough)}});
  }
  Json joints = Json::array();
  for (const auto& joint : model.joints) joints.push_back(joint_to_json(joint));
  return {{"robot_name", model.name},
          {"root_link", model.root_link},
          {"links", links},
          {"joints", joints},
          {"passthrough", passthrough_json(model.passthrough)}};
}

RobotModel model_from_json(const Json& doc) {
  try {
    RobotModel model;
    model.name = doc.at("robot_name").get<std::string>();
    for (const auto& l : doc.at("links")) {
      LinkSpec link;
      link.name = l.at("name").get<std::string>();
      if (!l.at("inertial").is_null()) {
        const Json& in = l.at("inertial");
        Inertial inertial;
        inertial.mass = in.at("mass").get<double>();
        inertial.origin = pose_from(in.at("origin"));
        const Json& t = in.at("inertia");
        const double ixx = t.at("ixx"), ixy = t.at("ixy"), ixz = t.at("ixz");
        const double iyy = t.at("iyy"), iyz = t.at("iyz"), izz = t.at("izz");
        inertial.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
        link.inertial = inertial;
      }
      for (const auto& g : l.at("visuals")) link.visual_geometries.push_back(geometry_from(g));
      for (const auto& g : l.at("collisions")) link.collision_geometries.push_back(geometry_from(g));
      link.passthrough = passthrough_from(l.value("passthrough", Json()));
      model.links.push_back(std::move(link));
    }
    for (const auto& j : doc.at("joints")) model.joints.push_back(joint_from_json(j));
    model.passthrough = passthrough_from(doc.value("passthrough", Json()));
    validate_model(model);
    return model;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("urdf_module: ") + e.what());
  }
}

}  // namespace urdd
