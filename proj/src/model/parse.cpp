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

#include <cerrno>
#include <cstdlib>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "urdd/error.hpp"
#include "urdd/model.hpp"

namespace urdd {
namespace {

namespace pt = boost::property_tree;

constexpr const char* kAttr = "<xmlattr>";

bool is_markup_key(const std::string& key) {
  return key == kAttr || key == "<xmlcomment>" || key == "<xmltext>";
}

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name) {
  if (auto attrs = node.get_child_optional(kAttr)) {
    if (auto v = attrs->get_optional<std::string>(name)) return *v;
  }
  return std::nullopt;
}

std::string required_attribute(const pt::ptree& node, const std::string& element,
                               const std::string& name) {
  auto v = attribute(node, name);
  if (!v) throw Error(ErrorCode::kMalformedXml, "<" + element + "> missing attribute '" + name + "'");
  return *v;
}

double parse_double(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\n' || *end == '\r')) ++end;
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::kMalformedXml, "bad number '" + text + "' for " + what);
  }
  return v;
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  std::string tok;
  std::vector<double> values;
  while (in >> tok) values.push_back(parse_double(tok, what));
  if (values.size() != 3) {
    throw Error(ErrorCode::kMalformedXml, "expected 3 numbers for " + what + ", got '" + text + "'");
  }
  return {values[0], values[1], values[2]};
}

double optional_double(const pt::ptree& node, const std::string& name, double fallback,
                       const std::string& what) {
  auto v = attribute(node, name);
  return v ? parse_double(*v, what + "@" + name) : fallback;
}

std::string element_to_xml(const std::string& key, const pt::ptree& node) {
  pt::ptree wrapper;
  wrapper.add_child(key, node);
  std::ostringstream out;
  pt::write_xml(out, wrapper, pt::xml_writer_make_settings<std::string>(' ', 0));
  std::string text = out.str();
  if (text.rfind("<?xml", 0) == 0) {
    auto nl = text.find('>');
    text = text.substr(nl + 1);
  }
  while (!text.empty() && (text.front() == '\n' || text.front() == ' ')) text.erase(text.begin());
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  return text;
}

/// Records every attribute not in `known` into the passthrough map.
void keep_unknown_attributes(const pt::ptree& node, const std::set<std::string>& known,
                             Passthrough& passthrough) {
  if (auto attrs = node.get_child_optional(kAttr)) {
    for (const auto& [name, value] : *attrs) {
      if (!known.count(name)) passthrough.attributes[name] = value.data();
    }
  }
}

Pose parse_origin(const pt::ptree& parent, const std::string& what) {
  Pose pose;
  if (auto origin = parent.get_child_optional("origin")) {
    if (auto xyz = attribute(*origin, "xyz")) pose.xyz = parse_vec3(*xyz, what + " origin xyz");
    if (auto rpy = attribute(*origin, "rpy")) pose.rpy = parse_vec3(*rpy, what + " origin rpy");
  }
  return pose;
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw Error(ErrorCode::kInvalidGeometry, what + " must be > 0");
  return v;
}

GeometryRef parse_geometry(const pt::ptree& node, const std::string& link_name,
                           const std::string& element) {
  const std::string what = "link '" + link_name + "' " + element;
  GeometryRef geom;
  geom.name = attribute(node, "name");
  keep_unknown_attributes(node, {"name"}, geom.passthrough);
  geom.origin = parse_origin(node, what);
  bool have_shape = false;
  for (const auto& [key, child] : node) {
    if (is_markup_key(key) || key == "origin") continue;
    if (key != "geometry") {
      geom.passthrough.elements.push_back(element_to_xml(key, child));
      continue;
    }
    for (const auto& [shape_key, shape] : child) {
      if (is_markup_key(shape_key)) continue;
      if (have_shape) throw Error(ErrorCode::kInvalidGeometry, what + " has more than one shape");
      have_shape = true;
      if (shape_key == "mesh") {
        MeshShape mesh;
        mesh.filename = required_attribute(shape, "mesh", "filename");
        if (auto scale = attribute(shape, "scale")) {
          mesh.scale = parse_vec3(*scale, what + " mesh scale");
          for (int i = 0; i < 3; ++i) positive(mesh.scale[i], what + " mesh scale");
        }
        geom.shape = mesh;
      } else if (shape_key == "box") {
        Vec3 size = parse_vec3(required_attribute(shape, "box", "size"), what + " box size");
        for (int i = 0; i < 3; ++i) positive(size[i], what + " box size");
        geom.shape = BoxShape{size / 2.0};
      } else if (shape_key == "cylinder") {
        geom.shape = CylinderShape{
            positive(parse_double(required_attribute(shape, "cylinder", "radius"), what), what + " radius"),
            positive(parse_double(required_attribute(shape, "cylinder", "length"), what), what + " length")};
      } else if (shape_key == "sphere") {
        geom.shape = SphereShape{
            positive(parse_double(required_attribute(shape, "sphere", "radius"), what), what + " radius")};
      } else if (shape_key == "capsule") {
        geom.shape = CapsuleShape{
            positive(parse_double(required_attribute(shape, "capsule", "radius"), what), what + " radius"),
            positive(parse_double(required_attribute(shape, "capsule", "length"), what), what + " length")};
      } else {
        throw Error(ErrorCode::kInvalidGeometry, what + " has unsupported shape <" + shape_key + ">");
      }
    }
  }
  if (!have_shape) throw Error(ErrorCode::kInvalidGeometry, what + " has no geometry");
  return geom;
}

LinkSpec parse_link(const pt::ptree& node) {
  LinkSpec link;
  link.name = required_attribute(node, "link", "name");
  keep_unknown_attributes(node, {"name"}, link.passthrough);
  for (const auto& [key, child] : node) {
    if (is_markup_key(key)) continue;
    if (key == "visual") {
      link.visual_geometries.push_back(parse_geometry(child, link.name, "visual"));
    } else if (key == "collision") {
      link.collision_geometries.push_back(parse_geometry(child, link.name, "collision"));
    } else if (key == "inertial") {
      Inertial in;
      in.origin = parse_origin(child, "link '" + link.name + "' inertial");
      if (auto mass = child.get_child_optional("mass")) {
        in.mass = parse_double(required_attribute(*mass, "mass", "value"), "mass");
      }
      if (in.mass < 0.0) throw Error(ErrorCode::kMalformedXml, "link '" + link.name + "' has negative mass");
      if (auto inertia = child.get_child_optional("inertia")) {
        const std::string w = "inertia";
        double ixx = optional_double(*inertia, "ixx", 0, w), ixy = optional_double(*inertia, "ixy", 0, w);
        double ixz = optional_double(*inertia, "ixz", 0, w), iyy = optional_double(*inertia, "iyy", 0, w);
        double iyz = optional_double(*inertia, "iyz", 0, w), izz = optional_double(*inertia, "izz", 0, w);
        in.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
      }
      link.inertial = in;
    } else {
      link.passthrough.elements.push_back(element_to_xml(key, child));
    }
  }
  return link;
}

JointSpec parse_joint(const pt::ptree& node) {
  JointSpec joint;
  joint.name = required_attribute(node, "joint", "name");
  const std::string type_name = required_attribute(node, "joint", "type");
  auto type = joint_type_from_string(type_name);
  if (!type) throw Error(ErrorCode::kInvalidJoint, "joint '" + joint.name + "' has unknown type '" + type_name + "'");
  joint.type = *type;
  keep_unknown_attributes(node, {"name", "type"}, joint.passthrough);
  bool have_parent = false, have_child = false;
  for (const auto& [key, child] : node) {
    if (is_markup_key(key) || key == "origin") continue;
    if (key == "parent") {
      joint.parent_link = required_attribute(child, "parent", "link");
      have_parent = true;
    } else if (key == "child") {
      joint.child_link = required_attribute(child, "child", "link");
      have_child = true;
    } else if (key == "axis") {
      joint.axis = parse_vec3(required_attribute(child, "axis", "xyz"), "joint '" + joint.name + "' axis");
    } else if (key == "limit") {
      JointLimits lim;
      const std::string w = "joint '" + joint.name + "' limit";
      lim.lower = optional_double(child, "lower", 0.0, w);
      lim.upper = optional_double(child, "upper", 0.0, w);
      lim.velocity = optional_double(child, "velocity", 0.0, w);
      lim.effort = optional_double(child, "effort", 0.0, w);
      joint.limits = lim;
    } else if (key == "mimic") {
      MimicSpec mimic;
      mimic.source_joint = required_attribute(child, "mimic", "joint");
      const std::string w = "joint '" + joint.name + "' mimic";
      mimic.multiplier = optional_double(child, "multiplier", 1.0, w);
      mimic.offset = optional_double(child, "offset", 0.0, w);
      joint.mimic = mimic;
    } else {
      joint.passthrough.elements.push_back(element_to_xml(key, child));
    }
  }
  if (!have_parent || !have_child) {
    throw Error(ErrorCode::kMalformedXml, "joint '" + joint.name + "' needs <parent> and <child>");
  }
  joint.origin = parse_origin(node, "joint '" + joint.name + "'");
  return joint;
}

}  // namespace

std::string_view to_string(JointType type) {
  switch (type) {
    case JointType::kRevolute: return "revolute";
    case JointType::kContinuous: return "continuous";
    case JointType::kPrismatic: return "prismatic";
    case JointType::kFixed: return "fixed";
    case JointType::kFloating: return "floating";
    case JointType::kPlanar: return "planar";
  }
  return "fixed";
}

std::optional<JointType> joint_type_from_string(std::string_view name) {
  for (auto t : {JointType::kRevolute, JointType::kContinuous, JointType::kPrismatic,
                 JointType::kFixed, JointType::kFloating, JointType::kPlanar}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

int dof_contribution(JointType type) {
  switch (type) {
    case JointType::kRevolute:
    case JointType::kContinuous:
    case JointType::kPrismatic:
      return 1;
    case JointType::kPlanar: return 3;
    case JointType::kFloating: return 6;
    case JointType::kFixed: return 0;
  }
  return 0;
}

const LinkSpec* RobotModel::find_link(std::string_view link_name) const {
  for (const auto& l : links)
    if (l.name == link_name) return &l;
  return nullptr;
}

const JointSpec* RobotModel::find_joint(std::string_view joint_name) const {
  for (const auto& j : joints)
    if (j.name == joint_name) return &j;
  return nullptr;
}

const JointSpec* RobotModel::parent_joint(std::string_view link_name) const {
  for (const auto& j : joints)
    if (j.child_link == link_name) return &j;
  return nullptr;
}

void validate_model(RobotModel& model) {
  std::map<std::string, std::size_t, std::less<>> link_index;
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    if (model.links[i].name.empty()) throw Error(ErrorCode::kMalformedXml, "link with empty name");
    if (!link_index.emplace(model.links[i].name, i).second) {
      throw Error(ErrorCode::kDuplicateName, "link '" + model.links[i].name + "' declared twice");
    }
  }
  if (model.links.empty()) throw Error(ErrorCode::kMalformedXml, "robot has no links");

  std::set<std::string, std::less<>> joint_names;
  std::map<std::string, std::string, std::less<>> parent_of;  // child link -> joint
  for (auto& joint : model.joints) {
    if (!joint_names.insert(joint.name).second) {
      throw Error(ErrorCode::kDuplicateName, "joint '" + joint.name + "' declared twice");
    }
    for (const auto* link : {&joint.parent_link, &joint.child_link}) {
      if (!link_index.count(*link)) {
        throw Error(ErrorCode::kDanglingLinkReference,
                    "joint '" + joint.name + "' references undeclared link '" + *link + "'");
      }
    }
    if (joint.parent_link == joint.child_link) {
      throw Error(ErrorCode::kKinematicLoop, "joint '" + joint.name + "' connects a link to itself");
    }
    if (!parent_of.emplace(joint.child_link, joint.name).second) {
      throw Error(ErrorCode::kKinematicLoop,
                  "link '" + joint.child_link + "' is the child of more than one joint");
    }

    const bool needs_axis = joint.type != JointType::kFixed && joint.type != JointType::kFloating;
    if (!all_finite(joint.axis)) throw Error(ErrorCode::kInvalidJoint, "joint '" + joint.name + "' axis not finite");
    const double norm = joint.axis.norm();
    if (norm < 1e-12) {
      if (needs_axis) throw Error(ErrorCode::kInvalidJoint, "joint '" + joint.name + "' has a zero axis");
      joint.axis = Vec3::UnitX();
    } else {
      joint.axis /= norm;
    }
    if (joint.type == JointType::kRevolute || joint.type == JointType::kPrismatic) {
      if (!joint.limits) {
        throw Error(ErrorCode::kInvalidJoint, "joint '" + joint.name + "' requires <limit>");
      }
      if (joint.limits->lower > joint.limits->upper) {
        throw Error(ErrorCode::kInvertedLimits, "joint '" + joint.name + "' has lower > upper");
      }
    }
    if (!all_finite(joint.origin.xyz) || !all_finite(joint.origin.rpy)) {
      throw Error(ErrorCode::kMalformedXml, "joint '" + joint.name + "' origin not finite");
    }
  }

  std::vector<std::string> roots;
  for (const auto& link : model.links)
    if (!parent_of.count(link.name)) roots.push_back(link.name);
  if (roots.empty()) throw Error(ErrorCode::kKinematicLoop, "every link has a parent joint");
  if (roots.size() > 1) {
    throw Error(ErrorCode::kMultipleRoots, "links '" + roots[0] + "' and '" + roots[1] + "' both have no parent");
  }
  model.root_link = roots.front();

  // One root and at most one parent per link; anything not reachable from the
  // root sits on a cycle.
  std::map<std::string, std::vector<const JointSpec*>, std::less<>> children;
  for (const auto& j : model.joints) children[j.parent_link].push_back(&j);
  std::set<std::string, std::less<>> reached{model.root_link};
  std::vector<std::string> stack{model.root_link};
  while (!stack.empty()) {
    std::string link = stack.back();
    stack.pop_back();
    for (const auto* j : children[link])
      if (reached.insert(j->child_link).second) stack.push_back(j->child_link);
  }
  if (reached.size() != model.links.size()) {
    for (const auto& link : model.links)
      if (!reached.count(link.name))
        throw Error(ErrorCode::kKinematicLoop, "link '" + link.name + "' lies on a kinematic loop");
  }

  for (const auto& joint : model.joints) {
    if (!joint.mimic) continue;
    if (dof_contribution(joint.type) != 1) {
      throw Error(ErrorCode::kInvalidMimic, "mimic joint '" + joint.name + "' must be single-DOF");
    }
    const JointSpec* source = model.find_joint(joint.mimic->source_joint);
    if (!source) {
      throw Error(ErrorCode::kInvalidMimic, "joint '" + joint.name + "' mimics unknown joint '" +
                                                joint.mimic->source_joint + "'");
    }
    if (dof_contribution(source->type) != 1) {
      throw Error(ErrorCode::kInvalidMimic, "joint '" + joint.name + "' mimics non-single-DOF joint '" +
                                                source->name + "'");
    }
    if (!std::isfinite(joint.mimic->multiplier) || !std::isfinite(joint.mimic->offset)) {
      throw Error(ErrorCode::kInvalidMimic, "joint '" + joint.name + "' mimic coefficients not finite");
    }
    std::set<std::string, std::less<>> visited{joint.name};
    const JointSpec* cur = source;
    while (cur) {
      if (!visited.insert(cur->name).second) {
        throw Error(ErrorCode::kMimicCycle, "mimic chain through '" + joint.name + "' is cyclic");
      }
      cur = cur->mimic ? model.find_joint(cur->mimic->source_joint) : nullptr;
    }
  }

  for (const auto& link : model.links) {
    if (!link.inertial) continue;
    const Mat3& I = link.inertial->inertia;
    if ((I - I.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw Error(ErrorCode::kMalformedXml, "link '" + link.name + "' inertia not symmetric");
    }
  }
}

RobotModel parse_urdf(const std::string& xml_text, const fs::path& asset_root,
                      const ParseOptions& options) {
  pt::ptree doc;
  try {
    std::istringstream in(xml_text);
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kMalformedXml, e.what());
  }
  auto robot_node = doc.get_child_optional("robot");
  if (!robot_node) throw Error(ErrorCode::kMalformedXml, "document has no <robot> element");

  RobotModel model;
  model.name = attribute(*robot_node, "name").value_or("robot");
  keep_unknown_attributes(*robot_node, {"name"}, model.passthrough);
  try {
    for (const auto& [key, child] : *robot_node) {
      if (is_markup_key(key)) continue;
      if (key == "link") {
        model.links.push_back(parse_link(child));
      } else if (key == "joint") {
        model.joints.push_back(parse_joint(child));
      } else {
        model.passthrough.elements.push_back(element_to_xml(key, child));
      }
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::kMalformedXml, e.what());
  }
  validate_model(model);

  if (options.check_assets) {
    for (const auto& link : model.links) {
      for (const auto* list : {&link.visual_geometries, &link.collision_geometries}) {
        for (const auto& g : *list) {
          if (const auto* mesh = std::get_if<MeshShape>(&g.shape)) {
            fs::path resolved = resolve_mesh_path(mesh->filename, asset_root);
            if (!fs::exists(resolved)) {
              throw Error(ErrorCode::kMissingMeshFile,
                          "link '" + link.name + "' mesh " + mesh->filename + " (looked at " +
                              resolved.string() + ")");
            }
          }
        }
      }
    }
  }
  return model;
}

RobotModel parse_urdf_file(const fs::path& urdf_path, std::optional<fs::path> asset_root,
                           const ParseOptions& options) {
  if (!fs::exists(urdf_path)) throw Error(ErrorCode::kIoFailure, "no such file: " + urdf_path.string());
  return parse_urdf(read_file(urdf_path), asset_root.value_or(urdf_path.parent_path()), options);
}

fs::path resolve_mesh_path(const std::string& filename, const fs::path& asset_root) {
  constexpr std::string_view kPackage = "package://";
  constexpr std::string_view kFile = "file://";
  std::vector<fs::path> candidates;
  if (filename.rfind(kPackage, 0) == 0) {
    fs::path rest = filename.substr(kPackage.size());
    candidates.push_back(asset_root / rest);
    // package://<pkg>/x -> <asset_root>/x when the root is the package itself.
    fs::path stripped;
    bool first = true;
    for (const auto& part : rest) {
      if (first) {
        first = false;
        continue;
      }
      stripped /= part;
    }
    if (!stripped.empty()) candidates.push_back(asset_root / stripped);
  } else if (filename.rfind(kFile, 0) == 0) {
    fs::path p = filename.substr(kFile.size());
    candidates.push_back(p.is_absolute() ? p : asset_root / p);
  } else {
    fs::path p = filename;
    candidates.push_back(p.is_absolute() ? p : asset_root / p);
  }
  for (const auto& c : candidates)
    if (fs::exists(c)) return c;
  return candidates.front();
}

}  // namespace urdd
