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

#include "urdd/kinematics.hpp"

#include <algorithm>

#include "urdd/error.hpp"

namespace urdd {

std::string_view to_string(DofKind kind) {
  return kind == DofKind::kRotation ? "rotation" : "translation";
}

DofKind dof_kind(JointType type, int sub_index) {
  switch (type) {
    case JointType::kPrismatic: return DofKind::kTranslation;
    case JointType::kPlanar: return sub_index < 2 ? DofKind::kTranslation : DofKind::kRotation;
    case JointType::kFloating: return sub_index < 3 ? DofKind::kTranslation : DofKind::kRotation;
    default: return DofKind::kRotation;
  }
}

const std::vector<int>& DofMap::dofs_of(std::string_view joint) const {
  static const std::vector<int> kNone;
  for (const auto& [name, dofs] : joint_to_dofs)
    if (name == joint) return dofs;
  return kNone;
}

DofMap derive_dof_map(const RobotModel& model) {
  DofMap map;
  for (std::size_t j = 0; j < model.joints.size(); ++j) {
    const JointSpec& joint = model.joints[j];
    std::vector<int> dofs;
    if (joint.mimic) {
      map.mimic_bindings[joint.name] = *joint.mimic;
    } else {
      for (int sub = 0; sub < dof_contribution(joint.type); ++sub) {
        dofs.push_back(map.num_dofs++);
        map.dof_to_joint.push_back({joint.name, sub, static_cast<int>(j), dof_kind(joint.type, sub)});
      }
    }
    map.joint_to_dofs.emplace_back(joint.name, std::move(dofs));
  }
  return map;
}

std::vector<ChainNode> derive_chain(const RobotModel& model) {
  std::map<std::string, std::vector<const JointSpec*>, std::less<>> children;
  for (const auto& j : model.joints) children[j.parent_link].push_back(&j);

  std::vector<ChainNode> chain;
  chain.reserve(model.links.size());
  struct Pending {
    std::string link;
    const JointSpec* via;
  };
  std::vector<Pending> stack{{model.root_link, nullptr}};
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    ChainNode node;
    node.link_name = cur.link;
    if (cur.via) {
      node.parent_joint = cur.via->name;
      node.parent_link = cur.via->parent_link;
    }
    const auto& kids = children[cur.link];
    for (const auto* j : kids) node.child_joints.push_back(j->name);
    // Reverse push keeps the preorder in joint document order.
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({(*it)->child_link, *it});
    chain.push_back(std::move(node));
  }
  return chain;
}

std::vector<ConnectionPath> derive_connections(const RobotModel& model) {
  // Root-to-link ancestry: links[0] is the root, joints[i] enters links[i+1].
  struct Ancestry {
    std::vector<std::string> links;
    std::vector<std::string> joints;
  };
  std::map<std::string, Ancestry, std::less<>> ancestry;
  for (const auto& node : derive_chain(model)) {
    Ancestry a;
    if (node.parent_link) {
      a = ancestry.at(*node.parent_link);
      a.joints.push_back(*node.parent_joint);
    }
    a.links.push_back(node.link_name);
    ancestry.emplace(node.link_name, std::move(a));
  }

  std::vector<ConnectionPath> paths;
  paths.reserve(model.links.size() * model.links.size());
  for (const auto& from : model.links) {
    const Ancestry& a = ancestry.at(from.name);
    for (const auto& to : model.links) {
      const Ancestry& b = ancestry.at(to.name);
      std::size_t common = 0;
      while (common < a.links.size() && common < b.links.size() && a.links[common] == b.links[common]) {
        ++common;
      }
      const std::size_t lca = common - 1;
      ConnectionPath path{from.name, to.name, {}, {}};
      for (std::size_t i = a.links.size() - 1; i > lca; --i) {
        path.link_sequence.push_back(a.links[i]);
        path.joint_sequence.push_back(a.joints[i - 1]);
      }
      path.link_sequence.push_back(a.links[lca]);
      for (std::size_t i = lca + 1; i < b.links.size(); ++i) {
        path.joint_sequence.push_back(b.joints[i - 1]);
        path.link_sequence.push_back(b.links[i]);
      }
      paths.push_back(std::move(path));
    }
  }
  return paths;
}

std::vector<BoundsEntry> derive_bounds(const RobotModel& model, const DofMap& dof_map) {
  std::vector<BoundsEntry> bounds;
  bounds.reserve(dof_map.dof_to_joint.size());
  for (std::size_t i = 0; i < dof_map.dof_to_joint.size(); ++i) {
    const DofEntry& entry = dof_map.dof_to_joint[i];
    const JointSpec* joint = model.find_joint(entry.joint);
    if (!joint) throw Error(ErrorCode::kDimensionMismatch, "DOF map names unknown joint " + entry.joint);
    BoundsEntry b;
    b.dof_index = static_cast<int>(i);
    b.kind = entry.kind;
    const bool limited = joint->type == JointType::kRevolute || joint->type == JointType::kPrismatic;
    if (limited && joint->limits) {
      if (joint->limits->lower > joint->limits->upper) {
        throw Error(ErrorCode::kInvertedLimits, "joint '" + joint->name + "' has lower > upper");
      }
      b.lower = joint->limits->lower;
      b.upper = joint->limits->upper;
    } else {
      b.unbounded = true;
    }
    bounds.push_back(b);
  }
  return bounds;
}

// ---------------------------------------------------------------------------

Json dof_map_to_json(const DofMap& map) {
  Json dof_to_joint = Json::array();
  for (const auto& e : map.dof_to_joint) {
    dof_to_joint.push_back({{"joint", e.joint},
                            {"sub_index", e.sub_index},
                            {"joint_index", e.joint_index},
                            {"kind", std::string(to_string(e.kind))}});
  }
  Json joint_names = Json::array(), joint_index_to_dofs = Json::array();
  Json joint_to_dofs = Json::object();
  for (const auto& [name, dofs] : map.joint_to_dofs) {
    joint_names.push_back(name);
    joint_index_to_dofs.push_back(dofs);
    joint_to_dofs[name] = dofs;
  }
  Json mimics = Json::object();
  for (const auto& [name, m] : map.mimic_bindings) {
    mimics[name] = {{"source_joint", m.source_joint}, {"multiplier", m.multiplier}, {"offset", m.offset}};
  }
  return {{"num_dofs", map.num_dofs},
          {"dof_to_joint", dof_to_joint},
          {"joint_names", joint_names},
          {"joint_index_to_dofs", joint_index_to_dofs},
          {"joint_to_dofs", joint_to_dofs},
          {"mimic_bindings", mimics}};
}

DofMap dof_map_from_json(const Json& doc) {
  DofMap map;
  map.num_dofs = doc.at("num_dofs").get<int>();
  for (const auto& e : doc.at("dof_to_joint")) {
    map.dof_to_joint.push_back({e.at("joint").get<std::string>(), e.at("sub_index").get<int>(),
                                e.at("joint_index").get<int>(),
                                e.at("kind") == "rotation" ? DofKind::kRotation : DofKind::kTranslation});
  }
  const Json& names = doc.at("joint_names");
  const Json& dofs = doc.at("joint_index_to_dofs");
  for (std::size_t i = 0; i < names.size(); ++i) {
    map.joint_to_dofs.emplace_back(names[i].get<std::string>(), dofs.at(i).get<std::vector<int>>());
  }
  for (auto it = doc.at("mimic_bindings").begin(); it != doc.at("mimic_bindings").end(); ++it) {
    map.mimic_bindings[it.key()] = MimicSpec{it.value().at("source_joint").get<std::string>(),
                                             it.value().at("multiplier").get<double>(),
                                             it.value().at("offset").get<double>()};
  }
  return map;
}

Json chain_to_json(const RobotModel& model, const std::vector<ChainNode>& chain) {
  Json nodes = Json::array();
  for (const auto& n : chain) {
    nodes.push_back({{"link", n.link_name},
                     {"parent_joint", n.parent_joint ? Json(*n.parent_joint) : Json(nullptr)},
                     {"parent_link", n.parent_link ? Json(*n.parent_link) : Json(nullptr)},
                     {"child_joints", n.child_joints}});
  }
  return {{"root_link", model.root_link}, {"num_links", chain.size()}, {"nodes", nodes}};
}

std::vector<ChainNode> chain_from_json(const Json& doc) {
  std::vector<ChainNode> chain;
  for (const auto& n : doc.at("nodes")) {
    ChainNode node;
    node.link_name = n.at("link").get<std::string>();
    if (!n.at("parent_joint").is_null()) node.parent_joint = n.at("parent_joint").get<std::string>();
    if (!n.at("parent_link").is_null()) node.parent_link = n.at("parent_link").get<std::string>();
    node.child_joints = n.at("child_joints").get<std::vector<std::string>>();
    chain.push_back(std::move(node));
  }
  return chain;
}

Json connections_to_json(const RobotModel& model, const std::vector<ConnectionPath>& paths) {
  Json links = Json::array();
  for (const auto& l : model.links) links.push_back(l.name);
  Json entries = Json::array();
  for (const auto& p : paths) {
    entries.push_back({{"from", p.from_link}, {"to", p.to_link}, {"joints", p.joint_sequence},
                       {"links", p.link_sequence}});
  }
  return {{"links", links}, {"num_paths", paths.size()}, {"paths", entries}};
}

Json bounds_to_json(const std::vector<BoundsEntry>& bounds) {
  Json entries = Json::array();
  for (const auto& b : bounds) {
    entries.push_back({{"dof_index", b.dof_index},
                       {"lower", b.lower ? Json(*b.lower) : Json(nullptr)},
                       {"upper", b.upper ? Json(*b.upper) : Json(nullptr)},
                       {"unbounded", b.unbounded},
                       {"kind", std::string(to_string(b.kind))}});
  }
  return {{"num_dofs", bounds.size()}, {"bounds", entries}};
}

std::vector<BoundsEntry> bounds_from_json(const Json& doc) {
  std::vector<BoundsEntry> bounds;
  for (const auto& e : doc.at("bounds")) {
    BoundsEntry b;
    b.dof_index = e.at("dof_index").get<int>();
    if (!e.at("lower").is_null()) b.lower = e.at("lower").get<double>();
    if (!e.at("upper").is_null()) b.upper = e.at("upper").get<double>();
    b.unbounded = e.at("unbounded").get<bool>();
    b.kind = e.value("kind", "rotation") == "rotation" ? DofKind::kRotation : DofKind::kTranslation;
    bounds.push_back(b);
  }
  return bounds;
}

}  // namespace urdd
