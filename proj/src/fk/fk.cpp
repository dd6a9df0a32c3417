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

#include "urdd/fk.hpp"

#include <cmath>
#include <map>

#include "urdd/error.hpp"

namespace urdd {
namespace {

Vec3 vec(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

const Transform& FkResult::at(std::string_view link) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i] == link) return poses[i];
  throw Error(ErrorCode::kUnknownLink, std::string(link));
}

FkModel FkModel::from_urdd(const UrddHandle& urdd) {
  const Json& urdf = urdd.module(kUrdfModule);
  const Json& chain = urdd.module(kChainModule);
  const Json& dofs = urdd.module(kDofModule);

  FkModel fk;
  try {
    fk.num_dofs_ = dofs.at("num_dofs").get<int>();
    const Json& joint_to_dofs = dofs.at("joint_to_dofs");
    const Json& mimics = dofs.at("mimic_bindings");

    std::map<std::string, int, std::less<>> joint_index;
    for (const auto& j : urdf.at("joints")) {
      Joint joint;
      joint.name = j.at("name").get<std::string>();
      const std::string type = j.at("type").get<std::string>();
      const Json& o = j.at("origin");
      joint.origin = {rpy_to_matrix(vec(o.at("rpy"))), vec(o.at("xyz"))};
      joint.axis = vec(j.at("axis")).normalized();
      if (type == "revolute" || type == "continuous") {
        joint.motion = Motion::kRevolute;
      } else if (type == "prismatic") {
        joint.motion = Motion::kPrismatic;
      } else if (type == "planar") {
        joint.motion = Motion::kPlanar;
        plane_basis(joint.axis, joint.plane_u, joint.plane_v);
      } else if (type == "floating") {
        joint.motion = Motion::kFloating;
      }
      const auto own = joint_to_dofs.at(joint.name).get<std::vector<int>>();
      if (!own.empty()) {
        joint.dof = own.front();
        joint.first_dof = own.front();
      }
      joint_index.emplace(joint.name, static_cast<int>(fk.joints_.size()));
      fk.joints_.push_back(std::move(joint));
    }

    // Collapse mimic chains to one affine map of a single DOF.
    for (auto& joint : fk.joints_) {
      double scale = 1.0, offset = 0.0;
      std::string cur = joint.name;
      std::size_t hops = 0;
      while (mimics.contains(cur)) {
        const Json& m = mimics.at(cur);
        const double mult = m.at("multiplier").get<double>();
        offset = scale * m.at("offset").get<double>() + offset;
        scale *= mult;
        cur = m.at("source_joint").get<std::string>();
        if (++hops > fk.joints_.size()) {
          throw Error(ErrorCode::kMalformedModule, "mimic cycle through " + joint.name);
        }
      }
      if (cur != joint.name) {
        auto it = joint_index.find(cur);
        if (it == joint_index.end()) throw Error(ErrorCode::kMalformedModule, "mimic source " + cur);
        joint.dof = fk.joints_[static_cast<std::size_t>(it->second)].dof;
        joint.scale = scale;
        joint.offset = offset;
      }
    }

    std::map<std::string, int, std::less<>> link_index;
    for (const auto& n : chain.at("nodes")) {
      const std::string link = n.at("link").get<std::string>();
      int parent = -1, entry = -1;
      if (!n.at("parent_link").is_null()) {
        parent = link_index.at(n.at("parent_link").get<std::string>());
        entry = joint_index.at(n.at("parent_joint").get<std::string>());
      }
      link_index.emplace(link, static_cast<int>(fk.link_names_.size()));
      fk.link_names_.push_back(link);
      fk.parent_.push_back(parent);
      fk.entry_joint_.push_back(entry);
    }

    if (urdd.has_module(kConnectionsModule)) {
      fk.has_connections_ = true;
      const std::string root = chain.at("root_link").get<std::string>();
      fk.root_paths_.resize(fk.link_names_.size());
      for (const auto& p : urdd.module(kConnectionsModule).at("paths")) {
        if (p.at("from") != root) continue;
        auto target = link_index.find(p.at("to").get<std::string>());
        if (target == link_index.end()) continue;
        std::vector<int> path;
        for (const auto& j : p.at("joints")) path.push_back(joint_index.at(j.get<std::string>()));
        fk.root_paths_[static_cast<std::size_t>(target->second)] = std::move(path);
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("fk model: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("fk model: dangling name: ") + e.what());
  }
  return fk;
}

int FkModel::link_index(std::string_view link) const {
  for (std::size_t i = 0; i < link_names_.size(); ++i)
    if (link_names_[i] == link) return static_cast<int>(i);
  return -1;
}

void FkModel::check(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != num_dofs_) {
    throw Error(ErrorCode::kDimensionMismatch, "configuration has " + std::to_string(q.size()) +
                                                   " values, robot has " + std::to_string(num_dofs_) + " DOFs");
  }
  for (double v : q)
    if (!std::isfinite(v)) throw Error(ErrorCode::kDimensionMismatch, "configuration value not finite");
}

Transform FkModel::joint_transform(const Joint& joint, std::span<const double> q) const {
  Transform motion;
  switch (joint.motion) {
    case Motion::kFixed:
      return joint.origin;
    case Motion::kRevolute:
      motion.rotation = axis_angle(joint.axis, joint.scale * q[joint.dof] + joint.offset);
      break;
    case Motion::kPrismatic:
      motion.translation = joint.axis * (joint.scale * q[joint.dof] + joint.offset);
      break;
    case Motion::kPlanar: {
      const auto d = static_cast<std::size_t>(joint.first_dof);
      motion.translation = joint.plane_u * q[d] + joint.plane_v * q[d + 1];
      motion.rotation = axis_angle(joint.axis, q[d + 2]);
      break;
    }
    case Motion::kFloating: {
      const auto d = static_cast<std::size_t>(joint.first_dof);
      motion.translation = Vec3(q[d], q[d + 1], q[d + 2]);
      motion.rotation = rpy_to_matrix(Vec3(q[d + 3], q[d + 4], q[d + 5]));
      break;
    }
  }
  return joint.origin * motion;
}

FkResult FkModel::compute(std::span<const double> q, const Transform& base) const {
  check(q);
  FkResult result;
  result.links = link_names_;
  result.poses.resize(link_names_.size());
  for (std::size_t i = 0; i < link_names_.size(); ++i) {
    if (parent_[i] < 0) {
      result.poses[i] = base;
    } else {
      result.poses[i] = result.poses[static_cast<std::size_t>(parent_[i])] *
                        joint_transform(joints_[static_cast<std::size_t>(entry_joint_[i])], q);
    }
  }
  return result;
}

Transform FkModel::link_pose(std::span<const double> q, std::string_view link,
                             const Transform& base) const {
  check(q);
  const int index = link_index(link);
  if (index < 0) throw Error(ErrorCode::kUnknownLink, std::string(link));
  if (!has_connections_) {
    throw Error(ErrorCode::kMissingDependencyModule, "connections_module required for single-link FK");
  }
  Transform t = base;
  for (int j : root_paths_[static_cast<std::size_t>(index)]) {
    t = t * joint_transform(joints_[static_cast<std::size_t>(j)], q);
  }
  return t;
}

FkResult fk(const UrddHandle& urdd, std::span<const double> q, const Transform& base) {
  return FkModel::from_urdd(urdd).compute(q, base);
}

Transform fk_link(const UrddHandle& urdd, std::span<const double> q, std::string_view link,
                  const Transform& base) {
  return FkModel::from_urdd(urdd).link_pose(q, link, base);
}

Json transform_to_json(const Transform& t) {
  const auto q = canonical_quaternion(t.rotation);
  return {{"translation", {t.translation.x(), t.translation.y(), t.translation.z()}},
          {"quaternion_wxyz", {q[0], q[1], q[2], q[3]}}};
}

Transform transform_from_json(const Json& doc) {
  const Json& q = doc.at("quaternion_wxyz");
  return {quaternion_to_matrix({q.at(0), q.at(1), q.at(2), q.at(3)}), vec(doc.at("translation"))};
}

}  // namespace urdd
