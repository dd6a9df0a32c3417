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

#include <atomic>
#include <chrono>
#include <set>

#include "urdd/error.hpp"
#include "urdd/pipeline.hpp"

namespace urdd {
namespace {

bool has_mesh(const std::vector<GeometryRef>& geometries) {
  for (const auto& g : geometries)
    if (std::holds_alternative<MeshShape>(g.shape)) return true;
  return false;
}

/// Temporary directory removed on scope exit.
class StagingDir {
 public:
  StagingDir() {
    static std::atomic<unsigned> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("urdd-compose-" + std::to_string(stamp) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~StagingDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  StagingDir(const StagingDir&) = delete;
  StagingDir& operator=(const StagingDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

/// Replaces mesh-bearing geometry lists of `model` with one reference to a
/// staged copy of the merged mesh stored in the source URDD. The staged
/// path depends only on the final (prefixed) link name, so the result does
/// not depend on how composites were nested.
void stage_meshes(RobotModel& model, const UrddHandle& source, const std::string& prefix, const fs::path& staging) {
  bool needed = false;
  for (const auto& link : model.links) needed |= has_mesh(link.visual_geometries) || has_mesh(link.collision_geometries);
  if (!needed) return;
  if (!source.has_module(kOriginalMeshesModule)) {
    throw Error(ErrorCode::kMissingDependencyModule,
                "robot '" + source.robot_name() + "' has mesh geometry but no " + std::string(kOriginalMeshesModule));
  }
  std::map<std::string, Json> entries;
  for (const auto& e : source.module(kOriginalMeshesModule).at("links")) entries[e.at("link").get<std::string>()] = e;

  for (auto& link : model.links) {
    const std::string stem = std::string(kOriginalMeshesModule) + "/meshes/" + encode_link_name(prefix + link.name);
    auto restage = [&](std::vector<GeometryRef>& geometries, const char* key, const std::string& target) {
      if (!has_mesh(geometries)) return;
      auto it = entries.find(link.name);
      if (it == entries.end()) {
        throw Error(ErrorCode::kMalformedModule, "no original mesh entry for link '" + link.name + "'");
      }
      geometries.clear();
      const Json& summary = it->second.at(key);
      if (summary.is_null()) return;  // every source geometry was empty
      const std::string bytes =
          source.read_module_file(kOriginalMeshesModule, summary.at("files").at("obj").get<std::string>());
      write_file(staging / target, bytes);
      GeometryRef ref;
      ref.shape = MeshShape{target, Vec3::Ones()};
      geometries.push_back(std::move(ref));
    };
    restage(link.visual_geometries, "visual", stem + ".obj");
    restage(link.collision_geometries, "collision", stem + "/collision.obj");
  }
}

Json source_record(const UrddHandle& urdd, const std::string& prefix) {
  Json sources = Json::array();
  const Json& ext = urdd.manifest().extensions;
  // Nested composites list their own sources, so provenance stays complete.
  if (ext.contains("composite") && ext["composite"].contains("sources")) {
    for (const auto& s : ext["composite"]["sources"]) {
      Json copy = s;
      copy["prefix"] = prefix + s.value("prefix", "");
      sources.push_back(std::move(copy));
    }
  }
  return {{"robot_name", urdd.robot_name()}, {"manifest_digest", manifest_digest(urdd)}, {"prefix", prefix},
          {"sources", sources}};
}

}  // namespace

std::string default_prefix(const std::string& robot_name) { return robot_name + "/"; }

std::string manifest_digest(const UrddHandle& urdd) {
  return sha256_hex(canonical_json(manifest_to_json(urdd.manifest())));
}

RobotModel prefix_model(const RobotModel& model, const std::string& prefix) {
  RobotModel out = model;
  if (prefix.empty()) return out;
  for (auto& link : out.links) link.name = prefix + link.name;
  for (auto& joint : out.joints) {
    joint.name = prefix + joint.name;
    joint.parent_link = prefix + joint.parent_link;
    joint.child_link = prefix + joint.child_link;
    if (joint.mimic) joint.mimic->source_joint = prefix + joint.mimic->source_joint;
  }
  out.root_link = prefix + out.root_link;
  return out;
}

RobotModel combine_models(const RobotModel& parent, const RobotModel& child, const AttachSpec& spec) {
  if (!parent.find_link(spec.attach_link)) {
    throw Error(ErrorCode::kUnknownAttachLink,
                "link '" + spec.attach_link + "' does not exist in robot '" + parent.name + "'");
  }
  const RobotModel p = prefix_model(parent, spec.parent_prefix);
  const RobotModel c = prefix_model(child, spec.child_prefix);

  JointSpec joint = spec.joint;
  const std::string attach = spec.parent_prefix + spec.attach_link;
  if (joint.name.empty()) throw Error(ErrorCode::kIllegalJoint, "attachment joint has no name");
  if (!joint.parent_link.empty() && joint.parent_link != attach && joint.parent_link != spec.attach_link) {
    throw Error(ErrorCode::kIllegalJoint,
                "attachment joint parent '" + joint.parent_link + "' is not the attach link '" + attach + "'");
  }
  joint.parent_link = attach;
  if ((joint.type == JointType::kRevolute || joint.type == JointType::kPrismatic) && !joint.limits) {
    throw Error(ErrorCode::kIllegalJoint, "attachment joint '" + joint.name + "' of type " +
                                              std::string(to_string(joint.type)) + " requires limits");
  }
  if (joint.child_link != c.root_link) {
    throw Error(ErrorCode::kIllegalJoint, "attachment joint child '" + joint.child_link +
                                              "' must be the child robot's prefixed root link '" + c.root_link + "'");
  }

  std::set<std::string> links, joints;
  for (const auto* m : {&p, &c}) {
    for (const auto& l : m->links) {
      if (!links.insert(l.name).second) {
        throw Error(ErrorCode::kNameCollision, "link name '" + l.name + "' occurs in both robots");
      }
    }
    for (const auto& j : m->joints) {
      if (!joints.insert(j.name).second) {
        throw Error(ErrorCode::kNameCollision, "joint name '" + j.name + "' occurs in both robots");
      }
    }
  }
  if (joints.count(joint.name)) {
    throw Error(ErrorCode::kNameCollision, "attachment joint name '" + joint.name + "' is already used");
  }

  RobotModel out;
  out.name = parent.name + "+" + child.name;
  out.root_link = p.root_link;
  out.passthrough = p.passthrough;
  out.links = p.links;
  out.links.insert(out.links.end(), c.links.begin(), c.links.end());
  out.joints = p.joints;
  out.joints.push_back(joint);
  out.joints.insert(out.joints.end(), c.joints.begin(), c.joints.end());
  try {
    validate_model(out);
  } catch (const Error& e) {
    if (is_input_error(e.code()) && e.code() != ErrorCode::kDuplicateName) {
      throw Error(ErrorCode::kIllegalJoint, std::string("attachment joint rejected: ") + e.what());
    }
    throw;
  }
  return out;
}

ConvertReport combine_urdds(const UrddHandle& parent, const UrddHandle& child, const AttachSpec& spec,
                            const fs::path& out_dir, ConvertOptions options) {
  RobotModel parent_model = model_from_json(parent.module(kUrdfModule));
  RobotModel child_model = model_from_json(child.module(kUrdfModule));

  StagingDir staging;
  stage_meshes(parent_model, parent, spec.parent_prefix, staging.path());
  stage_meshes(child_model, child, spec.child_prefix, staging.path());
  const RobotModel composite = combine_models(parent_model, child_model, spec);

  options.modules.clear();  // every module is regenerated for a composite
  options.geometry.asset_roots = {staging.path()};
  Json ext = options.manifest_extensions.is_object() ? options.manifest_extensions : Json::object();
  ext["composite"] = {
      {"note", "implementation extension: provenance of the combined robots"},
      {"attach_link", spec.parent_prefix + spec.attach_link},
      {"joint", spec.joint.name},
      {"sources", Json::array({source_record(parent, spec.parent_prefix), source_record(child, spec.child_prefix)})}};
  options.manifest_extensions = std::move(ext);
  return convert_model(composite, out_dir, options);
}

}  // namespace urdd
