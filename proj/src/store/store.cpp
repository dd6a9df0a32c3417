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

#include <algorithm>
#include <mutex>
#include <set>

#include "urdd/error.hpp"
#include "urdd/store.hpp"

namespace urdd {

const std::vector<ModuleInfo>& known_modules() {
  static const std::vector<ModuleInfo> kModules = {
      {kUrdfModule, "1.0.0", {}},
      {kDofModule, "1.0.0", {kUrdfModule}},
      {kChainModule, "1.0.0", {kUrdfModule}},
      {kConnectionsModule, "1.0.0", {kUrdfModule, kChainModule}},
      {kBoundsModule, "1.0.0", {kUrdfModule, kDofModule}},
      {kOriginalMeshesModule, "1.0.0", {kUrdfModule}},
      {kConvexHullModule, "1.0.0", {kUrdfModule}},
      {kDecompositionModule, "1.0.0", {kUrdfModule}},
      {kApproximationsModule, "1.0.0", {kConvexHullModule, kDecompositionModule}},
      {kDistanceStatsModule, "1.0.0",
       {kUrdfModule, kChainModule, kDofModule, kBoundsModule, kConvexHullModule}},
      {kSkipsModule, "1.0.0",
       {kDistanceStatsModule, kApproximationsModule, kDecompositionModule, kConvexHullModule,
        kChainModule, kDofModule, kBoundsModule}},
  };
  return kModules;
}

const ModuleInfo* find_module_info(std::string_view name) {
  for (const auto& info : known_modules())
    if (info.name == name) return &info;
  return nullptr;
}

std::vector<std::string> with_dependencies(const std::vector<std::string>& requested) {
  std::set<std::string, std::less<>> wanted;
  std::vector<std::string_view> stack;
  for (const auto& name : requested) {
    if (!find_module_info(name)) throw Error(ErrorCode::kUnknownModule, name);
    stack.push_back(name);
  }
  while (!stack.empty()) {
    std::string_view name = stack.back();
    stack.pop_back();
    if (!wanted.emplace(name).second) continue;
    for (auto dep : find_module_info(name)->dependencies) stack.push_back(dep);
  }
  std::vector<std::string> ordered;
  for (const auto& info : known_modules())
    if (wanted.count(info.name)) ordered.emplace_back(info.name);
  return ordered;
}

// ---------------------------------------------------------------------------

const ModuleRecord* Manifest::find(std::string_view module_name) const {
  for (const auto& m : modules)
    if (m.module_name == module_name) return &m;
  return nullptr;
}

Json manifest_to_json(const Manifest& manifest) {
  Json doc = manifest.extensions.is_object() ? manifest.extensions : Json::object();
  doc["robot_name"] = manifest.robot_name;
  doc["urdd_format_version"] = manifest.urdd_format_version;
  doc["created_at"] = manifest.created_at;
  std::vector<ModuleRecord> sorted = manifest.modules;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.module_name < b.module_name; });
  Json mods = Json::array();
  for (const auto& m : sorted) {
    std::vector<std::string> files = m.files;
    std::sort(files.begin(), files.end());
    mods.push_back({{"module_name", m.module_name},
                    {"module_version", m.module_version},
                    {"files", files},
                    {"content_digest", m.content_digest}});
  }
  doc["modules"] = mods;
  return doc;
}

Manifest manifest_from_json(const Json& doc) {
  try {
    Manifest m;
    m.robot_name = doc.at("robot_name").get<std::string>();
    m.urdd_format_version = doc.at("urdd_format_version").get<std::string>();
    m.created_at = doc.at("created_at").get<std::string>();
    std::set<std::string> seen;
    for (const auto& rec : doc.at("modules")) {
      ModuleRecord r;
      r.module_name = rec.at("module_name").get<std::string>();
      r.module_version = rec.at("module_version").get<std::string>();
      r.files = rec.at("files").get<std::vector<std::string>>();
      r.content_digest = rec.at("content_digest").get<std::string>();
      if (!seen.insert(r.module_name).second) {
        throw Error(ErrorCode::kDuplicateName, "module listed twice: " + r.module_name);
      }
      for (const auto& f : r.files) check_relative_path(f);
      check_relative_path(r.module_name);
      m.modules.push_back(std::move(r));
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      static const std::set<std::string> kCore = {"robot_name", "urdd_format_version",
                                                  "created_at", "modules"};
      if (!kCore.count(it.key())) m.extensions[it.key()] = it.value();
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("manifest: ") + e.what());
  }
}

std::string module_digest(std::string_view module_json_bytes) {
  return sha256_hex(module_json_bytes);
}

ModuleRecord write_module_files(const fs::path& root, std::string_view module_name,
                                const Json& payload, const std::vector<MeshFile>& mesh_files) {
  check_relative_path(module_name);
  for (const auto& mesh : mesh_files) check_relative_path(mesh.relative_path);

  const fs::path dir = root / std::string(module_name);
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());

  const std::string json_text = canonical_json(payload);
  write_file(dir / kModuleJson, json_text);
  write_file(dir / kModuleYaml, yaml_mirror(payload));

  ModuleRecord record;
  record.module_name = std::string(module_name);
  const ModuleInfo* info = find_module_info(module_name);
  record.module_version = info ? std::string(info->version) : "1.0.0";
  record.files = {std::string(kModuleJson), std::string(kModuleYaml)};
  for (const auto& mesh : mesh_files) {
    write_file(dir / mesh.relative_path, mesh.bytes);
    record.files.push_back(mesh.relative_path);
  }
  std::sort(record.files.begin(), record.files.end());
  record.content_digest = module_digest(json_text);
  return record;
}

void write_manifest(const fs::path& root, const Manifest& manifest) {
  const Json doc = manifest_to_json(manifest);
  write_file(root / kManifestJson, canonical_json(doc));
  write_file(root / kManifestYaml, yaml_mirror(doc));
}

ModuleRecord write_module(const fs::path& root, std::string_view module_name, const Json& payload,
                          const std::vector<MeshFile>& mesh_files) {
  Manifest manifest;
  if (fs::exists(root / kManifestJson)) {
    manifest = manifest_from_json(Json::parse(read_file(root / kManifestJson)));
  } else {
    manifest.robot_name = payload.contains("robot_name") && payload["robot_name"].is_string()
                              ? payload["robot_name"].get<std::string>()
                              : root.filename().string();
    manifest.created_at = iso8601_utc(current_epoch_seconds());
  }
  ModuleRecord record = write_module_files(root, module_name, payload, mesh_files);
  auto it = std::find_if(manifest.modules.begin(), manifest.modules.end(),
                         [&](const auto& m) { return m.module_name == module_name; });
  if (it != manifest.modules.end()) {
    *it = record;
  } else {
    manifest.modules.push_back(record);
  }
  write_manifest(root, manifest);
  return record;
}

// ---------------------------------------------------------------------------

namespace {

int major_version(const std::string& semver) {
  try {
    return std::stoi(semver.substr(0, semver.find('.')));
  } catch (const std::exception&) {
    return -1;
  }
}

}  // namespace

struct UrddHandle::State {
  fs::path root;
  Manifest manifest;
  std::vector<std::string> unknown;
  std::set<std::string, std::less<>> usable;
  std::mutex mutex;
  std::map<std::string, Json, std::less<>> payloads;
  std::map<std::string, std::string, std::less<>> files;
};

UrddHandle UrddHandle::load(const fs::path& root, bool strict) {
  const fs::path manifest_path = root / kManifestJson;
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorCode::kMissingManifest, "no manifest.json in " + root.string());
  }
  Json doc;
  try {
    doc = Json::parse(read_file(manifest_path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("manifest.json: ") + e.what());
  }

  UrddHandle handle;
  handle.state_ = std::make_shared<State>();
  State& s = *handle.state_;
  s.root = root;
  s.manifest = manifest_from_json(doc);
  if (major_version(s.manifest.urdd_format_version) != major_version(std::string(kFormatVersion))) {
    throw Error(ErrorCode::kIncompatibleFormatVersion,
                "URDD format " + s.manifest.urdd_format_version + " (supported " +
                    std::string(kFormatVersion) + ")");
  }

  for (const auto& rec : s.manifest.modules) {
    if (!fs::is_directory(root / rec.module_name)) {
      throw Error(ErrorCode::kMissingModuleDirectory,
                  "module '" + rec.module_name + "' listed in manifest but its directory is missing");
    }
    const ModuleInfo* info = find_module_info(rec.module_name);
    bool usable = info != nullptr;
    if (info && major_version(rec.module_version) != major_version(std::string(info->version))) {
      if (strict) {
        throw Error(ErrorCode::kIncompatibleFormatVersion,
                    rec.module_name + " version " + rec.module_version);
      }
      usable = false;
    }
    if (strict) {
      const std::string bytes = read_file(root / rec.module_name / kModuleJson);
      if (module_digest(bytes) != rec.content_digest) {
        throw Error(ErrorCode::kDigestMismatch, "module '" + rec.module_name + "' content digest");
      }
    }
    if (usable) {
      s.usable.insert(rec.module_name);
    } else {
      s.unknown.push_back(rec.module_name);
    }
  }
  return handle;
}

UrddHandle UrddHandle::from_memory(Manifest manifest, std::map<std::string, Json> payloads,
                                   std::map<std::string, std::string> files) {
  UrddHandle handle;
  handle.state_ = std::make_shared<State>();
  State& s = *handle.state_;
  for (auto& [key, bytes] : files) s.files.emplace(key, std::move(bytes));
  for (auto& [name, payload] : payloads) {
    if (!manifest.find(name)) {
      ModuleRecord rec;
      rec.module_name = name;
      const ModuleInfo* info = find_module_info(name);
      rec.module_version = info ? std::string(info->version) : "1.0.0";
      manifest.modules.push_back(rec);
    }
    if (find_module_info(name)) {
      s.usable.insert(name);
    } else {
      s.unknown.push_back(name);
    }
    s.payloads.emplace(name, std::move(payload));
  }
  s.manifest = std::move(manifest);
  return handle;
}

const Manifest& UrddHandle::manifest() const { return state_->manifest; }
const fs::path& UrddHandle::root() const { return state_->root; }
const std::vector<std::string>& UrddHandle::unknown_modules() const { return state_->unknown; }

bool UrddHandle::has_module(std::string_view name) const { return state_->usable.count(name) > 0; }

const Json& UrddHandle::module(std::string_view name) const {
  if (!has_module(name)) {
    throw Error(ErrorCode::kMissingDependencyModule, "module '" + std::string(name) + "' not available");
  }
  std::lock_guard<std::mutex> lock(state_->mutex);
  auto it = state_->payloads.find(name);
  if (it != state_->payloads.end()) return it->second;
  const fs::path path = state_->root / std::string(name) / kModuleJson;
  Json payload;
  try {
    payload = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedModule, path.string() + ": " + e.what());
  }
  return state_->payloads.emplace(std::string(name), std::move(payload)).first->second;
}

fs::path UrddHandle::module_file(std::string_view module_name, std::string_view relative) const {
  check_relative_path(relative);
  return state_->root / std::string(module_name) / std::string(relative);
}

std::string UrddHandle::read_module_file(std::string_view module_name, std::string_view relative) const {
  check_relative_path(relative);
  const std::string key = std::string(module_name) + "/" + std::string(relative);
  auto it = state_->files.find(key);
  if (it != state_->files.end()) return it->second;
  if (state_->root.empty()) throw Error(ErrorCode::kIoFailure, "no file " + key);
  return read_file(module_file(module_name, relative));
}

}  // namespace urdd
