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
#include <functional>
#include <set>
#include <sstream>

#include "urdd/error.hpp"
#include "urdd/store.hpp"

namespace urdd {
namespace {

class Report {
 public:
  void error(const std::string& module, const std::string& message) {
    findings_.push_back({Severity::kError, module, message});
  }
  void warning(const std::string& module, const std::string& message) {
    findings_.push_back({Severity::kWarning, module, message});
  }
  std::vector<Finding> take() { return std::move(findings_); }

 private:
  std::vector<Finding> findings_;
};

int major_of(const std::string& semver) {
  try {
    return std::stoi(semver.substr(0, semver.find('.')));
  } catch (const std::exception&) {
    return -1;
  }
}

const std::map<std::string, std::vector<std::string>, std::less<>>& required_keys() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> kKeys = {
      {std::string(kUrdfModule), {"robot_name", "root_link", "links", "joints"}},
      {std::string(kDofModule), {"num_dofs", "dof_to_joint", "joint_to_dofs", "mimic_bindings"}},
      {std::string(kChainModule), {"root_link", "num_links", "nodes"}},
      {std::string(kConnectionsModule), {"links", "num_paths", "paths"}},
      {std::string(kBoundsModule), {"num_dofs", "bounds"}},
      {std::string(kOriginalMeshesModule), {"links"}},
      {std::string(kConvexHullModule), {"links"}},
      {std::string(kDecompositionModule), {"parameters", "links"}},
      {std::string(kApproximationsModule), {"links"}},
      {std::string(kDistanceStatsModule), {"shape_type", "samples", "seed", "links", "pairs"}},
      {std::string(kSkipsModule), {"samples", "seed", "threshold", "links", "matrices"}},
  };
  return kKeys;
}

/// Collects every mesh path referenced through a "files" object.
void collect_file_refs(const Json& node, std::vector<std::string>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it.key() == "files" && it.value().is_object()) {
        for (const auto& v : it.value())
          if (v.is_string()) out.push_back(v.get<std::string>());
      } else {
        collect_file_refs(it.value(), out);
      }
    }
  } else if (node.is_array()) {
    for (const auto& v : node) collect_file_refs(v, out);
  }
}

std::vector<std::string> link_names(const Json& urdf) {
  std::vector<std::string> names;
  for (const auto& l : urdf.at("links")) names.push_back(l.at("name").get<std::string>());
  return names;
}

void check_cross_module(const std::map<std::string, Json, std::less<>>& payloads, Report& report) {
  auto get = [&](std::string_view name) -> const Json* {
    auto it = payloads.find(name);
    return it == payloads.end() ? nullptr : &it->second;
  };
  const Json* urdf = get(kUrdfModule);
  const Json* dof = get(kDofModule);
  std::vector<std::string> links;
  if (urdf) links = link_names(*urdf);
  const std::set<std::string> link_set(links.begin(), links.end());
  const std::size_t num_links = links.size();

  if (dof) {
    const auto n = dof->at("num_dofs").get<std::size_t>();
    if (dof->at("dof_to_joint").size() != n) {
      report.error(std::string(kDofModule), "dof_to_joint length " + std::to_string(dof->at("dof_to_joint").size()) +
                                                " ≠ num_dofs " + std::to_string(n));
    }
    if (const Json* bounds = get(kBoundsModule)) {
      const std::size_t len = bounds->at("bounds").size();
      if (len != n) {
        report.error(std::string(kBoundsModule),
                     "bounds length " + std::to_string(len) + " ≠ num_dofs " + std::to_string(n));
      }
      for (std::size_t i = 0; i < len; ++i) {
        const Json& b = bounds->at("bounds")[i];
        if (b.value("dof_index", -1) != static_cast<int>(i)) {
          report.error(std::string(kBoundsModule), "bounds entry " + std::to_string(i) + " has wrong dof_index");
        }
        if (b.at("lower").is_number() && b.at("upper").is_number() &&
            b.at("lower").get<double>() > b.at("upper").get<double>()) {
          report.error(std::string(kBoundsModule), "bounds entry " + std::to_string(i) + " has lower > upper");
        }
      }
    }
  }
  if (!urdf) return;

  if (const Json* chain = get(kChainModule)) {
    std::set<std::string> nodes;
    for (const auto& n : chain->at("nodes")) nodes.insert(n.at("link").get<std::string>());
    if (chain->at("nodes").size() != num_links || nodes != link_set) {
      report.error(std::string(kChainModule), "chain has " + std::to_string(chain->at("nodes").size()) +
                                                  " nodes for " + std::to_string(num_links) + " links");
    }
  }
  if (const Json* conn = get(kConnectionsModule)) {
    const std::size_t expected = num_links * num_links;
    if (conn->at("paths").size() != expected || conn->at("num_paths").get<std::size_t>() != expected) {
      report.error(std::string(kConnectionsModule), "connections has " + std::to_string(conn->at("paths").size()) +
                                                        " paths, expected " + std::to_string(expected));
    }
    for (const auto& p : conn->at("paths")) {
      if (p.at("links").size() != p.at("joints").size() + 1) {
        report.error(std::string(kConnectionsModule), "path " + p.at("from").get<std::string>() + " -> " +
                                                          p.at("to").get<std::string>() + " is malformed");
        break;
      }
    }
  }
  for (std::string_view name :
       {kOriginalMeshesModule, kConvexHullModule, kDecompositionModule, kApproximationsModule}) {
    const Json* m = get(name);
    if (!m) continue;
    std::vector<std::string> listed;
    for (const auto& e : m->at("links")) listed.push_back(e.at("link").get<std::string>());
    if (listed != links) report.error(std::string(name), "link list disagrees with urdf_module");
  }
  if (const Json* stats = get(kDistanceStatsModule)) {
    for (const auto& p : stats->at("pairs")) {
      const auto a = p.at("link_a").get<std::string>(), b = p.at("link_b").get<std::string>();
      if (!link_set.count(a) || !link_set.count(b)) {
        report.error(std::string(kDistanceStatsModule), "pair " + a + "/" + b + " names an unknown link");
      }
      const double lo = p.at("min").get<double>(), mean = p.at("mean").get<double>(), hi = p.at("max").get<double>();
      if (!(0 <= lo && lo <= mean + 1e-12 && mean <= hi + 1e-12)) {
        report.error(std::string(kDistanceStatsModule), "pair " + a + "/" + b + " violates min <= mean <= max");
      }
    }
  }
  if (const Json* skips = get(kSkipsModule)) {
    std::vector<std::string> listed = skips->at("links").get<std::vector<std::string>>();
    if (listed != links) report.error(std::string(kSkipsModule), "link list disagrees with urdf_module");
    const std::size_t n = listed.size();
    for (auto it = skips->at("matrices").begin(); it != skips->at("matrices").end(); ++it) {
      const Json& m = it.value().at("skips");
      const std::string tag = "matrix '" + it.key() + "'";
      if (m.size() != n) {
        report.error(std::string(kSkipsModule), tag + " has " + std::to_string(m.size()) + " rows for " +
                                                    std::to_string(n) + " links");
        continue;
      }
      std::set<std::pair<std::string, std::string>> reasons;
      for (const auto& r : it.value().at("reasons")) {
        reasons.emplace(r.at("link_a").get<std::string>(), r.at("link_b").get<std::string>());
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) {
          report.error(std::string(kSkipsModule), tag + " is not square");
          break;
        }
        if (!m[i][i].get<bool>()) report.error(std::string(kSkipsModule), tag + " diagonal entry is false");
        for (std::size_t j = i + 1; j < n && j < m[j].size(); ++j) {
          if (m[i][j] != m[j][i]) report.error(std::string(kSkipsModule), tag + " is not symmetric");
          if (m[i][j].get<bool>() && !reasons.count({std::min(listed[i], listed[j]), std::max(listed[i], listed[j])})) {
            report.error(std::string(kSkipsModule), tag + " skipped pair " + listed[i] + "/" + listed[j] +
                                                        " has no reason");
          }
        }
      }
    }
  }
}

}  // namespace

std::string to_string(Severity severity) { return severity == Severity::kError ? "error" : "warning"; }

std::vector<Finding> validate_urdd(const fs::path& root) {
  Report report;
  const fs::path manifest_path = root / kManifestJson;
  if (!fs::exists(manifest_path)) {
    report.error("", "missing manifest.json in " + root.string());
    return report.take();
  }
  Manifest manifest;
  Json manifest_doc;
  try {
    manifest_doc = Json::parse(read_file(manifest_path));
    manifest = manifest_from_json(manifest_doc);
  } catch (const std::exception& e) {
    report.error("", std::string("unreadable manifest: ") + e.what());
    return report.take();
  }
  if (major_of(manifest.urdd_format_version) != major_of(std::string(kFormatVersion))) {
    report.error("", "incompatible URDD format version " + manifest.urdd_format_version);
  }
  try {
    if (!fs::exists(root / kManifestYaml)) {
      report.error("", "missing manifest.yaml");
    } else if (!deep_equal(yaml_to_json(read_file(root / kManifestYaml)), manifest_doc)) {
      report.error("", "manifest.yaml does not mirror manifest.json");
    }
  } catch (const std::exception& e) {
    report.error("", std::string("unreadable manifest.yaml: ") + e.what());
  }

  std::set<std::string> listed_modules;
  for (const auto& rec : manifest.modules) {
    if (!listed_modules.insert(rec.module_name).second) report.error(rec.module_name, "listed twice in manifest");
  }

  std::map<std::string, Json, std::less<>> payloads;
  for (const auto& rec : manifest.modules) {
    const std::string& name = rec.module_name;
    const fs::path dir = root / name;
    if (!fs::is_directory(dir)) {
      report.error(name, "module directory missing");
      continue;
    }
    const ModuleInfo* info = find_module_info(name);
    if (!info) {
      report.warning(name, "unknown module (ignored)");
    } else if (major_of(rec.module_version) != major_of(std::string(info->version))) {
      report.warning(name, "module version " + rec.module_version + " not readable by this implementation");
    }
    if (info) {
      for (auto dep : info->dependencies) {
        if (!listed_modules.count(std::string(dep))) report.error(name, "missing dependency " + std::string(dep));
      }
    }

    const std::set<std::string> files(rec.files.begin(), rec.files.end());
    for (const auto& f : rec.files) {
      if (fs::exists(dir / f)) continue;
      if (f == kModuleJson || f == kModuleYaml) {
        report.error(name, "missing file " + f);
      } else {
        report.error(name, "dangling mesh reference " + name + "/" + f);
      }
    }
    if (fs::exists(dir)) {
      for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (!files.count(rel)) report.warning(name, "file not listed in manifest: " + rel);
      }
    }
    if (!fs::exists(dir / kModuleJson)) continue;

    Json payload;
    try {
      const std::string bytes = read_file(dir / kModuleJson);
      if (module_digest(bytes) != rec.content_digest) report.error(name, "content digest mismatch");
      payload = Json::parse(bytes);
    } catch (const std::exception& e) {
      report.error(name, std::string("unreadable module.json: ") + e.what());
      continue;
    }
    try {
      if (fs::exists(dir / kModuleYaml) && !deep_equal(yaml_to_json(read_file(dir / kModuleYaml)), payload)) {
        report.error(name, "module.yaml does not mirror module.json");
      }
    } catch (const std::exception& e) {
      report.error(name, std::string("unreadable module.yaml: ") + e.what());
    }

    std::vector<std::string> refs;
    collect_file_refs(payload, refs);
    for (const auto& ref : refs) {
      // Listed-but-missing files were reported above.
      if (!files.count(ref)) {
        report.error(name, "dangling mesh reference " + name + "/" + ref + " (not listed in manifest)");
      }
    }

    auto keys = required_keys().find(name);
    bool schema_ok = true;
    if (keys != required_keys().end()) {
      for (const auto& key : keys->second) {
        if (!payload.is_object() || !payload.contains(key)) {
          report.error(name, "schema: missing key '" + key + "'");
          schema_ok = false;
        }
      }
    }
    if (info && schema_ok) payloads.emplace(name, std::move(payload));
  }

  try {
    check_cross_module(payloads, report);
  } catch (const Json::exception& e) {
    report.error("", std::string("schema: ") + e.what());
  }
  return report.take();
}

}  // namespace urdd
