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

#include "urdd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <set>

#include "urdd/error.hpp"
#include "urdd/kinematics.hpp"

namespace urdd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_document(const std::string& relative) {
  const std::string name = fs::path(relative).filename().string();
  return name == kModuleJson || name == kModuleYaml || relative == kManifestJson || relative == kManifestYaml;
}

/// Prepares `out_dir` for a fresh URDD: absent and empty directories are
/// used as is, an existing URDD is cleared, anything else is refused.
void prepare_output(const fs::path& out_dir) {
  std::error_code ec;
  if (fs::exists(out_dir, ec)) {
    if (!fs::is_directory(out_dir, ec)) {
      throw Error(ErrorCode::kIoFailure, "output path " + out_dir.string() + " is not a directory");
    }
    if (!fs::is_empty(out_dir, ec)) {
      if (!fs::exists(out_dir / kManifestJson)) {
        throw Error(ErrorCode::kIoFailure,
                    "refusing to overwrite non-empty directory without a URDD manifest: " + out_dir.string());
      }
      for (const auto& entry : fs::directory_iterator(out_dir)) fs::remove_all(entry.path(), ec);
      if (ec) throw Error(ErrorCode::kIoFailure, "cannot clear " + out_dir.string() + ": " + ec.message());
    }
  }
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out_dir.string() + ": " + ec.message());
}

/// Writes modules one at a time and keeps the manifest and an in-memory view
/// in step, so later derivation steps can read earlier modules.
class Writer {
 public:
  Writer(fs::path root, Manifest manifest) : root_(std::move(root)), manifest_(std::move(manifest)) {}

  void add(std::string_view module, const Json& payload, const std::vector<MeshFile>& files = {}) {
    ModuleRecord record = write_module_files(root_, module, payload, files);
    manifest_.modules.push_back(std::move(record));
    write_manifest(root_, manifest_);
    payloads_[std::string(module)] = payload;
    for (const auto& f : files) files_[std::string(module) + "/" + f.relative_path] = f.bytes;
  }

  UrddHandle view() const { return UrddHandle::from_memory(manifest_, payloads_, files_); }
  const Manifest& manifest() const { return manifest_; }

 private:
  fs::path root_;
  Manifest manifest_;
  std::map<std::string, Json> payloads_;
  std::map<std::string, std::string> files_;
};

void derive_modules(const RobotModel& model, const std::vector<std::string>& modules, const ConvertOptions& options,
                    Writer& writer, std::vector<ModuleTiming>& timings) {
  const std::set<std::string, std::less<>> wanted(modules.begin(), modules.end());
  auto want = [&](std::string_view m) { return wanted.count(m) > 0; };
  auto timed = [&](std::string_view step, auto&& body) {
    const auto start = Clock::now();
    body();
    timings.push_back({std::string(step), seconds_since(start)});
  };

  DofMap dof_map;
  timed(kUrdfModule, [&] { writer.add(kUrdfModule, model_to_json(model)); });
  if (want(kDofModule)) {
    timed(kDofModule, [&] {
      dof_map = derive_dof_map(model);
      writer.add(kDofModule, dof_map_to_json(dof_map));
    });
  }
  if (want(kChainModule)) {
    timed(kChainModule, [&] { writer.add(kChainModule, chain_to_json(model, derive_chain(model))); });
  }
  if (want(kConnectionsModule)) {
    timed(kConnectionsModule,
          [&] { writer.add(kConnectionsModule, connections_to_json(model, derive_connections(model))); });
  }
  if (want(kBoundsModule)) {
    timed(kBoundsModule, [&] { writer.add(kBoundsModule, bounds_to_json(derive_bounds(model, dof_map))); });
  }
  if (want(kOriginalMeshesModule)) {
    timed(kOriginalMeshesModule, [&] {
      ModuleOutput out = original_meshes_module(model, options.geometry);
      writer.add(kOriginalMeshesModule, out.payload, out.files);
    });
  }

  LinkShapeRequest request;
  request.hull = want(kConvexHullModule) || want(kApproximationsModule);
  request.decomposition = want(kDecompositionModule) || want(kApproximationsModule);
  request.approximations = want(kApproximationsModule);
  if (request.hull || request.decomposition) {
    std::vector<LinkGeometry> shapes;
    timed("link_shapes", [&] { shapes = derive_link_shapes(model, options.geometry, request); });
    if (want(kConvexHullModule)) {
      timed(kConvexHullModule, [&] {
        ModuleOutput out = convex_hull_module(shapes, options.geometry);
        writer.add(kConvexHullModule, out.payload, out.files);
      });
    }
    if (want(kDecompositionModule)) {
      timed(kDecompositionModule, [&] {
        ModuleOutput out = decomposition_module(shapes, options.geometry);
        writer.add(kDecompositionModule, out.payload, out.files);
      });
    }
    if (want(kApproximationsModule)) {
      timed(kApproximationsModule, [&] {
        ModuleOutput out = approximations_module(shapes);
        writer.add(kApproximationsModule, out.payload, out.files);
      });
    }
  }

  std::optional<DistanceStats> hull_stats;
  if (want(kDistanceStatsModule)) {
    timed(kDistanceStatsModule, [&] {
      hull_stats = derive_distance_stats(writer.view(), options.proximity, ShapeType::kHull);
      writer.add(kDistanceStatsModule, distance_stats_to_json(*hull_stats));
    });
  }
  if (want(kSkipsModule)) {
    timed(kSkipsModule, [&] {
      const UrddHandle view = writer.view();
      writer.add(kSkipsModule, derive_skips_module(view, *hull_stats, options.proximity, options.overrides));
    });
  }
}

}  // namespace

std::vector<std::string> resolve_module_selection(const std::vector<std::string>& requested,
                                                  std::vector<std::string>* auto_added) {
  std::vector<std::string> base = requested;
  if (base.empty()) {
    for (const auto& info : known_modules()) base.emplace_back(info.name);
  }
  // The urdf module is the root of every URDD.
  base.emplace_back(kUrdfModule);
  std::vector<std::string> closed = with_dependencies(base);
  if (auto_added) {
    auto_added->clear();
    const std::set<std::string> asked(requested.begin(), requested.end());
    if (!requested.empty()) {
      for (const auto& m : closed)
        if (!asked.count(m)) auto_added->push_back(m);
    }
  }
  return closed;
}

ConvertReport convert_model(const RobotModel& model, const fs::path& out_dir, const ConvertOptions& options) {
  ConvertReport report;
  report.robot_name = model.name;
  report.modules = resolve_module_selection(options.modules, &report.auto_added);

  Manifest manifest;
  manifest.robot_name = model.name;
  manifest.created_at = iso8601_utc(options.epoch ? *options.epoch : current_epoch_seconds());
  manifest.extensions = options.manifest_extensions.is_object() ? options.manifest_extensions : Json::object();

  prepare_output(out_dir);
  try {
    Writer writer(out_dir, manifest);
    derive_modules(model, report.modules, options, writer, report.timings);
    report.manifest = writer.manifest();
  } catch (...) {
    if (!options.keep_partial) {
      std::error_code ec;
      fs::remove_all(out_dir, ec);
    }
    throw;
  }
  return report;
}

std::vector<fs::path> default_asset_roots(const std::vector<fs::path>& explicit_roots, const fs::path& urdf_path) {
  std::vector<fs::path> roots = explicit_roots;
  fs::path dir = urdf_path.parent_path();
  if (dir.empty()) dir = ".";
  roots.push_back(dir);
  if (const char* env = std::getenv("URDD_ASSET_ROOT"); env && *env) roots.emplace_back(env);
  return roots;
}

ConvertReport convert_urdf(const fs::path& urdf_path, const fs::path& out_dir, ConvertOptions options) {
  if (!fs::exists(urdf_path)) {
    throw Error(ErrorCode::kIoFailure, "URDF file not found: " + urdf_path.string());
  }
  options.geometry.asset_roots = default_asset_roots(options.geometry.asset_roots, urdf_path);
  const RobotModel model = parse_urdf_file(urdf_path, options.geometry.asset_roots.front());
  return convert_model(model, out_dir, options);
}

UrddSummary summarize_urdd(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::kIoFailure, "not a directory: " + root.string());
  const UrddHandle urdd = UrddHandle::load(root);
  UrddSummary s;
  s.robot_name = urdd.robot_name();
  s.format_version = urdd.manifest().urdd_format_version;
  if (urdd.has_module(kDofModule)) s.num_dofs = urdd.module(kDofModule).at("num_dofs").get<int>();
  if (urdd.has_module(kUrdfModule)) s.num_links = static_cast<int>(urdd.module(kUrdfModule).at("links").size());
  std::vector<ModuleRecord> records = urdd.manifest().modules;
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.module_name < b.module_name; });
  for (const auto& m : records) s.module_versions.emplace_back(m.module_name, m.module_version);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto size = entry.file_size();
    s.bytes_total += size;
    const std::string rel = fs::relative(entry.path(), root).generic_string();
    if (is_document(rel)) s.bytes_without_meshes += size;
  }
  return s;
}

Json summary_to_json(const UrddSummary& s) {
  Json versions = Json::object();
  for (const auto& [name, version] : s.module_versions) versions[name] = version;
  return {{"robot_name", s.robot_name},
          {"urdd_format_version", s.format_version},
          {"num_dofs", s.num_dofs < 0 ? Json(nullptr) : Json(s.num_dofs)},
          {"num_links", s.num_links < 0 ? Json(nullptr) : Json(s.num_links)},
          {"modules", versions},
          {"bytes_total", s.bytes_total},
          {"bytes_without_meshes", s.bytes_without_meshes}};
}

}  // namespace urdd
