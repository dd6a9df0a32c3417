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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace urdd {

using Json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr std::string_view kFormatVersion = "1.0.0";
inline constexpr std::string_view kManifestJson = "manifest.json";
inline constexpr std::string_view kManifestYaml = "manifest.yaml";
inline constexpr std::string_view kModuleJson = "module.json";
inline constexpr std::string_view kModuleYaml = "module.yaml";

// Module identifiers.
inline constexpr std::string_view kUrdfModule = "urdf_module";
inline constexpr std::string_view kDofModule = "dof_module";
inline constexpr std::string_view kChainModule = "chain_module";
inline constexpr std::string_view kConnectionsModule = "connections_module";
inline constexpr std::string_view kBoundsModule = "bounds_module";
inline constexpr std::string_view kOriginalMeshesModule = "original_meshes_module";
inline constexpr std::string_view kConvexHullModule = "convex_hull_meshes_module";
inline constexpr std::string_view kDecompositionModule = "convex_decomposition_meshes_module";
inline constexpr std::string_view kApproximationsModule = "link_shapes_approximations_module";
inline constexpr std::string_view kDistanceStatsModule = "link_shapes_distance_statistics_module";
inline constexpr std::string_view kSkipsModule = "link_shapes_skips_module";

struct ModuleInfo {
  std::string_view name;
  std::string_view version;
  std::vector<std::string_view> dependencies;
};

/// Every module this implementation knows how to generate, in generation
/// order (dependencies always precede dependents).
const std::vector<ModuleInfo>& known_modules();
const ModuleInfo* find_module_info(std::string_view name);

/// Closes `requested` under the dependency relation. The result is in
/// generation order.
std::vector<std::string> with_dependencies(const std::vector<std::string>& requested);

// ---------------------------------------------------------------------------
// Serialization

/// Sorted keys, LF line endings, floats printed with 17 significant digits.
/// Rejects non-finite numbers.
std::string canonical_json(const Json& value);

/// YAML rendering of the same tree. Strings are always double-quoted so the
/// mirror parses back to an identical document.
std::string yaml_mirror(const Json& value);
Json yaml_to_json(const std::string& text);

/// Structural equality that treats integer and float encodings of the same
/// number as equal.
bool deep_equal(const Json& a, const Json& b);

std::string sha256_hex(std::string_view bytes);
std::string iso8601_utc(std::int64_t epoch_seconds);
std::int64_t current_epoch_seconds();

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view bytes);

/// Rejects absolute paths, empty paths and any `..` component.
void check_relative_path(std::string_view relative);

// ---------------------------------------------------------------------------
// Manifest

struct ModuleRecord {
  std::string module_name;
  std::string module_version;
  std::vector<std::string> files;
  std::string content_digest;
};

struct Manifest {
  std::string robot_name;
  std::string urdd_format_version{kFormatVersion};
  std::string created_at;
  std::vector<ModuleRecord> modules;
  /// Extra keys written by this implementation (for instance the source
  /// robots of a composite). Preserved on load.
  Json extensions = Json::object();

  const ModuleRecord* find(std::string_view module_name) const;
};

Json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const Json& doc);

struct MeshFile {
  std::string relative_path;
  std::string bytes;
};

/// Digest over a module's canonical JSON bytes.
std::string module_digest(std::string_view module_json_bytes);

/// Writes one module directory (clearing any previous contents) and returns
/// its record. Does not touch the manifest.
ModuleRecord write_module_files(const fs::path& root, std::string_view module_name,
                                const Json& payload, const std::vector<MeshFile>& mesh_files);

/// Writes one module and upserts its record into `<root>/manifest.json`,
/// creating the manifest if needed.
ModuleRecord write_module(const fs::path& root, std::string_view module_name,
                          const Json& payload, const std::vector<MeshFile>& mesh_files);

void write_manifest(const fs::path& root, const Manifest& manifest);

// ---------------------------------------------------------------------------
// Loading

/// Read-only view of a URDD. Module payloads are parsed on first access and
/// cached; copies share the cache and are safe to use from several threads.
class UrddHandle {
 public:
  static UrddHandle load(const fs::path& root, bool strict = false);
  /// A handle over payloads that have not been written to disk yet.
  /// `files` holds module files (meshes) keyed by "<module>/<relative path>".
  static UrddHandle from_memory(Manifest manifest, std::map<std::string, Json> payloads,
                                std::map<std::string, std::string> files = {});

  const Manifest& manifest() const;
  const std::string& robot_name() const { return manifest().robot_name; }
  const fs::path& root() const;

  /// True when the module is listed, known and usable.
  bool has_module(std::string_view name) const;
  /// Throws kMissingDependencyModule if the module is not available.
  const Json& module(std::string_view name) const;
  /// Listed modules that this implementation does not know (or whose major
  /// version it cannot read); they are skipped, never fatal.
  const std::vector<std::string>& unknown_modules() const;

  fs::path module_file(std::string_view module_name, std::string_view relative) const;
  /// Bytes of a file inside a module directory (from memory or disk).
  /// Throws kIoFailure when absent.
  std::string read_module_file(std::string_view module_name, std::string_view relative) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Validation

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity;
  std::string module;  // empty for directory-level findings
  std::string message;
};

/// Consistency report. Empty iff the directory is fully consistent.
std::vector<Finding> validate_urdd(const fs::path& root);

std::string to_string(Severity severity);

}  // namespace urdd
