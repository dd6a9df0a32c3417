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
#include <optional>
#include <string>
#include <vector>

#include "urdd/link_shapes.hpp"
#include "urdd/model.hpp"
#include "urdd/proximity.hpp"
#include "urdd/store.hpp"

namespace urdd {

struct ConvertOptions {
  /// Requested modules; empty means every known module. Dependencies are
  /// added automatically.
  std::vector<std::string> modules;
  GeometryOptions geometry;
  ProximityOptions proximity;
  /// Fixed manifest timestamp for reproducible output; current time if unset.
  std::optional<std::int64_t> epoch;
  std::vector<SkipOverride> overrides;
  /// Leave whatever was written when a conversion fails.
  bool keep_partial = false;
  /// Extra manifest keys (for instance composite provenance).
  Json manifest_extensions = Json::object();
};

struct ModuleTiming {
  std::string step;  // module name, or "link_shapes" for the shared geometry pass
  double seconds = 0.0;
};

struct ConvertReport {
  std::string robot_name;
  std::vector<std::string> modules;     // generated, in generation order
  std::vector<std::string> auto_added;  // dependencies that were not requested
  std::vector<ModuleTiming> timings;
  Manifest manifest;
};

/// Validates module names and closes the selection under dependencies.
/// Throws kUnknownModule.
std::vector<std::string> resolve_module_selection(const std::vector<std::string>& requested,
                                                  std::vector<std::string>* auto_added = nullptr);

/// Derives the selected modules of `model` and writes them to `out_dir`.
/// `out_dir` must be absent, empty, or an existing URDD (which is replaced);
/// anything else is refused with kIoFailure. On failure the output directory
/// is removed unless `keep_partial` is set.
ConvertReport convert_model(const RobotModel& model, const fs::path& out_dir, const ConvertOptions& options);

/// Parses `urdf_path` and converts it. The URDF directory is appended to the
/// asset roots, followed by $URDD_ASSET_ROOT when set.
ConvertReport convert_urdf(const fs::path& urdf_path, const fs::path& out_dir, ConvertOptions options);

/// Asset roots in lookup order: explicit roots, the URDF directory, then
/// $URDD_ASSET_ROOT.
std::vector<fs::path> default_asset_roots(const std::vector<fs::path>& explicit_roots, const fs::path& urdf_path);

/// Size accounting of a URDD directory.
struct UrddSummary {
  std::string robot_name;
  std::string format_version;
  int num_dofs = -1;   // -1 when dof_module is absent
  int num_links = -1;  // -1 when urdf_module is absent
  std::vector<std::pair<std::string, std::string>> module_versions;
  std::uintmax_t bytes_total = 0;
  std::uintmax_t bytes_without_meshes = 0;  // manifest + module.json/yaml files only
};

UrddSummary summarize_urdd(const fs::path& root);
Json summary_to_json(const UrddSummary& summary);

// ---------------------------------------------------------------------------
// Composition

struct AttachSpec {
  std::string attach_link;  // link name in the parent, before prefixing
  JointSpec joint;          // child_link must be the prefixed child root
  std::string parent_prefix;
  std::string child_prefix;
};

/// Prefixes every link and joint name (and mimic references).
RobotModel prefix_model(const RobotModel& model, const std::string& prefix);

/// Union tree: parent links, then child links; parent joints, the attachment
/// joint, then child joints. The composite is named "<parent>+<child>".
/// Throws kUnknownAttachLink, kIllegalJoint or kNameCollision.
RobotModel combine_models(const RobotModel& parent, const RobotModel& child, const AttachSpec& spec);

/// Combines two URDDs into a freshly derived composite at `out_dir`. Mesh
/// geometry is taken from each source's original_meshes_module and copied
/// into the composite. The manifest records the source robots and their
/// manifest digests under the "composite" extension key.
ConvertReport combine_urdds(const UrddHandle& parent, const UrddHandle& child, const AttachSpec& spec,
                            const fs::path& out_dir, ConvertOptions options);

/// Default prefix for a robot: its name followed by "/".
std::string default_prefix(const std::string& robot_name);

/// SHA-256 over the canonical manifest of a URDD.
std::string manifest_digest(const UrddHandle& urdd);

}  // namespace urdd
