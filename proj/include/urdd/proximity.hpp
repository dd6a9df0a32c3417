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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urdd/kinematics.hpp"
#include "urdd/store.hpp"

namespace urdd {

/// Uniform configurations: bounded DOFs in [lower, upper], unbounded
/// rotations in [-pi, pi], unbounded translations in [-1, 1] m. Samples are
/// drawn sample-major from one mt19937_64 stream, so the first n samples
/// for a seed are a prefix of any larger draw with that seed.
std::vector<std::vector<double>> sample_configurations(const std::vector<BoundsEntry>& bounds, int n,
                                                       std::uint64_t seed);

enum class ShapeType { kHull, kObb, kSphere, kDecomposition };

std::string_view to_string(ShapeType type);
std::optional<ShapeType> shape_type_from_string(std::string_view name);
const std::vector<ShapeType>& all_shape_types();

struct PairStats {
  std::string link_a;  // earlier link in document order
  std::string link_b;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  int sample_count = 0;
  double intersect_fraction = 0.0;
};

struct DistanceStats {
  ShapeType shape_type = ShapeType::kHull;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> links;  // links with geometry, document order
  std::vector<PairStats> pairs;    // every unordered pair of `links`

  /// Symmetric lookup; nullptr when the pair is absent.
  const PairStats* find(std::string_view a, std::string_view b) const;
};

struct ProximityOptions {
  int samples = 1000;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Statistics of the posed distance between every pair of links with
/// geometry over sampled configurations. Needs the urdf, chain, dof and
/// bounds modules plus the modules of the requested shape type (hull:
/// convex_hull_meshes_module; obb/sphere: link_shapes_approximations_module;
/// decomposition: convex_decomposition_meshes_module). Throws
/// kMissingDependencyModule. Output does not depend on `jobs`.
DistanceStats derive_distance_stats(const UrddHandle& urdd, const ProximityOptions& options,
                                    ShapeType shape_type = ShapeType::kHull);

Json distance_stats_to_json(const DistanceStats& stats);
DistanceStats distance_stats_from_json(const Json& doc);

enum class SkipReason { kAdjacent, kAlwaysColliding, kNoGeometry, kUserSpecified };

std::string_view to_string(SkipReason reason);

/// One entry of skips_overrides.json.
struct SkipOverride {
  std::string link_a;  // lexicographically smaller name
  std::string link_b;
  bool skip = true;
};

/// Parses `[{"link_a", "link_b", "skip"}]`, normalizing each pair to
/// lexicographic order. Later entries for the same pair win. Throws
/// kMalformedModule on schema errors.
std::vector<SkipOverride> parse_overrides(const Json& doc);
Json overrides_to_json(const std::vector<SkipOverride>& overrides);

inline constexpr double kAlwaysCollidingThreshold = 0.99;

struct SkipMatrix {
  ShapeType shape_type = ShapeType::kHull;
  std::vector<std::string> links;  // every link, chain order of urdf_module
  std::vector<std::vector<bool>> skips;
  /// Keyed by lexicographically ordered pair.
  std::map<std::pair<std::string, std::string>, SkipReason> reasons;
  std::map<std::pair<std::string, std::string>, double> intersect_fractions;

  bool skipped(std::string_view a, std::string_view b) const;
};

/// Skip rules, in precedence order: user override (skip=true gives
/// user_specified, skip=false keeps the pair checked), adjacent links,
/// a link without geometry, intersect fraction >= threshold.
/// `adjacent` holds lexicographically ordered pairs.
SkipMatrix derive_skip_matrix(const std::vector<std::string>& links,
                              const std::vector<std::pair<std::string, std::string>>& adjacent,
                              const DistanceStats& stats, ShapeType shape_type,
                              const std::vector<SkipOverride>& overrides = {},
                              double threshold = kAlwaysCollidingThreshold);

/// Same, reading links and adjacency from a chain_module payload.
SkipMatrix derive_skip_matrix(const DistanceStats& stats, const Json& chain_module, ShapeType shape_type,
                              const std::vector<SkipOverride>& overrides = {},
                              double threshold = kAlwaysCollidingThreshold);

/// link_shapes_skips_module payload for all shape types. Hull fractions
/// come from `hull_stats`; the other shape types are sampled with the same
/// configurations.
Json derive_skips_module(const UrddHandle& urdd, const DistanceStats& hull_stats, const ProximityOptions& options,
                         const std::vector<SkipOverride>& overrides = {},
                         double threshold = kAlwaysCollidingThreshold);

/// Recomputes the skip matrices of an existing skips payload with new
/// overrides (no resampling; uses the stored intersect fractions).
Json apply_overrides(const Json& skips_module, const Json& chain_module, const std::vector<SkipOverride>& overrides);

Json skip_matrix_to_json(const SkipMatrix& matrix);

}  // namespace urdd
