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

#include "urdd/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "urdd/distance.hpp"
#include "urdd/error.hpp"
#include "urdd/fk.hpp"
#include "urdd/link_shapes.hpp"
#include "urdd/parallel.hpp"

namespace urdd {
namespace {

using Pair = std::pair<std::string, std::string>;

Pair ordered(const std::string& a, const std::string& b) { return a < b ? Pair{a, b} : Pair{b, a}; }

/// Piece bounding spheres of one link, posed in the world frame.
struct PosedPieces {
  std::vector<Vec3> centers;
  std::vector<double> radii;
};

PosedPieces pose_pieces(const LinkShapes& shape, const Transform& pose) {
  PosedPieces out;
  out.centers.reserve(shape.piece_spheres.size());
  out.radii.reserve(shape.piece_spheres.size());
  for (const auto& s : shape.piece_spheres) {
    out.centers.push_back(pose * s.center);
    out.radii.push_back(s.radius);
  }
  return out;
}

/// Closest pair of decomposition pieces. Piece bounding spheres give lower
/// bounds: the pair with the smallest bound seeds the estimate, and only
/// pairs whose bound beats the running best are examined, nearest first.
double decomposition_distance(const LinkShapes& a, const Transform& pa, const PosedPieces& wa, const LinkShapes& b,
                              const Transform& pb, const PosedPieces& wb,
                              std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>>& scratch) {
  scratch.clear();
  double seed_bound = std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> seed{0, 0};
  for (std::size_t i = 0; i < wa.centers.size(); ++i) {
    for (std::size_t j = 0; j < wb.centers.size(); ++j) {
      const double bound = std::max(0.0, (wa.centers[i] - wb.centers[j]).norm() - wa.radii[i] - wb.radii[j]);
      scratch.push_back({bound, {i, j}});
      if (bound < seed_bound) {
        seed_bound = bound;
        seed = {i, j};
      }
    }
  }
  if (scratch.empty()) return std::numeric_limits<double>::infinity();
  double best = convex_distance(a.pieces[seed.first], pa, b.pieces[seed.second], pb);
  if (best == 0.0) return 0.0;
  const auto beaten = std::partition(scratch.begin(), scratch.end(), [&](const auto& e) {
    return e.first < best && e.second != seed;
  });
  std::sort(scratch.begin(), beaten);
  for (auto it = scratch.begin(); it != beaten; ++it) {
    if (it->first >= best) break;
    best = std::min(best, convex_distance(a.pieces[it->second.first], pa, b.pieces[it->second.second], pb));
    if (best == 0.0) break;
  }
  return best;
}

/// True when some pair of decomposition pieces touches or intersects. Only
/// piece pairs whose bounding spheres meet can, so the rest are skipped.
bool decomposition_overlap(const LinkShapes& a, const Transform& pa, const PosedPieces& wa, const LinkShapes& b,
                           const Transform& pb, const PosedPieces& wb) {
  for (std::size_t i = 0; i < wa.centers.size(); ++i) {
    for (std::size_t j = 0; j < wb.centers.size(); ++j) {
      const double reach = wa.radii[i] + wb.radii[j];
      if ((wa.centers[i] - wb.centers[j]).squaredNorm() > reach * reach) continue;
      if (convex_distance(a.pieces[i], pa, b.pieces[j], pb) == 0.0) return true;
    }
  }
  return false;
}

/// Distance between two posed link shapes of a single-body representation.
double shape_distance(const LinkShapes& a, const Transform& pa, const LinkShapes& b, const Transform& pb,
                      ShapeType type) {
  switch (type) {
    case ShapeType::kHull: return convex_distance(a.hull, pa, b.hull, pb);
    case ShapeType::kObb: return box_distance(a.obb, pa, b.obb, pb);
    case ShapeType::kSphere: return sphere_distance(a.sphere, pa, b.sphere, pb);
    case ShapeType::kDecomposition: break;
  }
  throw Error(ErrorCode::kDimensionMismatch, "decomposition distances need posed pieces");
}

std::vector<Pair> adjacency_from_chain(const Json& chain) {
  std::vector<Pair> out;
  for (const auto& n : chain.at("nodes")) {
    if (n.at("parent_link").is_null()) continue;
    out.push_back(ordered(n.at("link").get<std::string>(), n.at("parent_link").get<std::string>()));
  }
  return out;
}

std::vector<std::string> links_from_chain(const Json& chain) {
  std::vector<std::string> out;
  for (const auto& n : chain.at("nodes")) out.push_back(n.at("link").get<std::string>());
  return out;
}

}  // namespace

std::vector<std::vector<double>> sample_configurations(const std::vector<BoundsEntry>& bounds, int n,
                                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // 53 random bits -> [0, 1), identical on every platform.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<double>> out(static_cast<std::size_t>(std::max(n, 0)));
  for (auto& q : out) {
    q.resize(bounds.size());
    for (std::size_t d = 0; d < bounds.size(); ++d) {
      const BoundsEntry& b = bounds[d];
      double lo, hi;
      if (!b.unbounded && b.lower && b.upper) {
        lo = *b.lower;
        hi = *b.upper;
      } else if (b.kind == DofKind::kRotation) {
        lo = -kPi;
        hi = kPi;
      } else {
        lo = -1.0;
        hi = 1.0;
      }
      q[d] = lo + (hi - lo) * unit();
    }
  }
  return out;
}

std::string_view to_string(ShapeType type) {
  switch (type) {
    case ShapeType::kHull: return "hull";
    case ShapeType::kObb: return "obb";
    case ShapeType::kSphere: return "sphere";
    case ShapeType::kDecomposition: return "decomposition";
  }
  return "hull";
}

std::optional<ShapeType> shape_type_from_string(std::string_view name) {
  for (ShapeType t : all_shape_types())
    if (to_string(t) == name) return t;
  return std::nullopt;
}

const std::vector<ShapeType>& all_shape_types() {
  static const std::vector<ShapeType> kTypes = {ShapeType::kHull, ShapeType::kObb, ShapeType::kSphere,
                                                ShapeType::kDecomposition};
  return kTypes;
}

const PairStats* DistanceStats::find(std::string_view a, std::string_view b) const {
  for (const auto& p : pairs) {
    if ((p.link_a == a && p.link_b == b) || (p.link_a == b && p.link_b == a)) return &p;
  }
  return nullptr;
}

namespace {

/// Samples every pair of links with geometry. With `overlap_only`, the
/// decomposition representation records 0 for intersecting samples and 1
/// otherwise, so only `intersect_fraction` is meaningful; this is all the
/// skip matrices need and avoids exact piece-to-piece distances.
DistanceStats sample_pairs(const UrddHandle& urdd, const ProximityOptions& options, ShapeType shape_type,
                           bool overlap_only) {
  if (options.samples < 1) throw Error(ErrorCode::kDimensionMismatch, "sample count must be >= 1");
  const FkModel fk = FkModel::from_urdd(urdd);
  const std::vector<BoundsEntry> bounds = bounds_from_json(urdd.module(kBoundsModule));
  if (static_cast<int>(bounds.size()) != fk.num_dofs()) {
    throw Error(ErrorCode::kDimensionMismatch, "bounds module does not match dof module");
  }

  ShapeLoad load;
  load.hulls = shape_type == ShapeType::kHull;
  load.approximations = shape_type == ShapeType::kObb || shape_type == ShapeType::kSphere ||
                        (shape_type == ShapeType::kDecomposition && urdd.has_module(kApproximationsModule));
  load.pieces = shape_type == ShapeType::kDecomposition;
  if (!urdd.has_module(kConvexHullModule)) {
    throw Error(ErrorCode::kMissingDependencyModule, std::string(kConvexHullModule) + " required for proximity");
  }
  std::vector<LinkShapes> shapes = load_link_shapes(urdd, load);

  DistanceStats stats;
  stats.shape_type = shape_type;
  stats.samples = options.samples;
  stats.seed = options.seed;
  std::vector<int> shape_of, chain_index;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (!shapes[i].has_geometry) continue;
    const int idx = fk.link_index(shapes[i].link);
    if (idx < 0) throw Error(ErrorCode::kMalformedModule, "link '" + shapes[i].link + "' missing from chain");
    stats.links.push_back(shapes[i].link);
    shape_of.push_back(static_cast<int>(i));
    chain_index.push_back(idx);
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(stats.links.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(stats.links.size()); ++j) pairs.emplace_back(i, j);

  const auto configs = sample_configurations(bounds, options.samples, options.seed);
  const std::size_t n = configs.size();
  std::vector<double> dist(pairs.size() * n);
  const auto shape_at = [&](int k) -> const LinkShapes& {
    return shapes[static_cast<std::size_t>(shape_of[static_cast<std::size_t>(k)])];
  };
  parallel_for(n, options.jobs, [&](std::size_t s) {
    const FkResult poses = fk.compute(configs[s]);
    const auto pose_at = [&](int k) -> const Transform& {
      return poses.poses[static_cast<std::size_t>(chain_index[static_cast<std::size_t>(k)])];
    };
    if (shape_type == ShapeType::kDecomposition) {
      std::vector<PosedPieces> posed;
      posed.reserve(stats.links.size());
      for (int k = 0; k < static_cast<int>(stats.links.size()); ++k) posed.push_back(pose_pieces(shape_at(k), pose_at(k)));
      std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> scratch;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const PosedPieces& wi = posed[static_cast<std::size_t>(i)];
        const PosedPieces& wj = posed[static_cast<std::size_t>(j)];
        dist[p * n + s] = overlap_only
                              ? (decomposition_overlap(shape_at(i), pose_at(i), wi, shape_at(j), pose_at(j), wj) ? 0.0 : 1.0)
                              : decomposition_distance(shape_at(i), pose_at(i), wi, shape_at(j), pose_at(j), wj, scratch);
      }
      return;
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      dist[p * n + s] = shape_distance(shape_at(i), pose_at(i), shape_at(j), pose_at(j), shape_type);
    }
  });

  // Reduction in sample order, independent of the worker count.
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    PairStats ps;
    ps.link_a = stats.links[static_cast<std::size_t>(pairs[p].first)];
    ps.link_b = stats.links[static_cast<std::size_t>(pairs[p].second)];
    ps.min = std::numeric_limits<double>::infinity();
    ps.max = 0.0;
    double sum = 0.0;
    int hits = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const double d = dist[p * n + s];
      ps.min = std::min(ps.min, d);
      ps.max = std::max(ps.max, d);
      sum += d;
      hits += d == 0.0;
    }
    ps.mean = std::clamp(sum / static_cast<double>(n), ps.min, ps.max);
    ps.sample_count = static_cast<int>(n);
    ps.intersect_fraction = static_cast<double>(hits) / static_cast<double>(n);
    stats.pairs.push_back(std::move(ps));
  }
  return stats;
}

}  // namespace

DistanceStats derive_distance_stats(const UrddHandle& urdd, const ProximityOptions& options, ShapeType shape_type) {
  return sample_pairs(urdd, options, shape_type, false);
}

Json distance_stats_to_json(const DistanceStats& stats) {
  Json pairs = Json::array();
  for (const auto& p : stats.pairs) {
    pairs.push_back({{"link_a", p.link_a},
                     {"link_b", p.link_b},
                     {"min", p.min},
                     {"max", p.max},
                     {"mean", p.mean},
                     {"sample_count", p.sample_count},
                     {"intersect_fraction", p.intersect_fraction}});
  }
  return {{"shape_type", to_string(stats.shape_type)},
          {"samples", stats.samples},
          {"seed", stats.seed},
          {"links", stats.links},
          {"pairs", std::move(pairs)}};
}

DistanceStats distance_stats_from_json(const Json& doc) {
  DistanceStats stats;
  try {
    stats.shape_type = shape_type_from_string(doc.at("shape_type").get<std::string>()).value_or(ShapeType::kHull);
    stats.samples = doc.at("samples").get<int>();
    stats.seed = doc.at("seed").get<std::uint64_t>();
    stats.links = doc.at("links").get<std::vector<std::string>>();
    for (const auto& p : doc.at("pairs")) {
      PairStats ps;
      ps.link_a = p.at("link_a").get<std::string>();
      ps.link_b = p.at("link_b").get<std::string>();
      ps.min = p.at("min").get<double>();
      ps.max = p.at("max").get<double>();
      ps.mean = p.at("mean").get<double>();
      ps.sample_count = p.at("sample_count").get<int>();
      ps.intersect_fraction = p.at("intersect_fraction").get<double>();
      stats.pairs.push_back(std::move(ps));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("distance statistics: ") + e.what());
  }
  return stats;
}

std::string_view to_string(SkipReason reason) {
  switch (reason) {
    case SkipReason::kAdjacent: return "adjacent";
    case SkipReason::kAlwaysColliding: return "always_colliding";
    case SkipReason::kNoGeometry: return "no_geometry";
    case SkipReason::kUserSpecified: return "user_specified";
  }
  return "adjacent";
}

std::vector<SkipOverride> parse_overrides(const Json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedModule, "skip overrides must be a JSON array");
  std::map<Pair, bool> merged;
  try {
    for (const auto& e : doc) {
      const auto a = e.at("link_a").get<std::string>();
      const auto b = e.at("link_b").get<std::string>();
      if (a == b) throw Error(ErrorCode::kMalformedModule, "skip override pairs a link with itself: " + a);
      merged[ordered(a, b)] = e.at("skip").get<bool>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("skip overrides: ") + e.what());
  }
  std::vector<SkipOverride> out;
  for (const auto& [pair, skip] : merged) out.push_back({pair.first, pair.second, skip});
  return out;
}

Json overrides_to_json(const std::vector<SkipOverride>& overrides) {
  Json out = Json::array();
  for (const auto& o : overrides) {
    const Pair p = ordered(o.link_a, o.link_b);
    out.push_back({{"link_a", p.first}, {"link_b", p.second}, {"skip", o.skip}});
  }
  return out;
}

bool SkipMatrix::skipped(std::string_view a, std::string_view b) const {
  std::size_t ia = links.size(), ib = links.size();
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i] == a) ia = i;
    if (links[i] == b) ib = i;
  }
  if (ia == links.size() || ib == links.size()) throw Error(ErrorCode::kUnknownLink, std::string(a) + "/" + std::string(b));
  return skips[ia][ib];
}

SkipMatrix derive_skip_matrix(const std::vector<std::string>& links, const std::vector<Pair>& adjacent,
                              const DistanceStats& stats, ShapeType shape_type,
                              const std::vector<SkipOverride>& overrides, double threshold) {
  SkipMatrix m;
  m.shape_type = shape_type;
  m.links = links;
  const std::size_t n = links.size();
  m.skips.assign(n, std::vector<bool>(n, false));
  const std::set<std::string> with_geometry(stats.links.begin(), stats.links.end());
  const std::set<Pair> adjacent_set(adjacent.begin(), adjacent.end());
  std::map<Pair, bool> user;
  for (const auto& o : overrides) user[ordered(o.link_a, o.link_b)] = o.skip;
  for (const auto& p : stats.pairs) m.intersect_fractions[ordered(p.link_a, p.link_b)] = p.intersect_fraction;

  for (std::size_t i = 0; i < n; ++i) {
    m.skips[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Pair key = ordered(links[i], links[j]);
      std::optional<SkipReason> reason;
      auto u = user.find(key);
      if (u != user.end()) {
        if (u->second) reason = SkipReason::kUserSpecified;
      } else if (adjacent_set.count(key)) {
        reason = SkipReason::kAdjacent;
      } else if (!with_geometry.count(links[i]) || !with_geometry.count(links[j])) {
        reason = SkipReason::kNoGeometry;
      } else {
        auto f = m.intersect_fractions.find(key);
        if (f != m.intersect_fractions.end() && f->second >= threshold) reason = SkipReason::kAlwaysColliding;
      }
      if (reason) {
        m.skips[i][j] = m.skips[j][i] = true;
        m.reasons[key] = *reason;
      }
    }
  }
  return m;
}

SkipMatrix derive_skip_matrix(const DistanceStats& stats, const Json& chain_module, ShapeType shape_type,
                              const std::vector<SkipOverride>& overrides, double threshold) {
  return derive_skip_matrix(links_from_chain(chain_module), adjacency_from_chain(chain_module), stats, shape_type,
                            overrides, threshold);
}

Json skip_matrix_to_json(const SkipMatrix& matrix) {
  Json rows = Json::array();
  for (const auto& row : matrix.skips) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b);
    rows.push_back(std::move(r));
  }
  Json reasons = Json::array();
  for (const auto& [pair, reason] : matrix.reasons) {
    reasons.push_back({{"link_a", pair.first}, {"link_b", pair.second}, {"reason", to_string(reason)}});
  }
  Json fractions = Json::array();
  for (const auto& [pair, value] : matrix.intersect_fractions) {
    fractions.push_back({{"link_a", pair.first}, {"link_b", pair.second}, {"value", value}});
  }
  return {{"shape_type", to_string(matrix.shape_type)},
          {"skips", std::move(rows)},
          {"reasons", std::move(reasons)},
          {"intersect_fractions", std::move(fractions)}};
}

namespace {

/// Minimal stats view rebuilt from a stored matrix: links with geometry and
/// their intersect fractions.
DistanceStats stats_from_matrix(const Json& matrix, const std::vector<std::string>& geometry_links) {
  DistanceStats stats;
  stats.links = geometry_links;
  for (const auto& f : matrix.at("intersect_fractions")) {
    PairStats p;
    p.link_a = f.at("link_a").get<std::string>();
    p.link_b = f.at("link_b").get<std::string>();
    p.intersect_fraction = f.at("value").get<double>();
    stats.pairs.push_back(std::move(p));
  }
  return stats;
}

Json skips_payload(const std::vector<std::string>& links, const std::vector<std::string>& geometry_links,
                   int samples, std::uint64_t seed, double threshold, const std::vector<SkipOverride>& overrides,
                   Json matrices) {
  return {{"samples", samples},
          {"seed", seed},
          {"threshold", threshold},
          {"links", links},
          {"geometry_links", geometry_links},
          {"overrides", overrides_to_json(overrides)},
          {"matrices", std::move(matrices)}};
}

}  // namespace

Json derive_skips_module(const UrddHandle& urdd, const DistanceStats& hull_stats, const ProximityOptions& options,
                         const std::vector<SkipOverride>& overrides, double threshold) {
  const Json& chain = urdd.module(kChainModule);
  const auto links = links_from_chain(chain);
  const auto adjacent = adjacency_from_chain(chain);
  std::set<std::string> known(links.begin(), links.end());
  for (const auto& o : overrides) {
    for (const auto& l : {o.link_a, o.link_b})
      if (!known.count(l)) throw Error(ErrorCode::kUnknownLink, "skip override names unknown link '" + l + "'");
  }
  Json matrices = Json::object();
  for (ShapeType type : all_shape_types()) {
    const DistanceStats stats =
        type == ShapeType::kHull ? hull_stats : sample_pairs(urdd, options, type, /*overlap_only=*/true);
    matrices[std::string(to_string(type))] =
        skip_matrix_to_json(derive_skip_matrix(links, adjacent, stats, type, overrides, threshold));
  }
  return skips_payload(links, hull_stats.links, options.samples, options.seed, threshold, overrides,
                       std::move(matrices));
}

Json apply_overrides(const Json& skips_module, const Json& chain_module, const std::vector<SkipOverride>& overrides) {
  try {
    const auto links = links_from_chain(chain_module);
    const auto adjacent = adjacency_from_chain(chain_module);
    std::set<std::string> known(links.begin(), links.end());
    for (const auto& o : overrides) {
      for (const auto& l : {o.link_a, o.link_b})
        if (!known.count(l)) throw Error(ErrorCode::kUnknownLink, "skip override names unknown link '" + l + "'");
    }
    const auto geometry_links = skips_module.at("geometry_links").get<std::vector<std::string>>();
    const double threshold = skips_module.at("threshold").get<double>();
    Json matrices = Json::object();
    for (auto it = skips_module.at("matrices").begin(); it != skips_module.at("matrices").end(); ++it) {
      const auto type = shape_type_from_string(it.key());
      if (!type) throw Error(ErrorCode::kMalformedModule, "unknown shape type '" + it.key() + "'");
      const DistanceStats stats = stats_from_matrix(it.value(), geometry_links);
      matrices[it.key()] =
          skip_matrix_to_json(derive_skip_matrix(links, adjacent, stats, *type, overrides, threshold));
    }
    return skips_payload(links, geometry_links, skips_module.at("samples").get<int>(),
                         skips_module.at("seed").get<std::uint64_t>(), threshold, overrides, std::move(matrices));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("skips module: ") + e.what());
  }
}

}  // namespace urdd
