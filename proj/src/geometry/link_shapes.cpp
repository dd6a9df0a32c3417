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

#include "urdd/link_shapes.hpp"

#include <cstdio>

#include "urdd/error.hpp"
#include "urdd/parallel.hpp"

namespace urdd {
namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

std::string describe(const GeometryRef& g) {
  struct Visitor {
    std::string operator()(const MeshShape& m) const { return m.filename; }
    std::string operator()(const BoxShape&) const { return "box"; }
    std::string operator()(const CylinderShape&) const { return "cylinder"; }
    std::string operator()(const SphereShape&) const { return "sphere"; }
    std::string operator()(const CapsuleShape&) const { return "capsule"; }
  };
  return std::visit(Visitor{}, g.shape);
}

/// Exports a mesh in every configured format; returns {format: path}.
Json export_mesh(const TriMesh& mesh, const std::string& stem, const GeometryOptions& options,
                 std::vector<MeshFile>& files) {
  Json refs = Json::object();
  files.push_back({stem + ".obj", export_obj(mesh)});
  refs["obj"] = stem + ".obj";
  files.push_back({stem + ".stl", export_stl(mesh)});
  refs["stl"] = stem + ".stl";
  if (options.glb) {
    files.push_back({stem + ".glb", export_glb(mesh)});
    refs["glb"] = stem + ".glb";
  }
  return refs;
}

Json mesh_summary(const TriMesh& mesh, Json files) {
  return {{"files", std::move(files)},
          {"num_vertices", mesh.vertices.size()},
          {"num_triangles", mesh.triangles.size()}};
}

ConvexHull hull_from_obj(const UrddHandle& urdd, std::string_view module, const std::string& rel) {
  const TriMesh mesh = parse_obj(urdd.read_module_file(module, rel));
  return convex_hull_or_inflated(mesh.vertices);
}

}  // namespace

fs::path resolve_asset(const std::string& filename, const std::vector<fs::path>& asset_roots) {
  if (asset_roots.empty()) return resolve_mesh_path(filename, fs::current_path());
  for (const auto& root : asset_roots) {
    fs::path candidate = resolve_mesh_path(filename, root);
    if (fs::exists(candidate)) return candidate;
  }
  return resolve_mesh_path(filename, asset_roots.front());
}

std::string encode_link_name(const std::string& link) {
  std::string out;
  for (std::size_t i = 0; i < link.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(link[i]);
    const bool plain = std::isalnum(c) || c == '_' || c == '-' || (c == '.' && i > 0);
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out.empty() ? "%" : out;
}

TriMesh merge_geometry(const std::string& link, const std::vector<GeometryRef>& geometries,
                       const GeometryOptions& options) {
  TriMesh merged;
  try {
    for (const auto& g : geometries) {
      TriMesh part;
      if (const auto* mesh = std::get_if<MeshShape>(&g.shape)) {
        part = load_mesh(resolve_asset(mesh->filename, options.asset_roots), mesh->scale);
        part.source = mesh->filename;
      } else {
        part = tessellate(g.shape, options.segments);
      }
      append_mesh(merged, transform_mesh(part, g.origin.transform()));
    }
    std::string source = merged.source;
    merged = clean_mesh(merged);
    merged.source = source;
  } catch (const Error& e) {
    throw Error(e.code(), "link '" + link + "': " + e.what());
  }
  return merged;
}

std::vector<LinkGeometry> derive_link_shapes(const RobotModel& model, const GeometryOptions& options,
                                             const LinkShapeRequest& request) {
  std::vector<LinkGeometry> out(model.links.size());
  parallel_for(model.links.size(), options.jobs, [&](std::size_t i) {
    const LinkSpec& link = model.links[i];
    LinkGeometry& g = out[i];
    g.link = link.name;
    if (link.collision_geometries.empty()) return;
    g.mesh = merge_geometry(link.name, link.collision_geometries, options);
    if (g.mesh.vertices.empty()) return;
    g.has_geometry = true;
    try {
      const bool need_hull = request.hull || request.approximations;
      const bool need_decomposition = request.decomposition || request.approximations;
      if (need_hull) g.hull = convex_hull_or_inflated(g.mesh.vertices);
      if (need_decomposition) g.decomposition = convex_decomposition(g.mesh, options.decomposition);
      if (request.approximations) {
        g.obb = oriented_bounding_box(g.mesh);
        g.sphere = bounding_sphere(g.hull->vertices);
        for (const auto& piece : g.decomposition->pieces) {
          g.piece_obbs.push_back(oriented_bounding_box(piece.as_mesh()));
          g.piece_spheres.push_back(bounding_sphere(piece.vertices));
        }
      }
    } catch (const Error& e) {
      throw Error(e.code(), "link '" + link.name + "': " + e.what());
    }
  });
  return out;
}

ModuleOutput original_meshes_module(const RobotModel& model, const GeometryOptions& options) {
  std::vector<std::pair<std::optional<TriMesh>, std::optional<TriMesh>>> meshes(model.links.size());
  parallel_for(model.links.size(), options.jobs, [&](std::size_t i) {
    const LinkSpec& link = model.links[i];
    if (!link.visual_geometries.empty()) meshes[i].first = merge_geometry(link.name, link.visual_geometries, options);
    if (!link.collision_geometries.empty()) {
      meshes[i].second = merge_geometry(link.name, link.collision_geometries, options);
    }
  });
  ModuleOutput out;
  Json links = Json::array();
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const LinkSpec& link = model.links[i];
    const std::string stem = "meshes/" + encode_link_name(link.name);
    Json entry = {{"link", link.name}, {"visual", nullptr}, {"collision", nullptr}};
    auto add = [&](const char* key, const std::optional<TriMesh>& mesh, const std::vector<GeometryRef>& refs,
                   const std::string& file_stem) {
      if (!mesh || mesh->vertices.empty()) return;
      Json summary = mesh_summary(*mesh, export_mesh(*mesh, file_stem, options, out.files));
      Json sources = Json::array();
      for (const auto& g : refs) sources.push_back(describe(g));
      summary["sources"] = std::move(sources);
      entry[key] = std::move(summary);
    };
    add("visual", meshes[i].first, link.visual_geometries, stem);
    add("collision", meshes[i].second, link.collision_geometries, stem + "/collision");
    links.push_back(std::move(entry));
  }
  out.payload = {{"links", std::move(links)}};
  return out;
}

ModuleOutput convex_hull_module(const std::vector<LinkGeometry>& links, const GeometryOptions& options) {
  ModuleOutput out;
  Json entries = Json::array();
  for (const auto& g : links) {
    Json entry = {{"link", g.link}, {"no_geometry", !g.has_geometry}, {"hull", nullptr}};
    if (g.has_geometry && g.hull) {
      const ConvexHull& h = *g.hull;
      Json summary = mesh_summary(h.as_mesh(),
                                  export_mesh(h.as_mesh(), "meshes/" + encode_link_name(g.link), options, out.files));
      summary["volume"] = h.volume;
      summary["centroid"] = vec_json(h.centroid);
      summary["inflated"] = h.inflated;
      entry["hull"] = std::move(summary);
    }
    entries.push_back(std::move(entry));
  }
  out.payload = {{"links", std::move(entries)}};
  return out;
}

ModuleOutput decomposition_module(const std::vector<LinkGeometry>& links, const GeometryOptions& options) {
  ModuleOutput out;
  Json entries = Json::array();
  for (const auto& g : links) {
    Json entry = {{"link", g.link}, {"no_geometry", !g.has_geometry}, {"decomposition", nullptr}};
    if (g.has_geometry && g.decomposition) {
      const ConvexDecomposition& d = *g.decomposition;
      Json pieces = Json::array();
      for (std::size_t i = 0; i < d.pieces.size(); ++i) {
        const ConvexHull& p = d.pieces[i];
        const std::string stem = "meshes/" + encode_link_name(g.link) + "/" + std::to_string(i);
        Json summary = mesh_summary(p.as_mesh(), export_mesh(p.as_mesh(), stem, options, out.files));
        summary["index"] = i;
        summary["volume"] = p.volume;
        summary["centroid"] = vec_json(p.centroid);
        summary["inflated"] = p.inflated;
        pieces.push_back(std::move(summary));
      }
      entry["decomposition"] = {{"num_pieces", d.pieces.size()},
                                {"concavity_tolerance_used", d.concavity_tolerance_used},
                                {"coverage_ratio", d.coverage_ratio},
                                {"covered_fraction", d.covered_fraction},
                                {"union_volume", d.union_volume},
                                {"source_volume", d.source_volume},
                                {"pieces", std::move(pieces)}};
    }
    entries.push_back(std::move(entry));
  }
  out.payload = {{"parameters",
                  {{"max_pieces", options.decomposition.max_pieces},
                   {"concavity_tolerance", options.decomposition.concavity_tolerance},
                   {"voxel_resolution", options.decomposition.voxel_resolution}}},
                 {"links", std::move(entries)}};
  return out;
}

Json obb_to_json(const OrientedBoundingBox& box) {
  return {{"center", vec_json(box.center)},
          {"axes", Json::array({vec_json(box.axes.col(0)), vec_json(box.axes.col(1)), vec_json(box.axes.col(2))})},
          {"half_extents", vec_json(box.half_extents)},
          {"volume", box.volume()}};
}

OrientedBoundingBox obb_from_json(const Json& doc) {
  OrientedBoundingBox box;
  box.center = vec_from(doc.at("center"));
  for (int k = 0; k < 3; ++k) box.axes.col(k) = vec_from(doc.at("axes").at(static_cast<std::size_t>(k)));
  box.half_extents = vec_from(doc.at("half_extents"));
  return box;
}

Json sphere_to_json(const BoundingSphere& sphere) {
  return {{"center", vec_json(sphere.center)}, {"radius", sphere.radius}};
}

BoundingSphere sphere_from_json(const Json& doc) {
  return {vec_from(doc.at("center")), doc.at("radius").get<double>()};
}

ModuleOutput approximations_module(const std::vector<LinkGeometry>& links) {
  ModuleOutput out;
  Json entries = Json::array();
  for (const auto& g : links) {
    Json entry = {{"link", g.link}, {"no_geometry", !g.has_geometry}, {"obb", nullptr}, {"sphere", nullptr},
                  {"pieces", Json::array()}};
    if (g.has_geometry && g.obb && g.sphere) {
      entry["obb"] = obb_to_json(*g.obb);
      entry["sphere"] = sphere_to_json(*g.sphere);
      for (std::size_t i = 0; i < g.piece_obbs.size(); ++i) {
        entry["pieces"].push_back(
            {{"index", i}, {"obb", obb_to_json(g.piece_obbs[i])}, {"sphere", sphere_to_json(g.piece_spheres[i])}});
      }
    }
    entries.push_back(std::move(entry));
  }
  out.payload = {{"links", std::move(entries)}};
  return out;
}

std::vector<LinkShapes> load_link_shapes(const UrddHandle& urdd, const ShapeLoad& what) {
  std::vector<LinkShapes> out;
  try {
    for (const auto& l : urdd.module(kUrdfModule).at("links")) {
      LinkShapes s;
      s.link = l.at("name").get<std::string>();
      out.push_back(std::move(s));
    }
    auto index_of = [&](const std::string& link) -> LinkShapes& {
      for (auto& s : out)
        if (s.link == link) return s;
      throw Error(ErrorCode::kMalformedModule, "shape entry for unknown link '" + link + "'");
    };
    const Json& hull_links = urdd.module(kConvexHullModule).at("links");
    for (const auto& e : hull_links) {
      LinkShapes& s = index_of(e.at("link").get<std::string>());
      s.has_geometry = !e.at("no_geometry").get<bool>();
      if (s.has_geometry && what.hulls) {
        s.hull = hull_from_obj(urdd, kConvexHullModule, e.at("hull").at("files").at("obj").get<std::string>());
      }
    }
    if (what.approximations) {
      for (const auto& e : urdd.module(kApproximationsModule).at("links")) {
        LinkShapes& s = index_of(e.at("link").get<std::string>());
        if (e.at("no_geometry").get<bool>()) continue;
        s.obb = obb_from_json(e.at("obb"));
        s.sphere = sphere_from_json(e.at("sphere"));
        for (const auto& p : e.at("pieces")) s.piece_spheres.push_back(sphere_from_json(p.at("sphere")));
      }
    }
    if (what.pieces) {
      for (const auto& e : urdd.module(kDecompositionModule).at("links")) {
        LinkShapes& s = index_of(e.at("link").get<std::string>());
        if (e.at("no_geometry").get<bool>()) continue;
        for (const auto& p : e.at("decomposition").at("pieces")) {
          s.pieces.push_back(hull_from_obj(urdd, kDecompositionModule, p.at("files").at("obj").get<std::string>()));
        }
        if (s.piece_spheres.size() != s.pieces.size()) {
          s.piece_spheres.clear();
          for (const auto& p : s.pieces) s.piece_spheres.push_back(bounding_sphere(p.vertices));
        }
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedModule, std::string("link shapes: ") + e.what());
  }
  return out;
}

}  // namespace urdd
