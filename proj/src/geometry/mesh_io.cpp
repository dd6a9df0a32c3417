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
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "urdd/error.hpp"
#include "urdd/mesh.hpp"
#include "urdd/store.hpp"

namespace urdd {
namespace {

template <typename T>
T read_le(std::string_view bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) throw Error(ErrorCode::kCorruptMesh, "truncated binary mesh");
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void write_le(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

std::string format_coord(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TriMesh parse_stl_ascii(std::string_view text) {
  TriMesh mesh;
  std::istringstream in{std::string(text)};
  std::string tok;
  std::vector<int> facet;
  while (in >> tok) {
    if (tok == "vertex") {
      double x, y, z;
      if (!(in >> x >> y >> z)) throw Error(ErrorCode::kCorruptMesh, "bad STL vertex");
      facet.push_back(static_cast<int>(mesh.vertices.size()));
      mesh.vertices.emplace_back(x, y, z);
    } else if (tok == "endfacet") {
      if (facet.size() != 3) throw Error(ErrorCode::kCorruptMesh, "STL facet without 3 vertices");
      mesh.triangles.push_back({facet[0], facet[1], facet[2]});
      facet.clear();
    }
  }
  return mesh;
}

/// Applies glTF node transforms while walking the scene graph.
void collect_glb_node(const Json& gltf, std::string_view bin, int node_index, const Eigen::Matrix4d& parent,
                      TriMesh& out, int depth) {
  if (depth > 64) throw Error(ErrorCode::kCorruptMesh, "glTF node hierarchy too deep");
  const Json& node = gltf.at("nodes").at(static_cast<std::size_t>(node_index));
  Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
  if (node.contains("matrix")) {
    const auto& m = node["matrix"];
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 4; ++r) local(r, c) = m.at(static_cast<std::size_t>(c * 4 + r)).get<double>();
  } else {
    Eigen::Affine3d a = Eigen::Affine3d::Identity();
    if (node.contains("translation")) {
      const auto& t = node["translation"];
      a.translate(Vec3(t.at(0), t.at(1), t.at(2)));
    }
    if (node.contains("rotation")) {
      const auto& q = node["rotation"];  // x, y, z, w
      a.rotate(Eigen::Quaterniond(q.at(3).get<double>(), q.at(0).get<double>(), q.at(1).get<double>(),
                                  q.at(2).get<double>()));
    }
    if (node.contains("scale")) {
      const auto& s = node["scale"];
      a.scale(Vec3(s.at(0), s.at(1), s.at(2)));
    }
    local = a.matrix();
  }
  const Eigen::Matrix4d world = parent * local;

  auto accessor_data = [&](int accessor_index, int expect_components) {
    const Json& acc = gltf.at("accessors").at(static_cast<std::size_t>(accessor_index));
    const Json& view = gltf.at("bufferViews").at(acc.at("bufferView").get<std::size_t>());
    const std::size_t count = acc.at("count").get<std::size_t>();
    const int ctype = acc.at("componentType").get<int>();
    const std::size_t csize = ctype == 5126 || ctype == 5125 ? 4 : ctype == 5123 ? 2 : ctype == 5121 ? 1 : 0;
    if (csize == 0) throw Error(ErrorCode::kUnsupportedFormat, "glTF component type " + std::to_string(ctype));
    const std::size_t stride = view.value("byteStride", csize * static_cast<std::size_t>(expect_components));
    const std::size_t base = view.value("byteOffset", std::size_t{0}) + acc.value("byteOffset", std::size_t{0});
    std::vector<double> values;
    values.reserve(count * static_cast<std::size_t>(expect_components));
    for (std::size_t i = 0; i < count; ++i) {
      for (int c = 0; c < expect_components; ++c) {
        const std::size_t off = base + i * stride + static_cast<std::size_t>(c) * csize;
        switch (ctype) {
          case 5126: values.push_back(read_le<float>(bin, off)); break;
          case 5125: values.push_back(read_le<std::uint32_t>(bin, off)); break;
          case 5123: values.push_back(read_le<std::uint16_t>(bin, off)); break;
          default: values.push_back(read_le<std::uint8_t>(bin, off)); break;
        }
      }
    }
    return values;
  };

  if (node.contains("mesh")) {
    const Json& mesh = gltf.at("meshes").at(node["mesh"].get<std::size_t>());
    for (const auto& prim : mesh.at("primitives")) {
      if (prim.value("mode", 4) != 4) continue;
      const int base = static_cast<int>(out.vertices.size());
      const auto pos = accessor_data(prim.at("attributes").at("POSITION").get<int>(), 3);
      for (std::size_t i = 0; i + 2 < pos.size(); i += 3) {
        Eigen::Vector4d p(pos[i], pos[i + 1], pos[i + 2], 1.0);
        out.vertices.push_back((world * p).head<3>());
      }
      const int nv = static_cast<int>(pos.size() / 3);
      std::vector<double> idx;
      if (prim.contains("indices")) {
        idx = accessor_data(prim["indices"].get<int>(), 1);
      } else {
        for (int i = 0; i < nv; ++i) idx.push_back(i);
      }
      for (std::size_t i = 0; i + 2 < idx.size(); i += 3) {
        out.triangles.push_back({base + static_cast<int>(idx[i]), base + static_cast<int>(idx[i + 1]),
                                 base + static_cast<int>(idx[i + 2])});
      }
    }
  }
  if (node.contains("children")) {
    for (const auto& child : node["children"]) collect_glb_node(gltf, bin, child.get<int>(), world, out, depth + 1);
  }
}

}  // namespace

TriMesh parse_obj(std::string_view text) {
  TriMesh mesh;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.size() < 2) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw Error(ErrorCode::kCorruptMesh, "OBJ line " + std::to_string(line_no));
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string ref;
      while (ls >> ref) {
        int idx = 0;
        try {
          idx = std::stoi(ref.substr(0, ref.find('/')));
        } catch (const std::exception&) {
          throw Error(ErrorCode::kCorruptMesh, "OBJ face index on line " + std::to_string(line_no));
        }
        idx = idx < 0 ? static_cast<int>(mesh.vertices.size()) + idx : idx - 1;
        if (idx < 0 || idx >= static_cast<int>(mesh.vertices.size())) {
          throw Error(ErrorCode::kCorruptMesh, "OBJ face index out of range on line " + std::to_string(line_no));
        }
        poly.push_back(idx);
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
    }
  }
  return mesh;
}

TriMesh parse_stl(std::string_view bytes) {
  if (bytes.size() >= 84) {
    const auto n = read_le<std::uint32_t>(bytes, 80);
    if (84 + static_cast<std::size_t>(n) * 50 == bytes.size()) {
      TriMesh mesh;
      mesh.vertices.reserve(n * 3);
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t base = 84 + static_cast<std::size_t>(i) * 50 + 12;
        const int first = static_cast<int>(mesh.vertices.size());
        for (int v = 0; v < 3; ++v) {
          const std::size_t off = base + static_cast<std::size_t>(v) * 12;
          mesh.vertices.emplace_back(read_le<float>(bytes, off), read_le<float>(bytes, off + 4),
                                     read_le<float>(bytes, off + 8));
        }
        mesh.triangles.push_back({first, first + 1, first + 2});
      }
      return mesh;
    }
  }
  if (bytes.substr(0, 5) == "solid") return parse_stl_ascii(bytes);
  throw Error(ErrorCode::kCorruptMesh, "not a binary or ASCII STL");
}

TriMesh parse_glb(std::string_view bytes) {
  if (bytes.size() < 20 || bytes.substr(0, 4) != "glTF") throw Error(ErrorCode::kCorruptMesh, "missing glTF magic");
  if (read_le<std::uint32_t>(bytes, 4) != 2) throw Error(ErrorCode::kUnsupportedFormat, "glTF version != 2");
  std::size_t offset = 12;
  std::string_view json_chunk, bin_chunk;
  while (offset + 8 <= bytes.size()) {
    const auto len = read_le<std::uint32_t>(bytes, offset);
    const auto type = read_le<std::uint32_t>(bytes, offset + 4);
    if (offset + 8 + len > bytes.size()) throw Error(ErrorCode::kCorruptMesh, "truncated GLB chunk");
    const std::string_view data = bytes.substr(offset + 8, len);
    if (type == 0x4E4F534A) json_chunk = data;
    if (type == 0x004E4942) bin_chunk = data;
    offset += 8 + len;
  }
  if (json_chunk.empty()) throw Error(ErrorCode::kCorruptMesh, "GLB without JSON chunk");
  TriMesh mesh;
  try {
    const Json gltf = Json::parse(json_chunk);
    std::vector<int> roots;
    if (gltf.contains("scenes") && !gltf["scenes"].empty()) {
      const std::size_t scene = gltf.value("scene", 0);
      for (const auto& n : gltf["scenes"].at(scene).value("nodes", Json::array())) roots.push_back(n.get<int>());
      for (int r : roots) collect_glb_node(gltf, bin_chunk, r, Eigen::Matrix4d::Identity(), mesh, 0);
    } else if (gltf.contains("nodes")) {
      for (std::size_t i = 0; i < gltf["nodes"].size(); ++i)
        collect_glb_node(gltf, bin_chunk, static_cast<int>(i), Eigen::Matrix4d::Identity(), mesh, 64);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kCorruptMesh, std::string("GLB JSON: ") + e.what());
  }
  return mesh;
}

TriMesh load_mesh_bytes(std::string_view bytes, std::string_view extension, const Vec3& scale) {
  std::string ext(extension);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!ext.empty() && ext.front() == '.') ext.erase(ext.begin());
  TriMesh mesh;
  if (ext == "obj") {
    mesh = parse_obj(bytes);
  } else if (ext == "stl") {
    mesh = parse_stl(bytes);
  } else if (ext == "glb") {
    mesh = parse_glb(bytes);
  } else {
    throw Error(ErrorCode::kUnsupportedFormat, "mesh format '" + ext + "'");
  }
  if (mesh.vertices.empty()) throw Error(ErrorCode::kCorruptMesh, "mesh has no vertices");
  return clean_mesh(scale_mesh(mesh, scale));
}

TriMesh load_mesh(const fs::path& path, const Vec3& scale) {
  const std::string ext = path.extension().string();
  {
    std::string lower = ext;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower != ".obj" && lower != ".stl" && lower != ".glb") {
      throw Error(ErrorCode::kUnsupportedFormat, path.string());
    }
  }
  if (!fs::exists(path)) throw Error(ErrorCode::kMissingMeshFile, path.string());
  try {
    TriMesh mesh = load_mesh_bytes(read_file(path), ext, scale);
    mesh.source = path.string();
    return mesh;
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string export_obj(const TriMesh& mesh) {
  std::string out = "# urdd mesh\n";
  out.reserve(mesh.vertices.size() * 60 + mesh.triangles.size() * 24);
  for (const auto& v : mesh.vertices) {
    out += "v " + format_coord(v.x()) + " " + format_coord(v.y()) + " " + format_coord(v.z()) + "\n";
  }
  for (const auto& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  }
  return out;
}

std::string export_stl(const TriMesh& mesh) {
  std::string out(80, '\0');
  std::memcpy(out.data(), "urdd binary stl", 15);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(mesh.triangles.size()));
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    Vec3 n = (b - a).cross(c - a);
    if (n.norm() > 0) n.normalize();
    for (int k = 0; k < 3; ++k) write_le<float>(out, static_cast<float>(n[k]));
    for (const Vec3* v : {&a, &b, &c})
      for (int k = 0; k < 3; ++k) write_le<float>(out, static_cast<float>((*v)[k]));
    write_le<std::uint16_t>(out, 0);
  }
  return out;
}

std::string export_glb(const TriMesh& mesh) {
  std::string bin;
  Vec3 lo, hi;
  bounds(mesh.vertices, lo, hi);
  for (const auto& v : mesh.vertices)
    for (int k = 0; k < 3; ++k) write_le<float>(bin, static_cast<float>(v[k]));
  const std::size_t pos_bytes = bin.size();
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) write_le<std::uint32_t>(bin, static_cast<std::uint32_t>(t[k]));
  const std::size_t idx_bytes = bin.size() - pos_bytes;
  while (bin.size() % 4) bin.push_back('\0');

  Json gltf = {
      {"asset", {{"version", "2.0"}, {"generator", "urdd"}}},
      {"scene", 0},
      {"scenes", Json::array({{{"nodes", {0}}}})},
      {"nodes", Json::array({{{"mesh", 0}}})},
      {"meshes", Json::array({{{"primitives", Json::array({{{"attributes", {{"POSITION", 0}}},
                                                              {"indices", 1},
                                                              {"mode", 4}}})}}})},
      {"accessors",
       Json::array({{{"bufferView", 0},
                     {"componentType", 5126},
                     {"count", mesh.vertices.size()},
                     {"type", "VEC3"},
                     {"min", {static_cast<float>(lo.x()), static_cast<float>(lo.y()), static_cast<float>(lo.z())}},
                     {"max", {static_cast<float>(hi.x()), static_cast<float>(hi.y()), static_cast<float>(hi.z())}}},
                    {{"bufferView", 1},
                     {"componentType", 5125},
                     {"count", mesh.triangles.size() * 3},
                     {"type", "SCALAR"}}})},
      {"bufferViews", Json::array({{{"buffer", 0}, {"byteOffset", 0}, {"byteLength", pos_bytes}, {"target", 34962}},
                                   {{"buffer", 0},
                                    {"byteOffset", pos_bytes},
                                    {"byteLength", idx_bytes},
                                    {"target", 34963}}})},
      {"buffers", Json::array({{{"byteLength", bin.size()}}})},
  };
  std::string json_text = gltf.dump();
  while (json_text.size() % 4) json_text.push_back(' ');

  std::string out;
  write_le<std::uint32_t>(out, 0x46546C67);  // "glTF"
  write_le<std::uint32_t>(out, 2);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(12 + 8 + json_text.size() + 8 + bin.size()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(json_text.size()));
  write_le<std::uint32_t>(out, 0x4E4F534A);  // "JSON"
  out += json_text;
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(bin.size()));
  write_le<std::uint32_t>(out, 0x004E4942);  // "BIN\0"
  out += bin;
  return out;
}

}  // namespace urdd
