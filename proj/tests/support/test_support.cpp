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

#include "test_support.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <deque>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace urdd::testing {

fs::path fixture_dir() { return URDD_TEST_FIXTURE_DIR; }
fs::path cli_path() { return URDD_TEST_CLI_PATH; }

fs::path fresh_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path dir = fs::temp_directory_path() /
                 ("urdd-test-" + tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter.fetch_add(1)));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string quote(const fs::path& path) {
  std::string out = "'";
  for (char c : path.string()) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

CommandResult run_cli(const std::string& args) {
  CommandResult result;
  const std::string command = quote(cli_path()) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.output.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), root).generic_string()] = ss.str();
  }
  return files;
}

// ---------------------------------------------------------------------------
// Robot fixtures

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-3);
  return v.normalized();
}

LinkSpec box_link(const std::string& name, const Vec3& size) {
  LinkSpec link;
  link.name = name;
  GeometryRef g;
  g.shape = BoxShape{size / 2.0};
  link.collision_geometries.push_back(g);
  return link;
}

JointSpec make_joint(const std::string& name, JointType type, const std::string& parent, const std::string& child,
                     const Vec3& xyz, const Vec3& axis) {
  JointSpec j;
  j.name = name;
  j.type = type;
  j.parent_link = parent;
  j.child_link = child;
  j.origin.xyz = xyz;
  j.axis = axis;
  if (type == JointType::kRevolute) j.limits = JointLimits{-2.0, 2.0, 1.0, 10.0};
  if (type == JointType::kPrismatic) j.limits = JointLimits{-0.2, 0.2, 1.0, 10.0};
  return j;
}

bool single_dof(JointType t) {
  return t == JointType::kRevolute || t == JointType::kContinuous || t == JointType::kPrismatic;
}

}  // namespace

RobotModel random_tree(std::mt19937_64& rng, const RandomTreeOptions& options) {
  RobotModel model;
  model.name = "random_tree";
  model.root_link = "l0";
  model.links.push_back(box_link("l0", Vec3::Ones()));
  std::vector<JointType> types = {JointType::kRevolute, JointType::kContinuous, JointType::kPrismatic,
                                  JointType::kFixed};
  if (options.multi_dof) {
    types.push_back(JointType::kPlanar);
    types.push_back(JointType::kFloating);
  }
  for (int i = 1; i <= options.num_joints; ++i) {
    const std::string child = "l" + std::to_string(i);
    model.links.push_back(box_link(child, Vec3(0.2, 0.2, 0.2)));
    JointSpec j;
    j.name = "j" + std::to_string(i);
    j.type = types[std::uniform_int_distribution<std::size_t>(0, types.size() - 1)(rng)];
    j.parent_link = "l" + std::to_string(std::uniform_int_distribution<int>(0, i - 1)(rng));
    j.child_link = child;
    j.origin.xyz = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    j.origin.rpy = Vec3(uniform(rng, -kPi, kPi), uniform(rng, -1.5, 1.5), uniform(rng, -kPi, kPi));
    j.axis = random_unit(rng);
    if (j.type == JointType::kRevolute || j.type == JointType::kPrismatic) {
      const double lo = uniform(rng, -3, 0);
      j.limits = JointLimits{lo, lo + uniform(rng, 0.1, 3), 1.0, 1.0};
    }
    if (options.mimic && single_dof(j.type) && uniform(rng, 0, 1) < 0.2) {
      std::vector<std::string> sources;
      for (const auto& other : model.joints)
        if (single_dof(other.type)) sources.push_back(other.name);
      if (!sources.empty()) {
        const auto& src = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
        j.mimic = MimicSpec{src, uniform(rng, -2, 2), uniform(rng, -0.5, 0.5)};
      }
    }
    model.joints.push_back(std::move(j));
  }
  validate_model(model);
  return model;
}

RobotModel synthetic_tree(int num_links, int num_dofs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RobotModel model;
  model.name = "synthetic_" + std::to_string(num_dofs) + "dof_" + std::to_string(num_links) + "link";
  model.root_link = "base";
  model.links.push_back(box_link("base", Vec3::Ones()));
  const int num_joints = num_links - 1;
  // Pick which joints are actuated.
  std::vector<int> order(static_cast<std::size_t>(num_joints));
  for (int i = 0; i < num_joints; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<int> actuated(order.begin(), order.begin() + num_dofs);
  std::string last_actuated;
  for (int i = 0; i < num_joints; ++i) {
    const std::string child = "link" + std::to_string(i + 1);
    model.links.push_back(box_link(child, Vec3(0.1, 0.1, 0.1)));
    const std::string parent =
        i == 0 ? "base" : "link" + std::to_string(std::uniform_int_distribution<int>(0, i)(rng));
    const std::string parent_name = parent == "link0" ? "base" : parent;
    JointType type = JointType::kFixed;
    if (actuated.count(i)) {
      const JointType kinds[] = {JointType::kRevolute, JointType::kContinuous, JointType::kPrismatic};
      type = kinds[std::uniform_int_distribution<int>(0, 2)(rng)];
    }
    JointSpec j = make_joint("joint" + std::to_string(i + 1), type, parent_name, child,
                             Vec3(uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), 0.3), random_unit(rng));
    if (type == JointType::kFixed && !last_actuated.empty() && i % 3 == 0) {
      // A mimic joint follows an actuated joint without adding a DOF.
      j.type = JointType::kRevolute;
      j.limits = JointLimits{-2.0, 2.0, 1.0, 10.0};
      j.mimic = MimicSpec{last_actuated, 0.5, 0.1};
    }
    if (single_dof(type)) last_actuated = j.name;
    model.joints.push_back(std::move(j));
  }
  validate_model(model);
  return model;
}

RobotModel serial_arm(const std::string& name, int dofs) {
  RobotModel model;
  model.name = name;
  model.root_link = name + "_base";
  model.links.push_back(box_link(model.root_link, Vec3(0.2, 0.2, 0.1)));
  std::string parent = model.root_link;
  for (int i = 1; i <= dofs; ++i) {
    const std::string child = name + "_l" + std::to_string(i);
    model.links.push_back(box_link(child, Vec3(0.08, 0.08, 0.2)));
    const Vec3 axis = i % 2 ? Vec3::UnitZ() : Vec3::UnitY();
    model.joints.push_back(make_joint(name + "_j" + std::to_string(i), JointType::kRevolute, parent, child,
                                      Vec3(0, 0, 0.3), axis));
    parent = child;
  }
  validate_model(model);
  return model;
}

RobotModel gripper(const std::string& name) {
  RobotModel model;
  model.name = name;
  model.root_link = name + "_palm";
  model.links.push_back(box_link(model.root_link, Vec3(0.1, 0.2, 0.05)));
  for (const char* side : {"left", "right"}) {
    const std::string finger = name + "_" + side;
    model.links.push_back(box_link(finger, Vec3(0.02, 0.02, 0.08)));
    const double y = std::string(side) == "left" ? 0.05 : -0.05;
    model.joints.push_back(make_joint(finger + "_joint", JointType::kPrismatic, model.root_link, finger,
                                      Vec3(0, y, 0.07), Vec3::UnitY()));
  }
  validate_model(model);
  return model;
}

RobotModel quadruped(const std::string& name) {
  RobotModel model;
  model.name = name;
  model.root_link = name + "_body";
  model.links.push_back(box_link(model.root_link, Vec3(0.6, 0.3, 0.15)));
  const std::array<std::pair<const char*, Vec3>, 4> hips = {{{"fl", Vec3(0.3, 0.15, 0)},
                                                             {"fr", Vec3(0.3, -0.15, 0)},
                                                             {"rl", Vec3(-0.3, 0.15, 0)},
                                                             {"rr", Vec3(-0.3, -0.15, 0)}}};
  for (const auto& [leg, offset] : hips) {
    std::string parent = model.root_link;
    const Vec3 origins[] = {offset, Vec3(0, 0.05, 0), Vec3(0, 0, -0.2)};
    const Vec3 axes[] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitY()};
    const char* parts[] = {"hip", "thigh", "calf"};
    for (int k = 0; k < 3; ++k) {
      const std::string child = name + "_" + leg + "_" + parts[k];
      model.links.push_back(box_link(child, Vec3(0.05, 0.05, 0.2)));
      model.joints.push_back(
          make_joint(child + "_joint", JointType::kRevolute, parent, child, origins[k], axes[k]));
      parent = child;
    }
  }
  validate_model(model);
  return model;
}

namespace {

std::string vec_text(const Vec3& v) {
  std::ostringstream os;
  os << std::setprecision(17) << v.x() << " " << v.y() << " " << v.z();
  return os.str();
}

std::string origin_xml(const Pose& p) {
  return "<origin xyz=\"" + vec_text(p.xyz) + "\" rpy=\"" + vec_text(p.rpy) + "\"/>";
}

std::string shape_xml(const Shape& shape) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (const auto* b = std::get_if<BoxShape>(&shape)) {
    os << "<box size=\"" << vec_text(b->half_extents * 2.0) << "\"/>";
  } else if (const auto* s = std::get_if<SphereShape>(&shape)) {
    os << "<sphere radius=\"" << s->radius << "\"/>";
  } else if (const auto* c = std::get_if<CylinderShape>(&shape)) {
    os << "<cylinder radius=\"" << c->radius << "\" length=\"" << c->length << "\"/>";
  } else if (const auto* c2 = std::get_if<CapsuleShape>(&shape)) {
    os << "<capsule radius=\"" << c2->radius << "\" length=\"" << c2->length << "\"/>";
  } else if (const auto* m = std::get_if<MeshShape>(&shape)) {
    os << "<mesh filename=\"" << m->filename << "\" scale=\"" << vec_text(m->scale) << "\"/>";
  }
  return os.str();
}

}  // namespace

std::string to_urdf(const RobotModel& model) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "<?xml version=\"1.0\"?>\n<robot name=\"" << model.name << "\">\n";
  for (const auto& link : model.links) {
    os << "  <link name=\"" << link.name << "\">\n";
    if (link.inertial) {
      const Mat3& I = link.inertial->inertia;
      os << "    <inertial>" << origin_xml(link.inertial->origin) << "<mass value=\"" << link.inertial->mass
         << "\"/><inertia ixx=\"" << I(0, 0) << "\" ixy=\"" << I(0, 1) << "\" ixz=\"" << I(0, 2) << "\" iyy=\""
         << I(1, 1) << "\" iyz=\"" << I(1, 2) << "\" izz=\"" << I(2, 2) << "\"/></inertial>\n";
    }
    for (const auto& g : link.visual_geometries) {
      os << "    <visual>" << origin_xml(g.origin) << "<geometry>" << shape_xml(g.shape) << "</geometry></visual>\n";
    }
    for (const auto& g : link.collision_geometries) {
      os << "    <collision>" << origin_xml(g.origin) << "<geometry>" << shape_xml(g.shape)
         << "</geometry></collision>\n";
    }
    os << "  </link>\n";
  }
  for (const auto& j : model.joints) {
    os << "  <joint name=\"" << j.name << "\" type=\"" << to_string(j.type) << "\">\n";
    os << "    <parent link=\"" << j.parent_link << "\"/><child link=\"" << j.child_link << "\"/>\n";
    os << "    " << origin_xml(j.origin) << "<axis xyz=\"" << vec_text(j.axis) << "\"/>\n";
    if (j.limits) {
      os << "    <limit lower=\"" << j.limits->lower << "\" upper=\"" << j.limits->upper << "\" velocity=\""
         << j.limits->velocity << "\" effort=\"" << j.limits->effort << "\"/>\n";
    }
    if (j.mimic) {
      os << "    <mimic joint=\"" << j.mimic->source_joint << "\" multiplier=\"" << j.mimic->multiplier
         << "\" offset=\"" << j.mimic->offset << "\"/>\n";
    }
    os << "  </joint>\n";
  }
  os << "</robot>\n";
  return os.str();
}

std::vector<double> random_q(std::mt19937_64& rng, int num_dofs, double range) {
  std::vector<double> q(static_cast<std::size_t>(num_dofs));
  for (auto& v : q) v = uniform(rng, -range, range);
  return q;
}

// ---------------------------------------------------------------------------
// Kinematics oracles

int oracle_num_dofs(const RobotModel& model) {
  int n = 0;
  for (const auto& j : model.joints) {
    if (j.mimic) continue;
    switch (j.type) {
      case JointType::kFixed: break;
      case JointType::kPlanar: n += 3; break;
      case JointType::kFloating: n += 6; break;
      default: n += 1;
    }
  }
  return n;
}

namespace {

using Mat4 = Eigen::Matrix4d;

Mat4 translation4(const Vec3& t) {
  Mat4 m = Mat4::Identity();
  m(0, 3) = t.x();
  m(1, 3) = t.y();
  m(2, 3) = t.z();
  return m;
}

/// Rodrigues' formula.
Mat4 rotation4(const Vec3& axis_in, double angle) {
  const Vec3 k = axis_in.normalized();
  Mat3 K;
  K << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  const Mat3 R = Mat3::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = R;
  return m;
}

Mat4 rpy4(const Vec3& rpy) {
  return rotation4(Vec3::UnitZ(), rpy.z()) * rotation4(Vec3::UnitY(), rpy.y()) * rotation4(Vec3::UnitX(), rpy.x());
}

}  // namespace

std::map<std::string, Eigen::Matrix4d> brute_force_fk(const RobotModel& model, const std::vector<double>& q) {
  // DOF bookkeeping: non-mimic joints in document order.
  std::map<std::string, int> first_dof;
  int next = 0;
  for (const auto& j : model.joints) {
    if (j.mimic) continue;
    first_dof[j.name] = next;
    next += j.type == JointType::kFixed ? 0 : j.type == JointType::kPlanar ? 3 : j.type == JointType::kFloating ? 6 : 1;
  }
  std::function<double(const JointSpec&)> value = [&](const JointSpec& j) -> double {
    if (j.mimic) {
      const JointSpec* src = model.find_joint(j.mimic->source_joint);
      return j.mimic->multiplier * value(*src) + j.mimic->offset;
    }
    return q.at(static_cast<std::size_t>(first_dof.at(j.name)));
  };
  std::function<Mat4(const std::string&)> pose = [&](const std::string& link) -> Mat4 {
    const JointSpec* j = nullptr;
    for (const auto& cand : model.joints)
      if (cand.child_link == link) j = &cand;
    if (!j) return Mat4::Identity();
    const Mat4 origin = translation4(j->origin.xyz) * rpy4(j->origin.rpy);
    Mat4 motion = Mat4::Identity();
    switch (j->type) {
      case JointType::kRevolute:
      case JointType::kContinuous: motion = rotation4(j->axis, value(*j)); break;
      case JointType::kPrismatic: motion = translation4(j->axis.normalized() * value(*j)); break;
      case JointType::kFixed: break;
      case JointType::kPlanar: {
        const Vec3 n = j->axis.normalized();
        Vec3 u = Vec3::UnitX();
        for (int i = 0; i < 3; ++i) {
          const Vec3 e = Vec3::Unit(i);
          if (std::abs(e.dot(n)) < 1.0 - 1e-9) {
            u = (e - e.dot(n) * n).normalized();
            break;
          }
        }
        const Vec3 v = n.cross(u);
        const int d = first_dof.at(j->name);
        motion = translation4(u * q.at(d) + v * q.at(d + 1)) * rotation4(n, q.at(d + 2));
        break;
      }
      case JointType::kFloating: {
        const int d = first_dof.at(j->name);
        motion = translation4(Vec3(q.at(d), q.at(d + 1), q.at(d + 2))) * rpy4(Vec3(q.at(d + 3), q.at(d + 4), q.at(d + 5)));
        break;
      }
    }
    return pose(j->parent_link) * origin * motion;
  };
  std::map<std::string, Mat4> out;
  for (const auto& l : model.links) out[l.name] = pose(l.name);
  return out;
}

OraclePath bfs_path(const RobotModel& model, const std::string& from, const std::string& to) {
  std::map<std::string, std::pair<std::string, std::string>> came_from;  // link -> (prev link, joint)
  std::deque<std::string> queue{from};
  std::set<std::string> seen{from};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (const auto& j : model.joints) {
      std::string other;
      if (j.parent_link == cur) other = j.child_link;
      if (j.child_link == cur) other = j.parent_link;
      if (other.empty() || seen.count(other)) continue;
      seen.insert(other);
      came_from[other] = {cur, j.name};
      queue.push_back(other);
    }
  }
  OraclePath path;
  std::string cur = to;
  path.links.push_back(cur);
  while (cur != from) {
    const auto& [prev, joint] = came_from.at(cur);
    path.joints.insert(path.joints.begin(), joint);
    path.links.insert(path.links.begin(), prev);
    cur = prev;
  }
  return path;
}

// ---------------------------------------------------------------------------
// Geometry oracles

TriMesh box_mesh(const Vec3& h) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back(i & 1 ? h.x() : -h.x(), i & 2 ? h.y() : -h.y(), i & 4 ? h.z() : -h.z());
  }
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

TriMesh l_prism_mesh() {
  // L polygon in the xy plane, counter-clockwise.
  const std::array<Eigen::Vector2d, 6> poly = {Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), Eigen::Vector2d(2, 1),
                                               Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 2)};
  TriMesh m;
  for (double z : {0.0, 1.0})
    for (const auto& p : poly) m.vertices.emplace_back(p.x(), p.y(), z);
  // Caps: the L splits into triangles fanned from vertex 3 (the reflex corner).
  const std::array<std::array<int, 3>, 4> cap = {{{3, 4, 5}, {3, 5, 0}, {3, 0, 1}, {3, 1, 2}}};
  for (const auto& t : cap) {
    m.triangles.push_back({t[0], t[2], t[1]});          // bottom, facing -z
    m.triangles.push_back({t[0] + 6, t[1] + 6, t[2] + 6});  // top, facing +z
  }
  for (int i = 0; i < 6; ++i) {
    const int j = (i + 1) % 6;
    m.triangles.push_back({i, j, j + 6});
    m.triangles.push_back({i, j + 6, i + 6});
  }
  return m;
}

bool l_prism_contains(const Vec3& p) {
  if (p.z() < 0 || p.z() > 1) return false;
  const bool a = p.x() >= 0 && p.x() <= 2 && p.y() >= 0 && p.y() <= 1;
  const bool b = p.x() >= 0 && p.x() <= 1 && p.y() >= 0 && p.y() <= 2;
  return a || b;
}

double voxel_coverage(const std::vector<ConvexHull>& pieces, const std::function<bool(const Vec3&)>& solid,
                      const Vec3& lo, const Vec3& hi, int res) {
  std::vector<std::vector<std::pair<Vec3, double>>> planes;
  for (const auto& piece : pieces) {
    std::vector<std::pair<Vec3, double>> ps;
    for (const auto& t : piece.triangles) {
      const Vec3& a = piece.vertices[static_cast<std::size_t>(t[0])];
      Vec3 n = (piece.vertices[static_cast<std::size_t>(t[1])] - a).cross(piece.vertices[static_cast<std::size_t>(t[2])] - a);
      if (n.norm() == 0) continue;
      n.normalize();
      ps.emplace_back(n, n.dot(a));
    }
    planes.push_back(std::move(ps));
  }
  const Vec3 step = (hi - lo) / res;
  long solid_count = 0, covered = 0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j)
      for (int k = 0; k < res; ++k) {
        const Vec3 c = lo + Vec3((i + 0.5) * step.x(), (j + 0.5) * step.y(), (k + 0.5) * step.z());
        if (!solid(c)) continue;
        ++solid_count;
        for (const auto& ps : planes) {
          bool inside = true;
          for (const auto& [n, d] : ps) {
            if (n.dot(c) > d + 1e-9) {
              inside = false;
              break;
            }
          }
          if (inside) {
            ++covered;
            break;
          }
        }
      }
  return solid_count ? static_cast<double>(covered) / static_cast<double>(solid_count) : 1.0;
}

double brute_force_min_sphere_radius(const std::vector<Vec3>& pts) {
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec3& c, double r) {
    if (r >= best) return;
    for (const auto& p : pts)
      if ((p - c).norm() > r + 1e-9) return;
    best = r;
  };
  const std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      consider((pts[a] + pts[b]) / 2, (pts[a] - pts[b]).norm() / 2);
      for (std::size_t c = b + 1; c < n; ++c) {
        // Circumcenter of a triangle.
        const Vec3 ab = pts[b] - pts[a], ac = pts[c] - pts[a];
        const Vec3 w = ab.cross(ac);
        if (w.squaredNorm() > 1e-18) {
          const Vec3 center =
              pts[a] + (ac.squaredNorm() * w.cross(ab) + ab.squaredNorm() * ac.cross(w)) / (2 * w.squaredNorm());
          consider(center, (center - pts[a]).norm());
        }
        for (std::size_t d = c + 1; d < n; ++d) {
          Mat3 A;
          Vec3 rhs;
          const Vec3* others[] = {&pts[b], &pts[c], &pts[d]};
          for (int r = 0; r < 3; ++r) {
            A.row(r) = 2 * (*others[r] - pts[a]).transpose();
            rhs(r) = others[r]->squaredNorm() - pts[a].squaredNorm();
          }
          if (std::abs(A.determinant()) < 1e-12) continue;
          const Vec3 center = A.colPivHouseholderQr().solve(rhs);
          consider(center, (center - pts[a]).norm());
        }
      }
    }
  return best;
}

bool sat_boxes_overlap(const Transform& pa, const Vec3& ha, const Transform& pb, const Vec3& hb) {
  std::vector<Vec3> axes;
  for (int i = 0; i < 3; ++i) {
    axes.push_back(pa.rotation.col(i));
    axes.push_back(pb.rotation.col(i));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Vec3 c = pa.rotation.col(i).cross(pb.rotation.col(j));
      if (c.norm() > 1e-9) axes.push_back(c.normalized());
    }
  const Vec3 d = pb.translation - pa.translation;
  for (const auto& axis : axes) {
    double ra = 0, rb = 0;
    for (int i = 0; i < 3; ++i) {
      ra += ha(i) * std::abs(pa.rotation.col(i).dot(axis));
      rb += hb(i) * std::abs(pb.rotation.col(i).dot(axis));
    }
    if (std::abs(d.dot(axis)) > ra + rb) return false;
  }
  return true;
}

Transform random_pose(std::mt19937_64& rng, double range) {
  Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  if (q.norm() < 1e-6) q = Eigen::Quaterniond::Identity();
  q.normalize();
  return {q.toRotationMatrix(), Vec3(uniform(rng, -range, range), uniform(rng, -range, range),
                                     uniform(rng, -range, range))};
}

double max_outside_hull(const ConvexHull& hull, const std::vector<Vec3>& points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double outside = -std::numeric_limits<double>::infinity();
    for (const auto& t : hull.triangles) {
      const Vec3& a = hull.vertices[static_cast<std::size_t>(t[0])];
      Vec3 n = (hull.vertices[static_cast<std::size_t>(t[1])] - a).cross(hull.vertices[static_cast<std::size_t>(t[2])] - a);
      if (n.norm() == 0) continue;
      outside = std::max(outside, n.normalized().dot(p - a));
    }
    worst = std::max(worst, outside);
  }
  return worst;
}

}  // namespace urdd::testing
