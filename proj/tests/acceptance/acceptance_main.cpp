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

// Acceptance runner: prints one PASS/FAIL line per acceptance criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "urdd/decomposition.hpp"
#include "urdd/distance.hpp"
#include "urdd/error.hpp"
#include "urdd/fk.hpp"
#include "urdd/kinematics.hpp"
#include "urdd/pipeline.hpp"

namespace {

namespace t = urdd::testing;
namespace fs = std::filesystem;
using urdd::Json;
using urdd::Transform;
using urdd::Vec3;

/// Collects the reasons a criterion failed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ |= !ok;
  }
  bool ok() const { return !failed_; }
  std::string detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

std::string fmt(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

double pose_error(const Transform& a, const Transform& b) {
  return std::max((a.translation - b.translation).cwiseAbs().maxCoeff(),
                  (a.rotation - b.rotation).cwiseAbs().maxCoeff());
}

double pose_error(const Transform& a, const Eigen::Matrix4d& m) {
  Transform b;
  b.rotation = m.topLeftCorner<3, 3>();
  b.translation = m.topRightCorner<3, 1>();
  return pose_error(a, b);
}

urdd::UrddHandle in_memory(const urdd::RobotModel& model) {
  urdd::Manifest manifest;
  manifest.robot_name = model.name;
  return urdd::UrddHandle::from_memory(
      manifest, {{std::string(urdd::kUrdfModule), urdd::model_to_json(model)},
                 {std::string(urdd::kDofModule), urdd::dof_map_to_json(urdd::derive_dof_map(model))},
                 {std::string(urdd::kChainModule), urdd::chain_to_json(model, urdd::derive_chain(model))}});
}

urdd::ConvertOptions quick(int samples = 100) {
  urdd::ConvertOptions options;
  options.epoch = 0;
  options.proximity.samples = samples;
  return options;
}

// ---------------------------------------------------------------------------

void dof_counts(Check& c) {
  const std::vector<std::pair<int, int>> inventory = {{6, 11}, {7, 10}, {12, 35}, {17, 55}, {19, 25}};
  for (const auto& [dofs, links] : inventory) {
    const auto model = t::synthetic_tree(links, dofs, 17);
    const int got_dofs = urdd::derive_dof_map(model).num_dofs;
    const auto chain = urdd::derive_chain(model);
    c.expect(got_dofs == dofs, std::to_string(dofs) + "-DOF fixture gave " + std::to_string(got_dofs));
    c.expect(static_cast<int>(chain.size()) == links,
             std::to_string(links) + "-link fixture chain has " + std::to_string(chain.size()) + " nodes");
  }
}

void fk_oracle(Check& c) {
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  int cases = 0;
  for (int tree = 0; tree < 100; ++tree) {
    const auto model = t::random_tree(rng, {1 + static_cast<int>(rng() % 20), true, true});
    const auto fk_model = urdd::FkModel::from_urdd(in_memory(model));
    for (int k = 0; k < 10; ++k, ++cases) {
      const auto q = t::random_q(rng, t::oracle_num_dofs(model));
      const auto result = fk_model.compute(q);
      for (const auto& [link, m] : t::brute_force_fk(model, q)) worst = std::max(worst, pose_error(result.at(link), m));
    }
  }
  c.expect(cases == 1000, "ran " + std::to_string(cases) + " cases");
  c.expect(worst <= 1e-9, "max element error " + fmt(worst));

  const auto planar2 = urdd::UrddHandle::load(t::fixture_dir() / "planar2_urdd");
  const std::vector<double> zero = {0.0, 0.0};
  const auto at_zero = urdd::fk(planar2, zero);
  c.expect(pose_error(at_zero.at("link2"), Transform{urdd::Mat3::Identity(), Vec3(1, 0, 0)}) <= 1e-12,
           "planar2 link2 at q=0");
  c.expect(pose_error(at_zero.at("ee_link"), Transform{urdd::Mat3::Identity(), Vec3(2, 0, 0)}) <= 1e-12,
           "planar2 ee_link at q=0");
  const std::vector<double> quarter = {urdd::kPi / 2, 0.0};
  const auto turned = urdd::fk(planar2, quarter);
  const urdd::Mat3 rz = urdd::axis_angle(Vec3::UnitZ(), urdd::kPi / 2);
  c.expect(pose_error(turned.at("link2"), Transform{rz, Vec3(0, 1, 0)}) <= 1e-9, "planar2 link2 at q=(pi/2,0)");
  c.expect(pose_error(turned.at("ee_link"), Transform{rz, Vec3(0, 2, 0)}) <= 1e-9, "planar2 ee_link at q=(pi/2,0)");
}

void fk_isolation(Check& c) {
  const std::string command = std::string("\"") + URDD_CMAKE_COMMAND + "\" -DSOURCE_DIR=\"" + URDD_SOURCE_DIR +
                              "\" -DBINARY_DIR=\"" + URDD_FK_ONLY_DIR + "\" -DCTEST_COMMAND=\"" +
                              URDD_CTEST_COMMAND + "\" -P \"" + URDD_FK_ONLY_SCRIPT + "\" > \"" + URDD_FK_ONLY_DIR +
                              ".log\" 2>&1";
  const int rc = std::system(command.c_str());
  c.expect(rc == 0, std::string("FK-only build or suite failed, see ") + URDD_FK_ONLY_DIR + ".log");
}

void connections_oracle(Check& c) {
  std::mt19937_64 rng(21);
  for (int joints : {1, 4, 9, 20, 35, 59}) {
    const auto model = t::random_tree(rng, {joints, true, true});
    const auto paths = urdd::derive_connections(model);
    const std::size_t n = model.links.size();
    c.expect(paths.size() == n * n, "expected " + std::to_string(n * n) + " paths, got " + std::to_string(paths.size()));
    for (const auto& p : paths) {
      const auto oracle = t::bfs_path(model, p.from_link, p.to_link);
      c.expect(p.joint_sequence == oracle.joints && p.link_sequence == oracle.links,
               "path " + p.from_link + " -> " + p.to_link + " differs from BFS");
    }
  }
}

void geometry_properties(Check& c) {
  const Vec3 half(0.5, 0.5, 0.5);
  std::vector<urdd::TriMesh> meshes = {t::box_mesh(half), t::box_mesh(Vec3(0.3, 1.2, 0.05)), t::l_prism_mesh(),
                                       urdd::tessellate(urdd::CylinderShape{0.2, 1.0}),
                                       urdd::tessellate(urdd::CapsuleShape{0.1, 0.5})};
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    std::vector<Vec3> pts;
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) pts.emplace_back(u(rng), 0.3 * u(rng), 0.7 * u(rng));
    meshes.push_back(urdd::transform_mesh(urdd::convex_hull(pts).as_mesh(), t::random_pose(rng, 2.0)));
  }
  double worst = -1.0;
  for (const auto& mesh : meshes) {
    const auto hull = urdd::convex_hull(mesh);
    worst = std::max(worst, t::max_outside_hull(hull, mesh.vertices));
    const auto obb = urdd::oriented_bounding_box(mesh);
    const auto sphere = urdd::bounding_sphere(mesh.vertices);
    for (const auto& v : hull.vertices) {
      worst = std::max(worst, obb.excess(v));
      worst = std::max(worst, (v - sphere.center).norm() - sphere.radius);
    }
  }
  c.expect(worst <= 1e-7, "containment chain violated by " + fmt(worst));

  const auto cube = t::box_mesh(half);
  const double radius = urdd::bounding_sphere(cube.vertices).radius;
  c.expect(std::abs(radius - std::sqrt(3.0) / 2.0) <= 1e-9, "cube sphere radius " + fmt(radius));
  const auto obb = urdd::oriented_bounding_box(cube);
  c.expect((obb.half_extents - half).cwiseAbs().maxCoeff() <= 1e-12, "cube OBB half-extents off");

  const auto dec = urdd::convex_decomposition(t::l_prism_mesh());
  const double coverage = t::voxel_coverage(dec.pieces, t::l_prism_contains, Vec3(0, 0, 0), Vec3(2, 2, 1), 128);
  c.expect(coverage >= 0.95, "L-prism voxel coverage " + fmt(coverage));
  c.expect(dec.pieces.size() >= 2, "L-prism split into " + std::to_string(dec.pieces.size()) + " piece(s)");
}

const std::string kSlider =
    "<robot name=\"slider\">"
    "<link name=\"a\"><collision><geometry><box size=\"1 1 1\"/></geometry></collision></link>"
    "<link name=\"b\"><collision><geometry><box size=\"1 1 1\"/></geometry></collision></link>"
    "<link name=\"c\"><collision><geometry><box size=\"1 1 1\"/></geometry></collision></link>"
    "<link name=\"e\"><collision><geometry><box size=\"1 1 1\"/></geometry></collision></link>"
    "<link name=\"d\"/>"
    "<joint name=\"slide\" type=\"prismatic\"><parent link=\"a\"/><child link=\"b\"/><axis xyz=\"1 0 0\"/>"
    "<limit lower=\"2\" upper=\"3\" effort=\"1\" velocity=\"1\"/></joint>"
    "<joint name=\"fc\" type=\"fixed\"><parent link=\"a\"/><child link=\"c\"/><origin xyz=\"0 3 0\"/></joint>"
    "<joint name=\"fe\" type=\"fixed\"><parent link=\"c\"/><child link=\"e\"/><origin xyz=\"0 -2.5 0\"/></joint>"
    "<joint name=\"fd\" type=\"fixed\"><parent link=\"a\"/><child link=\"d\"/></joint>"
    "</robot>";

void proximity(Check& c) {
  const fs::path out = t::fresh_temp_dir("acc-proximity") / "slider";
  urdd::ConvertOptions options = quick(2000);
  urdd::convert_model(urdd::parse_urdf(kSlider, "."), out, options);
  const auto handle = urdd::UrddHandle::load(out);
  const auto stats = urdd::distance_stats_from_json(handle.module(urdd::kDistanceStatsModule));
  const auto* ab = stats.find("a", "b");
  c.expect(ab != nullptr, "prismatic pair missing");
  if (ab) {
    c.expect(std::abs(ab->min - 1.0) <= 0.05, "min " + fmt(ab->min));
    c.expect(std::abs(ab->max - 2.0) <= 0.05, "max " + fmt(ab->max));
    c.expect(std::abs(ab->mean - 1.5) <= 0.05, "mean " + fmt(ab->mean));
  }

  // Skip matrices: symmetry, diagonal, and a reason for every skipped pair.
  const auto& matrices = handle.module(urdd::kSkipsModule).at("matrices");
  std::set<std::string> reasons_seen;
  for (auto it = matrices.begin(); it != matrices.end(); ++it) {
    const auto& skips = it.value().at("skips");
    std::set<std::pair<std::string, std::string>> with_reason;
    for (const auto& r : it.value().at("reasons")) {
      with_reason.insert({r.at("link_a").get<std::string>(), r.at("link_b").get<std::string>()});
      reasons_seen.insert(r.at("reason").get<std::string>());
    }
    const auto links = handle.module(urdd::kSkipsModule).at("links").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < skips.size(); ++i) {
      c.expect(skips[i][i].get<bool>(), it.key() + " diagonal entry false");
      for (std::size_t j = 0; j < skips.size(); ++j) {
        c.expect(skips[i][j] == skips[j][i], it.key() + " matrix not symmetric");
        if (i == j || !skips[i][j].get<bool>()) continue;
        c.expect(with_reason.count({links[i], links[j]}) || with_reason.count({links[j], links[i]}),
                 it.key() + " skipped pair without reason");
      }
    }
  }
  for (const char* reason : {"adjacent", "always_colliding", "no_geometry"})
    c.expect(reasons_seen.count(reason) > 0, std::string("reason never produced: ") + reason);
  const auto overrides = urdd::parse_overrides(Json::parse(R"([{"link_a": "c", "link_b": "b", "skip": true}])"));
  const Json updated = urdd::apply_overrides(handle.module(urdd::kSkipsModule), handle.module(urdd::kChainModule),
                                             overrides);
  bool user = false;
  for (const auto& r : updated.at("matrices").at("hull").at("reasons")) user |= r.at("reason") == "user_specified";
  c.expect(user, "reason never produced: user_specified");

  // Zero distance exactly when the separating-axis oracle reports overlap.
  const Vec3 half(0.5, 0.5, 0.5);
  const auto cube = urdd::convex_hull(t::box_mesh(half));
  std::mt19937_64 rng(500);
  int disagreements = 0;
  for (int i = 0; i < 500; ++i) {
    const auto pa = t::random_pose(rng, 0.9);
    const auto pb = t::random_pose(rng, 0.9);
    disagreements += (urdd::convex_distance(cube, pa, cube, pb) == 0.0) != t::sat_boxes_overlap(pa, half, pb, half);
  }
  c.expect(disagreements == 0, std::to_string(disagreements) + " of 500 poses disagree with SAT");
}

void determinism(Check& c) {
  const fs::path root = t::fresh_temp_dir("acc-determinism");
  const std::string urdf = t::quote(t::fixture_dir() / "planar2.urdf");
  for (const char* name : {"one", "two"}) {
    const auto r = t::run_cli("convert --urdf " + urdf + " --out " + t::quote(root / name) + " --epoch 0");
    c.expect(r.exit_code == 0, std::string("convert ") + name + " exited " + std::to_string(r.exit_code));
  }
  c.expect(t::snapshot(root / "one") == t::snapshot(root / "two"), "runs are not byte-identical");

  fs::create_directories(root / "moved" / "deeper");
  fs::rename(root / "two", root / "moved" / "deeper" / "planar2_urdd");
  const fs::path moved = root / "moved" / "deeper" / "planar2_urdd";
  c.expect(urdd::validate_urdd(root / "one").empty() && urdd::validate_urdd(moved).empty(),
           "validate differs after relocation");
  const auto a = urdd::UrddHandle::load(root / "one", true);
  const auto b = urdd::UrddHandle::load(moved, true);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto q = t::random_q(rng, 2);
    const auto fa = urdd::fk(a, q);
    const auto fb = urdd::fk(b, q);
    for (std::size_t k = 0; k < fa.poses.size(); ++k)
      c.expect(pose_error(fa.poses[k], fb.poses[k]) == 0.0, "fk differs after relocation");
  }
}

void composition(Check& c) {
  const fs::path root = t::fresh_temp_dir("acc-compose");
  auto convert = [&](const urdd::RobotModel& m) {
    urdd::convert_model(m, root / m.name, quick(50));
    return urdd::UrddHandle::load(root / m.name);
  };
  auto joint = [](const std::string& child, urdd::JointType type) {
    urdd::JointSpec j;
    j.name = "attach";
    j.type = type;
    j.child_link = child;
    j.origin.xyz = Vec3(0.05, -0.1, 0.2);
    j.origin.rpy = Vec3(0.1, 0.2, -0.3);
    return j;
  };
  struct Case {
    urdd::RobotModel parent, child;
    std::string attach;
    urdd::JointType type;
    int expected_dofs;
  };
  const std::vector<Case> cases = {
      {t::serial_arm("arm", 7), t::gripper("grip"), "arm_l7", urdd::JointType::kFixed, 9},
      {t::quadruped("quad"), t::serial_arm("arm6", 6), "quad_body", urdd::JointType::kFloating, 24}};
  std::mt19937_64 rng(3);
  for (const auto& k : cases) {
    const auto parent = convert(k.parent);
    const auto child = convert(k.child);
    urdd::AttachSpec spec{k.attach, joint(k.child.name + "/" + k.child.root_link, k.type), k.parent.name + "/",
                          k.child.name + "/"};
    const fs::path out = root / (k.parent.name + "+" + k.child.name);
    urdd::combine_urdds(parent, child, spec, out, quick(50));
    const auto findings = urdd::validate_urdd(out);
    c.expect(findings.empty(), out.filename().string() + " has validate findings");
    const auto composite = urdd::UrddHandle::load(out, true);
    const int dofs = composite.module(urdd::kDofModule).at("num_dofs");
    c.expect(dofs == k.expected_dofs, out.filename().string() + " has " + std::to_string(dofs) + " DOFs");

    const int np = t::oracle_num_dofs(k.parent);
    const int nc = t::oracle_num_dofs(k.child);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const auto qp = t::random_q(rng, np, 1.0);
      const auto qc = t::random_q(rng, nc, 0.04);
      std::vector<double> q = qp;
      q.insert(q.end(), static_cast<std::size_t>(k.expected_dofs - np - nc), 0.0);
      q.insert(q.end(), qc.begin(), qc.end());
      const auto comp = urdd::fk(composite, q);
      const Transform attach = urdd::fk_link(parent, qp, k.attach) * spec.joint.origin.transform();
      const auto child_fk = urdd::fk(child, qc);
      for (const auto& link : k.child.links)
        worst = std::max(worst, pose_error(comp.at(spec.child_prefix + link.name), attach * child_fk.at(link.name)));
    }
    c.expect(worst <= 1e-9, out.filename().string() + " FK consistency error " + fmt(worst));
  }
}

/// Closed, non-convex "bumpy sphere" with roughly 10k triangles.
std::string bumpy_obj(int stacks, int slices) {
  std::ostringstream os;
  os.precision(10);
  os << "v 0 0 0.1\n";
  for (int i = 1; i < stacks; ++i) {
    const double theta = urdd::kPi * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double phi = 2 * urdd::kPi * j / slices;
      const double r = 0.1 * (1.0 + 0.2 * std::sin(5 * theta) * std::sin(5 * phi));
      os << "v " << r * std::sin(theta) * std::cos(phi) << ' ' << r * std::sin(theta) * std::sin(phi) << ' '
         << r * std::cos(theta) << '\n';
    }
  }
  os << "v 0 0 -0.1\n";
  auto ring = [&](int i, int j) { return 2 + (i - 1) * slices + (j % slices); };  // 1-based
  const int bottom = 2 + (stacks - 1) * slices;
  for (int j = 0; j < slices; ++j) os << "f 1 " << ring(1, j) << ' ' << ring(1, j + 1) << '\n';
  for (int i = 1; i + 1 < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      os << "f " << ring(i, j) << ' ' << ring(i + 1, j) << ' ' << ring(i + 1, j + 1) << '\n';
      os << "f " << ring(i, j) << ' ' << ring(i + 1, j + 1) << ' ' << ring(i, j + 1) << '\n';
    }
  }
  for (int j = 0; j < slices; ++j) os << "f " << bottom << ' ' << ring(stacks - 1, j + 1) << ' ' << ring(stacks - 1, j) << '\n';
  return os.str();
}

void conversion_timing(Check& c) {
  const fs::path root = t::fresh_temp_dir("acc-timing");
  const int stacks = 50, slices = 100;
  urdd::write_file(root / "meshes" / "bumpy.obj", bumpy_obj(stacks, slices));
  const int triangles = 2 * slices * (stacks - 1);
  std::ostringstream urdf;
  urdf << "<robot name=\"timing35\">\n";
  for (int i = 0; i < 35; ++i) {
    const std::string scale = "1 1 " + fmt(1.0 + 0.01 * i);
    urdf << "<link name=\"l" << i << "\"><visual><geometry><mesh filename=\"meshes/bumpy.obj\" scale=\"" << scale
         << "\"/></geometry></visual><collision><geometry><mesh filename=\"meshes/bumpy.obj\" scale=\"" << scale
         << "\"/></geometry></collision></link>\n";
  }
  for (int i = 1; i < 35; ++i) {
    // A branching tree: each link hangs off one of the previous few.
    const int parent = i < 4 ? i - 1 : i - 1 - (i % 3);
    urdf << "<joint name=\"j" << i << "\" type=\"revolute\"><parent link=\"l" << parent << "\"/><child link=\"l" << i
         << "\"/><origin xyz=\"0 " << 0.05 * (i % 3) << " 0.25\"/><axis xyz=\"" << (i % 2) << " " << (1 - i % 2)
         << " 0\"/><limit lower=\"-1.5\" upper=\"1.5\" effort=\"1\" velocity=\"1\"/></joint>\n";
  }
  urdf << "</robot>\n";
  urdd::write_file(root / "timing35.urdf", urdf.str());

  const auto start = std::chrono::steady_clock::now();
  const auto r = t::run_cli("convert --urdf " + t::quote(root / "timing35.urdf") + " --out " +
                            t::quote(root / "out") + " --samples 1000");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.exit_code == 0, "convert exited " + std::to_string(r.exit_code) + ": " + r.output.substr(0, 300));
  c.expect(seconds < 120.0, "took " + fmt(seconds) + " s");
  std::printf("      35 links x %d triangles, n = 1000: %.1f s\n", triangles, seconds);
}

void size_accounting(Check& c) {
  const fs::path root = t::fresh_temp_dir("acc-sizes");
  std::vector<fs::path> urdfs = {t::fixture_dir() / "planar2.urdf"};
  for (const auto& m : {t::serial_arm("arm", 7), t::gripper("grip"), t::quadruped("quad"),
                        t::synthetic_tree(25, 19, 17)}) {
    urdfs.push_back(root / (m.name + ".urdf"));
    urdd::write_file(urdfs.back(), t::to_urdf(m));
  }
  for (const auto& urdf : urdfs) {
    const fs::path out = root / (urdf.stem().string() + "_urdd");
    const auto conv = t::run_cli("convert --urdf " + t::quote(urdf) + " --out " + t::quote(out) + " --samples 100");
    c.expect(conv.exit_code == 0, "convert failed for " + urdf.filename().string());
    const auto info = t::run_cli("info --json " + t::quote(out));
    c.expect(info.exit_code == 0, "info failed for " + urdf.filename().string());
    if (info.exit_code != 0) continue;
    const Json doc = Json::parse(info.output);
    const auto without = doc.at("bytes_without_meshes").get<std::uintmax_t>();
    const auto with = doc.at("bytes_total").get<std::uintmax_t>();
    c.expect(without > fs::file_size(urdf), urdf.filename().string() + ": without-meshes not larger than URDF");
    c.expect(with > without, urdf.filename().string() + ": with-meshes not larger than without");
  }
}

struct Criterion {
  const char* name;
  double budget_seconds;  // 0: no time budget
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"DOF-count reproduction", 1.0, dof_counts},
      {"FK oracle suite", 10.0, fk_oracle},
      {"FK isolation", 0.0, fk_isolation},
      {"Connections oracle", 5.0, connections_oracle},
      {"Geometry property suite", 60.0, geometry_properties},
      {"Proximity suite", 60.0, proximity},
      {"Determinism & portability", 30.0, determinism},
      {"Composition", 60.0, composition},
      {"Conversion timing", 0.0, conversion_timing},
      {"Size accounting", 0.0, size_accounting},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0)
      check.expect(seconds < criterion.budget_seconds, "over the " + fmt(criterion.budget_seconds) + " s budget");
    std::printf("%s  %-28s %8.2f s%s%s\n", check.ok() ? "PASS" : "FAIL", criterion.name, seconds,
                check.ok() ? "" : "  ", check.detail().c_str());
    std::fflush(stdout);
    failed += !check.ok();
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
