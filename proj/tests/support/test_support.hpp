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

// Fixture generators and independent oracles shared by the test suites.
// Nothing here calls the code under test to compute expected values.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "urdd/bounding.hpp"
#include "urdd/hull.hpp"
#include "urdd/mesh.hpp"
#include "urdd/model.hpp"

namespace urdd::testing {

namespace fs = std::filesystem;

/// Source fixture directory (tests/fixtures).
fs::path fixture_dir();
/// Path of the built command-line tool.
fs::path cli_path();
/// Fresh, empty directory under the system temp dir.
fs::path fresh_temp_dir(const std::string& tag);

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};
/// Runs the CLI with the given shell-quoted arguments.
CommandResult run_cli(const std::string& args);
std::string quote(const fs::path& path);

/// Byte-level snapshot of every regular file under `root`, keyed by
/// relative path.
std::map<std::string, std::string> snapshot(const fs::path& root);

// ---------------------------------------------------------------------------
// Robot fixtures

struct RandomTreeOptions {
  int num_joints = 10;
  bool multi_dof = true;  // allow planar and floating joints
  bool mimic = true;      // allow mimic joints (sources always earlier)
};

/// Random tree with links "l0".."lN" in document order; joint parents are
/// uniformly chosen earlier links. Every link gets a unit-box collision.
RobotModel random_tree(std::mt19937_64& rng, const RandomTreeOptions& options);

/// Tree with exactly `num_links` links and `num_dofs` DOFs built from
/// revolute, continuous and prismatic joints; remaining joints are fixed or
/// mimic joints (which add no DOF).
RobotModel synthetic_tree(int num_links, int num_dofs, std::uint64_t seed);

/// Serial chain "<name>_base" -> "<name>_l1" ... of revolute joints along z
/// with 0.3 m offsets; boxes as collision geometry.
RobotModel serial_arm(const std::string& name, int dofs);

/// Gripper with a palm and two prismatic fingers (2 DOF).
RobotModel gripper(const std::string& name);

/// Quadruped body with four 3-DOF legs (12 DOF).
RobotModel quadruped(const std::string& name);

/// Writes a model as URDF XML (boxes, spheres, cylinders, capsules, meshes).
std::string to_urdf(const RobotModel& model);

/// Random configuration for a model with `num_dofs` DOFs.
std::vector<double> random_q(std::mt19937_64& rng, int num_dofs, double range = 3.0);

// ---------------------------------------------------------------------------
// Kinematics oracles

/// DOF count by direct counting over joints.
int oracle_num_dofs(const RobotModel& model);

/// Pose of every link by recursive 4x4 matrix composition from the joint
/// specifications (own rotation formulas, own DOF bookkeeping).
std::map<std::string, Eigen::Matrix4d> brute_force_fk(const RobotModel& model, const std::vector<double>& q);

struct OraclePath {
  std::vector<std::string> joints;
  std::vector<std::string> links;
};
/// Breadth-first search over the undirected joint graph.
OraclePath bfs_path(const RobotModel& model, const std::string& from, const std::string& to);

// ---------------------------------------------------------------------------
// Geometry oracles

TriMesh box_mesh(const Vec3& half_extents);
/// L-shaped prism: [0,2]x[0,1]x[0,1] united with [0,1]x[1,2]x[0,1].
TriMesh l_prism_mesh();
bool l_prism_contains(const Vec3& p);

/// Fraction of solid voxel centers (res^3 grid over [lo, hi]) that lie in
/// the union of the pieces.
double voxel_coverage(const std::vector<ConvexHull>& pieces, const std::function<bool(const Vec3&)>& solid,
                      const Vec3& lo, const Vec3& hi, int res);

/// Brute-force minimal enclosing sphere radius over all 2/3/4-point
/// supports (small point sets only).
double brute_force_min_sphere_radius(const std::vector<Vec3>& points);

/// Separating-axis overlap test for two posed boxes (touching counts as
/// overlap).
bool sat_boxes_overlap(const Transform& pose_a, const Vec3& half_a, const Transform& pose_b, const Vec3& half_b);

/// Random rigid transform with translation in [-range, range]^3.
Transform random_pose(std::mt19937_64& rng, double range);

/// Max over points of the signed distance outside a convex hull (<= 0 when
/// every point is inside).
double max_outside_hull(const ConvexHull& hull, const std::vector<Vec3>& points);

}  // namespace urdd::testing
