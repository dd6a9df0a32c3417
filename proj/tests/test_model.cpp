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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <regex>

#include "test_support.hpp"
#include "urdd/error.hpp"
#include "urdd/model.hpp"

namespace {

namespace t = urdd::testing;
namespace fs = std::filesystem;
using urdd::ErrorCode;

std::string robot(const std::string& body) { return "<robot name=\"r\">" + body + "</robot>"; }

const char* kTwoLinks =
    "<link name=\"a\"/><link name=\"b\"/>"
    "<joint name=\"j\" type=\"revolute\"><parent link=\"a\"/><child link=\"b\"/>"
    "<axis xyz=\"0 0 1\"/><limit lower=\"-1\" upper=\"1\" effort=\"1\" velocity=\"1\"/></joint>";

/// Structural comparison with a numeric tolerance.
bool json_near(const urdd::Json& a, const urdd::Json& b, double tol = 1e-12) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= tol;
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_near(a[i], b[i], tol)) return false;
    return true;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !json_near(it.value(), b[it.key()], tol)) return false;
    return true;
  }
  return a == b;
}

ErrorCode parse_error(const std::string& xml, bool check_assets = false) {
  try {
    urdd::parse_urdf(xml, fs::temp_directory_path(), urdd::ParseOptions{check_assets});
  } catch (const urdd::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << xml;
  return ErrorCode::kIoFailure;
}

TEST(Parser, Planar2MatchesIndependentXmlWalk) {
  const fs::path path = t::fixture_dir() / "planar2.urdf";
  const std::string xml = urdd::read_file(path);
  const auto model = urdd::parse_urdf_file(path);

  // Independent walk: regex over the raw text.
  std::vector<std::string> links, joints;
  const std::regex link_re("<link name=\"([^\"]+)\"");
  const std::regex joint_re("<joint name=\"([^\"]+)\"");
  for (std::sregex_iterator it(xml.begin(), xml.end(), link_re), end; it != end; ++it) links.push_back((*it)[1]);
  for (std::sregex_iterator it(xml.begin(), xml.end(), joint_re), end; it != end; ++it) joints.push_back((*it)[1]);

  ASSERT_EQ(model.links.size(), links.size());
  ASSERT_EQ(model.joints.size(), joints.size());
  for (std::size_t i = 0; i < links.size(); ++i) EXPECT_EQ(model.links[i].name, links[i]);
  for (std::size_t i = 0; i < joints.size(); ++i) EXPECT_EQ(model.joints[i].name, joints[i]);
  EXPECT_EQ(model.links.size(), 4u);
  EXPECT_EQ(model.joints.size(), 3u);
  EXPECT_EQ(model.root_link, "base_link");
  EXPECT_EQ(model.find_joint("j2")->origin.xyz, urdd::Vec3(1, 0, 0));
  EXPECT_EQ(model.find_joint("ee")->type, urdd::JointType::kFixed);
}

TEST(Parser, ErrorClasses) {
  EXPECT_EQ(parse_error("<robot name=\"r\"><link name=\"a\">"), ErrorCode::kMalformedXml);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"a\"/>")), ErrorCode::kDuplicateName);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><joint name=\"j\" type=\"fixed\"><parent link=\"a\"/>"
                              "<child link=\"zz\"/></joint>")),
            ErrorCode::kDanglingLinkReference);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"b\"/><link name=\"c\"/>"
                              "<joint name=\"j1\" type=\"fixed\"><parent link=\"a\"/><child link=\"c\"/></joint>"
                              "<joint name=\"j2\" type=\"fixed\"><parent link=\"b\"/><child link=\"c\"/></joint>")),
            ErrorCode::kKinematicLoop);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"b\"/>")), ErrorCode::kMultipleRoots);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"b\"/>"
                              "<joint name=\"j\" type=\"revolute\"><parent link=\"a\"/><child link=\"b\"/></joint>")),
            ErrorCode::kInvalidJoint);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"b\"/>"
                              "<joint name=\"j\" type=\"revolute\"><parent link=\"a\"/><child link=\"b\"/>"
                              "<limit lower=\"1\" upper=\"-1\" effort=\"1\" velocity=\"1\"/></joint>")),
            ErrorCode::kInvertedLimits);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"><collision><geometry><sphere radius=\"-1\"/></geometry></collision>"
                              "</link>")),
            ErrorCode::kInvalidGeometry);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"><collision><geometry><mesh filename=\"no/such.stl\"/></geometry>"
                              "</collision></link>"),
                        true),
            ErrorCode::kMissingMeshFile);
  EXPECT_EQ(parse_error(robot("<link name=\"a\"/><link name=\"b\"/>"
                              "<joint name=\"j\" type=\"bogus\"><parent link=\"a\"/><child link=\"b\"/></joint>")),
            ErrorCode::kInvalidJoint);
}

TEST(Parser, MimicValidation) {
  const std::string base = std::string(kTwoLinks) +
                           "<link name=\"c\"/><link name=\"d\"/>"
                           "<joint name=\"m1\" type=\"revolute\"><parent link=\"b\"/><child link=\"c\"/>"
                           "<limit lower=\"-1\" upper=\"1\" effort=\"1\" velocity=\"1\"/>";
  const std::string tail =
      "<joint name=\"m2\" type=\"revolute\"><parent link=\"c\"/><child link=\"d\"/>"
      "<limit lower=\"-1\" upper=\"1\" effort=\"1\" velocity=\"1\"/><mimic joint=\"m1\"/></joint>";
  EXPECT_EQ(parse_error(robot(base + "<mimic joint=\"m2\"/></joint>" + tail)), ErrorCode::kMimicCycle);
  EXPECT_EQ(parse_error(robot(base + "<mimic joint=\"nope\"/></joint>" + tail)), ErrorCode::kInvalidMimic);
  const auto ok = urdd::parse_urdf(robot(base + "<mimic joint=\"j\" multiplier=\"-1\"/></joint>" + tail), ".");
  ASSERT_TRUE(ok.find_joint("m1")->mimic);
  EXPECT_EQ(ok.find_joint("m1")->mimic->multiplier, -1.0);
}

TEST(Parser, UnknownElementsArePreserved) {
  const std::string xml = robot(std::string(kTwoLinks) + "<gazebo reference=\"a\"><material>Gray</material></gazebo>");
  const auto model = urdd::parse_urdf(xml, ".");
  ASSERT_EQ(model.passthrough.elements.size(), 1u);
  EXPECT_NE(model.passthrough.elements[0].find("gazebo"), std::string::npos);
  const auto back = urdd::model_from_json(urdd::model_to_json(model));
  EXPECT_EQ(urdd::model_to_json(back), urdd::model_to_json(model));
}

TEST(Parser, AxisIsNormalized) {
  const std::string xml =
      robot("<link name=\"a\"/><link name=\"b\"/><joint name=\"j\" type=\"continuous\"><parent link=\"a\"/>"
            "<child link=\"b\"/><axis xyz=\"0 0 2\"/></joint>");
  EXPECT_NEAR(urdd::parse_urdf(xml, ".").joints[0].axis.norm(), 1.0, 1e-15);
}

TEST(Parser, RandomTreesRoundTripThroughXml) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto model = t::random_tree(rng, {20, true, true});
    const auto parsed = urdd::parse_urdf(t::to_urdf(model), ".");
    EXPECT_TRUE(json_near(urdd::model_to_json(parsed), urdd::model_to_json(model)));
  }
}

TEST(Parser, MissingFileNamesThePath) {
  try {
    urdd::parse_urdf_file("/no/such/robot.urdf");
    FAIL();
  } catch (const urdd::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
    EXPECT_NE(std::string(e.what()).find("/no/such/robot.urdf"), std::string::npos);
  }
}

TEST(ModelJson, JointSnippetDefaults) {
  const auto joint = urdd::joint_from_json(
      urdd::Json{{"name", "attach"}, {"type", "fixed"}, {"parent", "a"}, {"child", "b"}});
  EXPECT_EQ(joint.type, urdd::JointType::kFixed);
  EXPECT_EQ(joint.origin.xyz, urdd::Vec3::Zero());
  EXPECT_FALSE(joint.limits);
  EXPECT_THROW(urdd::joint_from_json(urdd::Json{{"name", "x"}}), urdd::Error);
}

}  // namespace
