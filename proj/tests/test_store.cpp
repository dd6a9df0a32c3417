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

#include <algorithm>
#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "urdd/error.hpp"
#include "urdd/pipeline.hpp"
#include "urdd/store.hpp"

namespace {

using urdd::Json;
namespace t = urdd::testing;
namespace fs = std::filesystem;

bool has_finding(const std::vector<urdd::Finding>& findings, const std::string& needle) {
  for (const auto& f : findings)
    if (f.message.find(needle) != std::string::npos) return true;
  return false;
}

fs::path converted_planar2(const std::string& tag) {
  const fs::path out = t::fresh_temp_dir(tag) / "planar2_urdd";
  urdd::ConvertOptions options;
  options.epoch = 0;
  options.proximity.samples = 50;
  urdd::convert_urdf(t::fixture_dir() / "planar2.urdf", out, options);
  return out;
}

TEST(CanonicalJson, SortsKeysAndPrintsFullPrecision) {
  const Json doc = {{"b", 0.1}, {"a", {1, 2}}, {"c", "x"}};
  const std::string text = urdd::canonical_json(doc);
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_LT(text.find("\"b\""), text.find("\"c\""));
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(Json::parse(text)["b"].get<double>(), 0.1);
}

TEST(CanonicalJson, RejectsNonFiniteNumbers) {
  EXPECT_THROW(urdd::canonical_json(Json{{"x", std::numeric_limits<double>::quiet_NaN()}}), urdd::Error);
  EXPECT_THROW(urdd::canonical_json(Json{{"x", std::numeric_limits<double>::infinity()}}), urdd::Error);
}

TEST(CanonicalJson, IsStableUnderReparse) {
  const Json doc = {{"nested", {{"z", -1e-300}, {"y", 12345678901234567.0}, {"x", {true, false, nullptr}}}}};
  const std::string once = urdd::canonical_json(doc);
  EXPECT_EQ(urdd::canonical_json(Json::parse(once)), once);
}

TEST(YamlMirror, RoundTripsToTheSameTree) {
  const Json doc = {{"name", "robot: \"quoted\"\n"},
                    {"numbers", {1, -2.5, 1e-17, 0}},
                    {"empty_list", Json::array()},
                    {"empty_map", Json::object()},
                    {"nested", {{"flag", true}, {"none", nullptr}, {"text", "123"}}}};
  EXPECT_TRUE(urdd::deep_equal(urdd::yaml_to_json(urdd::yaml_mirror(doc)), doc));
}

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(urdd::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Paths, RejectEscapes) {
  EXPECT_THROW(urdd::check_relative_path("../x"), urdd::Error);
  EXPECT_THROW(urdd::check_relative_path("/abs"), urdd::Error);
  EXPECT_THROW(urdd::check_relative_path(""), urdd::Error);
  EXPECT_THROW(urdd::check_relative_path("a/../../b"), urdd::Error);
  EXPECT_NO_THROW(urdd::check_relative_path("meshes/a%2Fb.obj"));
}

TEST(ModuleGraph, DependenciesPrecedeDependents) {
  std::set<std::string> seen;
  for (const auto& info : urdd::known_modules()) {
    for (auto dep : info.dependencies) EXPECT_TRUE(seen.count(std::string(dep))) << info.name << " <- " << dep;
    seen.insert(std::string(info.name));
  }
  const auto closed = urdd::with_dependencies({std::string(urdd::kSkipsModule)});
  // Everything except the original meshes and the connections module.
  EXPECT_EQ(closed.size(), 9u);
  EXPECT_FALSE(std::count(closed.begin(), closed.end(), std::string(urdd::kOriginalMeshesModule)));
  EXPECT_THROW(urdd::with_dependencies({"no_such_module"}), urdd::Error);
}

TEST(Manifest, RoundTripsWithExtensions) {
  urdd::Manifest m;
  m.robot_name = "r";
  m.created_at = urdd::iso8601_utc(0);
  m.extensions["composite"] = {{"sources", Json::array()}};
  m.modules.push_back({"dof_module", "1.0.0", {"module.json", "module.yaml"}, "abc"});
  const urdd::Manifest back = urdd::manifest_from_json(urdd::manifest_to_json(m));
  EXPECT_EQ(back.robot_name, "r");
  EXPECT_EQ(back.created_at, "1970-01-01T00:00:00Z");
  ASSERT_EQ(back.modules.size(), 1u);
  EXPECT_EQ(back.modules[0].content_digest, "abc");
  EXPECT_TRUE(back.extensions.contains("composite"));
}

TEST(Handle, LoadsEveryGeneratedModule) {
  const fs::path dir = converted_planar2("store-load");
  const auto urdd = urdd::UrddHandle::load(dir, /*strict=*/true);
  EXPECT_EQ(urdd.robot_name(), "planar2");
  for (const auto& info : urdd::known_modules()) {
    EXPECT_TRUE(urdd.has_module(info.name)) << info.name;
    EXPECT_TRUE(urdd.module(info.name).is_object());
  }
  EXPECT_TRUE(urdd.unknown_modules().empty());
}

TEST(Handle, MissingManifestIsReported) {
  const fs::path dir = t::fresh_temp_dir("store-empty");
  try {
    urdd::UrddHandle::load(dir);
    FAIL();
  } catch (const urdd::Error& e) {
    EXPECT_EQ(e.code(), urdd::ErrorCode::kMissingManifest);
  }
}

TEST(Handle, StrictLoadDetectsTamperedModule) {
  const fs::path dir = converted_planar2("store-tamper");
  urdd::write_file(dir / "dof_module" / "module.json", "{\"num_dofs\": 3}");
  try {
    urdd::UrddHandle::load(dir, true);
    FAIL();
  } catch (const urdd::Error& e) {
    EXPECT_EQ(e.code(), urdd::ErrorCode::kDigestMismatch);
  }
  EXPECT_TRUE(has_finding(urdd::validate_urdd(dir), "content digest mismatch"));
}

TEST(Handle, UnknownModulesAreSkippedNotFatal) {
  const fs::path dir = converted_planar2("store-unknown");
  urdd::write_module(dir, "future_module", Json{{"x", 1}}, {});
  const auto urdd = urdd::UrddHandle::load(dir);
  ASSERT_EQ(urdd.unknown_modules().size(), 1u);
  EXPECT_EQ(urdd.unknown_modules()[0], "future_module");
  EXPECT_FALSE(urdd.has_module("future_module"));
  const auto findings = urdd::validate_urdd(dir);
  for (const auto& f : findings) EXPECT_EQ(f.severity, urdd::Severity::kWarning) << f.message;
}

TEST(Handle, MissingModuleRaisesDependencyError) {
  const fs::path out = t::fresh_temp_dir("store-partial") / "u";
  urdd::ConvertOptions options;
  options.modules = {"dof_module"};
  urdd::convert_urdf(t::fixture_dir() / "planar2.urdf", out, options);
  const auto urdd = urdd::UrddHandle::load(out);
  try {
    urdd.module(urdd::kChainModule);
    FAIL();
  } catch (const urdd::Error& e) {
    EXPECT_EQ(e.code(), urdd::ErrorCode::kMissingDependencyModule);
  }
}

TEST(Handle, InMemoryFilesAreReadable) {
  urdd::Manifest m;
  m.robot_name = "mem";
  const auto urdd = urdd::UrddHandle::from_memory(m, {{"convex_hull_meshes_module", Json{{"links", Json::array()}}}},
                                                  {{"convex_hull_meshes_module/meshes/a.obj", "v 0 0 0\n"}});
  EXPECT_TRUE(urdd.has_module(urdd::kConvexHullModule));
  EXPECT_EQ(urdd.read_module_file(urdd::kConvexHullModule, "meshes/a.obj"), "v 0 0 0\n");
  EXPECT_THROW(urdd.read_module_file(urdd::kConvexHullModule, "meshes/b.obj"), urdd::Error);
}

TEST(Validate, FreshConversionIsConsistent) {
  const fs::path dir = converted_planar2("store-valid");
  EXPECT_TRUE(urdd::validate_urdd(dir).empty());
}

TEST(Validate, DanglingMeshReferenceIsFlagged) {
  const fs::path dir = converted_planar2("store-dangling");
  fs::remove(dir / "convex_hull_meshes_module" / "meshes" / "link1.obj");
  EXPECT_TRUE(has_finding(urdd::validate_urdd(dir), "dangling mesh reference convex_hull_meshes_module/meshes/link1.obj"));
}

TEST(Validate, BoundsLengthMismatchIsFlagged) {
  const fs::path dir = converted_planar2("store-bounds");
  auto bounds = Json::parse(urdd::read_file(dir / "bounds_module" / "module.json"));
  bounds["bounds"].erase(bounds["bounds"].size() - 1);
  urdd::write_module(dir, urdd::kBoundsModule, bounds, {});
  EXPECT_TRUE(has_finding(urdd::validate_urdd(dir), "bounds length 1"));
}

TEST(Validate, MissingDirectoryAndYamlDriftAreFlagged) {
  const fs::path dir = converted_planar2("store-drift");
  urdd::write_file(dir / "chain_module" / "module.yaml", "root_link: \"other\"\n");
  fs::remove_all(dir / "connections_module");
  const auto findings = urdd::validate_urdd(dir);
  EXPECT_TRUE(has_finding(findings, "module.yaml does not mirror module.json"));
  EXPECT_TRUE(has_finding(findings, "module directory missing"));
}

}  // namespace
