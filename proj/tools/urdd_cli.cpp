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

// Command-line front end: convert, batch, combine, validate, info, fk,
// fk-vectors and apply-overrides.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "urdd/error.hpp"
#include "urdd/fk.hpp"
#include "urdd/kinematics.hpp"
#include "urdd/parallel.hpp"
#include "urdd/pipeline.hpp"

namespace {

using urdd::Json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDerivation = 2;
constexpr int kExitValidation = 3;

int exit_code_for(const urdd::Error& e) { return urdd::is_input_error(e.code()) ? kExitInput : kExitDerivation; }

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_csv(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw urdd::Error(urdd::ErrorCode::kDimensionMismatch, "not a number: '" + item + "'");
    }
  }
  return out;
}

Json read_json_file(const fs::path& path) {
  if (!fs::exists(path)) throw urdd::Error(urdd::ErrorCode::kIoFailure, "no such file: " + path.string());
  try {
    return Json::parse(urdd::read_file(path));
  } catch (const Json::exception& e) {
    throw urdd::Error(urdd::ErrorCode::kMalformedModule, path.string() + ": " + e.what());
  }
}

/// Flags shared by every command that derives modules.
struct DeriveFlags {
  std::string modules;
  int decomp_max_pieces = 32;
  double decomp_tolerance = 0.02;
  int decomp_resolution = 64;
  int samples = 1000;
  std::uint64_t seed = 0;
  bool glb = false;
  std::optional<std::int64_t> epoch;
  bool keep_partial = false;
  int jobs = 1;
  std::string skip_overrides;
  std::vector<std::string> asset_roots;

  void add_to(CLI::App* cmd, bool with_modules) {
    if (with_modules) cmd->add_option("--modules", modules, "Comma-separated modules to generate (default: all)");
    cmd->add_option("--decomp-max-pieces", decomp_max_pieces, "Maximum convex pieces per link")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--decomp-tolerance", decomp_tolerance, "Concavity tolerance (fraction of piece hull volume)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--decomp-resolution", decomp_resolution, "Voxels along the longest axis")
        ->check(CLI::Range(4, 512));
    cmd->add_option("--samples", samples, "Configurations sampled for distance statistics")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Sampling seed");
    cmd->add_flag("--glb", glb, "Also export .glb meshes");
    cmd->add_option("--epoch", epoch, "Manifest timestamp in seconds since 1970 (reproducible output)");
    cmd->add_flag("--keep-partial", keep_partial, "Keep partial output when a conversion fails");
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--skip-overrides", skip_overrides, "skips_overrides.json to apply");
    cmd->add_option("--asset-root", asset_roots, "Directory searched for mesh files (repeatable)");
  }

  urdd::ConvertOptions options() const {
    urdd::ConvertOptions o;
    o.modules = split_csv(modules);
    o.geometry.decomposition.max_pieces = decomp_max_pieces;
    o.geometry.decomposition.concavity_tolerance = decomp_tolerance;
    o.geometry.decomposition.voxel_resolution = decomp_resolution;
    o.geometry.glb = glb;
    o.geometry.jobs = jobs;
    for (const auto& r : asset_roots) o.geometry.asset_roots.emplace_back(r);
    o.proximity.samples = samples;
    o.proximity.seed = seed;
    o.proximity.jobs = jobs;
    o.epoch = epoch;
    o.keep_partial = keep_partial;
    if (!skip_overrides.empty()) o.overrides = urdd::parse_overrides(read_json_file(skip_overrides));
    return o;
  }
};

void print_report(const urdd::ConvertReport& report, const fs::path& out) {
  if (!report.auto_added.empty()) {
    std::string list;
    for (const auto& m : report.auto_added) list += (list.empty() ? "" : ", ") + m;
    std::cerr << "notice: enabled required dependencies: " << list << "\n";
  }
  std::printf("%-40s %10s\n", "step", "seconds");
  double total = 0.0;
  for (const auto& t : report.timings) {
    std::printf("%-40s %10.3f\n", t.step.c_str(), t.seconds);
    total += t.seconds;
  }
  std::printf("%-40s %10.3f\n", "total", total);
  std::printf("wrote %s (%zu modules)\n", out.string().c_str(), report.modules.size());
}

// ---------------------------------------------------------------------------

int cmd_convert(const std::string& urdf, const std::string& out, const DeriveFlags& flags) {
  const urdd::ConvertReport report = urdd::convert_urdf(urdf, out, flags.options());
  print_report(report, out);
  return kExitOk;
}

int cmd_batch(const std::string& in_root, const std::string& out_root, const DeriveFlags& flags) {
  if (!fs::is_directory(in_root)) {
    throw urdd::Error(urdd::ErrorCode::kIoFailure, "not a directory: " + in_root);
  }
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::recursive_directory_iterator(in_root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".urdf") inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) {
    std::cerr << "warning: no .urdf files found under " << in_root << "\n";
    return kExitOk;
  }
  urdd::ConvertOptions base = flags.options();
  // Parallelism goes to robots; each robot is then processed serially.
  if (inputs.size() > 1) base.geometry.jobs = base.proximity.jobs = 1;

  struct Row {
    std::string robot;
    int status = kExitOk;
    double seconds = 0.0;
    std::string message;
  };
  std::vector<Row> rows(inputs.size());
  urdd::parallel_for(inputs.size(), flags.jobs, [&](std::size_t i) {
    const fs::path rel = fs::relative(inputs[i], in_root).replace_extension();
    rows[i].robot = rel.generic_string();
    const auto start = std::chrono::steady_clock::now();
    try {
      urdd::convert_urdf(inputs[i], fs::path(out_root) / rel, base);
      rows[i].message = (fs::path(out_root) / rel).string();
    } catch (const urdd::Error& e) {
      rows[i].status = exit_code_for(e);
      rows[i].message = e.what();
    } catch (const std::exception& e) {
      rows[i].status = kExitDerivation;
      rows[i].message = e.what();
    }
    rows[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  std::printf("%-32s %-8s %10s  %s\n", "robot", "status", "seconds", "detail");
  int worst = kExitOk;
  int failed = 0;
  for (const auto& r : rows) {
    std::printf("%-32s %-8s %10.3f  %s\n", r.robot.c_str(), r.status == kExitOk ? "ok" : "FAILED", r.seconds,
                r.message.c_str());
    worst = std::max(worst, r.status);
    failed += r.status != kExitOk;
  }
  std::printf("%zu converted, %d failed\n", rows.size() - static_cast<std::size_t>(failed), failed);
  return worst;
}

struct CombineFlags {
  std::string parent, child, attach_link, joint, parent_prefix, child_prefix, out;
  bool parent_prefix_set = false, child_prefix_set = false;
};

int cmd_combine(const CombineFlags& c, const DeriveFlags& flags) {
  const urdd::UrddHandle parent = urdd::UrddHandle::load(c.parent);
  const urdd::UrddHandle child = urdd::UrddHandle::load(c.child);
  // The joint is a JSON snippet inline or a path to a file holding one.
  const std::string trimmed = c.joint.substr(std::min(c.joint.find_first_not_of(" \t\n"), c.joint.size()));
  Json joint_doc;
  if (!trimmed.empty() && trimmed.front() == '{') {
    try {
      joint_doc = Json::parse(trimmed);
    } catch (const Json::exception& e) {
      throw urdd::Error(urdd::ErrorCode::kMalformedModule, std::string("joint snippet: ") + e.what());
    }
  } else {
    joint_doc = read_json_file(c.joint);
  }
  urdd::AttachSpec spec;
  spec.attach_link = c.attach_link;
  spec.joint = urdd::joint_from_json(joint_doc);
  spec.parent_prefix = c.parent_prefix_set ? c.parent_prefix : urdd::default_prefix(parent.robot_name());
  spec.child_prefix = c.child_prefix_set ? c.child_prefix : urdd::default_prefix(child.robot_name());
  const urdd::ConvertReport report = urdd::combine_urdds(parent, child, spec, c.out, flags.options());
  print_report(report, c.out);
  return kExitOk;
}

int cmd_validate(const std::string& dir) {
  const auto findings = urdd::validate_urdd(dir);
  bool errors = false;
  for (const auto& f : findings) {
    std::printf("%s\t%s\t%s\n", urdd::to_string(f.severity).c_str(), f.module.empty() ? "-" : f.module.c_str(),
                f.message.c_str());
    errors |= f.severity == urdd::Severity::kError;
  }
  if (findings.empty()) std::printf("%s: consistent\n", dir.c_str());
  return errors ? kExitValidation : kExitOk;
}

int cmd_info(const std::string& dir, bool json) {
  const urdd::UrddSummary s = urdd::summarize_urdd(dir);
  if (json) {
    std::printf("%s\n", urdd::canonical_json(urdd::summary_to_json(s)).c_str());
    return kExitOk;
  }
  std::printf("robot:               %s\n", s.robot_name.c_str());
  std::printf("format version:      %s\n", s.format_version.c_str());
  std::printf("dofs:                %s\n", s.num_dofs < 0 ? "n/a" : std::to_string(s.num_dofs).c_str());
  std::printf("links:               %s\n", s.num_links < 0 ? "n/a" : std::to_string(s.num_links).c_str());
  std::printf("size with meshes:    %ju bytes\n", s.bytes_total);
  std::printf("size without meshes: %ju bytes\n", s.bytes_without_meshes);
  std::printf("modules:\n");
  for (const auto& [name, version] : s.module_versions) std::printf("  %-40s %s\n", name.c_str(), version.c_str());
  return kExitOk;
}

int cmd_fk(const std::string& dir, const std::string& q_text, const std::string& link) {
  const urdd::UrddHandle handle = urdd::UrddHandle::load(dir);
  const std::vector<double> q = parse_doubles(q_text);
  const urdd::FkResult result = urdd::fk(handle, q);
  Json out = Json::object();
  for (std::size_t i = 0; i < result.links.size(); ++i) {
    if (!link.empty() && result.links[i] != link) continue;
    out[result.links[i]] = urdd::transform_to_json(result.poses[i]);
  }
  if (!link.empty() && out.empty()) throw urdd::Error(urdd::ErrorCode::kUnknownLink, "no link named '" + link + "'");
  std::printf("%s\n", out.dump(2).c_str());
  return kExitOk;
}

Json matrix_json(const urdd::Transform& t) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r) {
    rows.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2), t.translation(r)});
  }
  rows.push_back({0.0, 0.0, 0.0, 1.0});
  return rows;
}

int cmd_fk_vectors(const std::string& dir, int count, std::uint64_t seed, const std::string& out) {
  const urdd::UrddHandle handle = urdd::UrddHandle::load(dir);
  const urdd::FkModel model = urdd::FkModel::from_urdd(handle);
  const auto bounds = urdd::bounds_from_json(handle.module(urdd::kBoundsModule));
  const auto configs = urdd::sample_configurations(bounds, count, seed);
  Json vectors = Json::array();
  for (const auto& q : configs) {
    const urdd::FkResult result = model.compute(q);
    Json poses = Json::object();
    for (std::size_t i = 0; i < result.links.size(); ++i) {
      Json pose = urdd::transform_to_json(result.poses[i]);
      pose["matrix"] = matrix_json(result.poses[i]);
      poses[result.links[i]] = std::move(pose);
    }
    vectors.push_back({{"q", q}, {"poses", std::move(poses)}});
  }
  const Json doc = {{"robot_name", handle.robot_name()},
                    {"num_dofs", model.num_dofs()},
                    {"seed", seed},
                    {"tolerance", 1e-5},
                    {"links", model.links()},
                    {"vectors", std::move(vectors)}};
  const std::string text = urdd::canonical_json(doc);
  if (out.empty() || out == "-") {
    std::printf("%s", text.c_str());
  } else {
    urdd::write_file(out, text);
    std::printf("wrote %d configurations to %s\n", count, out.c_str());
  }
  return kExitOk;
}

int cmd_apply_overrides(const std::string& dir, const std::string& overrides_path) {
  const urdd::UrddHandle handle = urdd::UrddHandle::load(dir);
  const auto overrides = urdd::parse_overrides(read_json_file(overrides_path));
  const Json updated =
      urdd::apply_overrides(handle.module(urdd::kSkipsModule), handle.module(urdd::kChainModule), overrides);
  urdd::write_module(dir, urdd::kSkipsModule, updated, {});
  std::printf("applied %zu overrides to %s\n", overrides.size(), dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal Robot Description Directory tools"};
  app.require_subcommand(1);

  DeriveFlags derive;
  std::string urdf, out, in_root, dir, q_text, link, overrides;
  bool json = false;
  int count = 10;
  std::uint64_t vector_seed = 0;
  CombineFlags combine;

  auto* convert = app.add_subcommand("convert", "Convert a URDF into a URDD directory");
  convert->add_option("--urdf", urdf, "Input URDF file")->required();
  convert->add_option("--out", out, "Output URDD directory")->required();
  derive.add_to(convert, true);

  auto* batch = app.add_subcommand("batch", "Convert every .urdf under a directory");
  batch->add_option("--in", in_root, "Directory searched recursively for .urdf files")->required();
  batch->add_option("--out", out, "Output root; one URDD per robot")->required();
  derive.add_to(batch, true);

  auto* comb = app.add_subcommand("combine", "Attach a child URDD to a parent URDD");
  comb->add_option("--parent", combine.parent, "Parent URDD directory")->required();
  comb->add_option("--child", combine.child, "Child URDD directory")->required();
  comb->add_option("--attach-link", combine.attach_link, "Parent link receiving the child")->required();
  comb->add_option("--joint", combine.joint, "Attachment joint as a JSON snippet or file")->required();
  comb->add_option("--parent-prefix", combine.parent_prefix, "Name prefix for parent links/joints");
  comb->add_option("--child-prefix", combine.child_prefix, "Name prefix for child links/joints");
  comb->add_option("--out", combine.out, "Output URDD directory")->required();
  derive.add_to(comb, false);

  auto* validate = app.add_subcommand("validate", "Check a URDD for consistency");
  validate->add_option("dir", dir, "URDD directory")->required();

  auto* info = app.add_subcommand("info", "Summarize a URDD");
  info->add_option("dir", dir, "URDD directory")->required();
  info->add_flag("--json", json, "Machine-readable output");

  auto* fk = app.add_subcommand("fk", "Forward kinematics from a URDD");
  fk->add_option("dir", dir, "URDD directory")->required();
  fk->add_option("--q", q_text, "Comma-separated configuration");
  fk->add_option("--link", link, "Only report this link");

  auto* vectors = app.add_subcommand("fk-vectors", "Write FK test vectors for sampled configurations");
  vectors->add_option("dir", dir, "URDD directory")->required();
  vectors->add_option("--count", count, "Number of configurations")->check(CLI::PositiveNumber);
  vectors->add_option("--seed", vector_seed, "Sampling seed");
  vectors->add_option("--out", out, "Output file (default: stdout)");

  auto* apply = app.add_subcommand("apply-overrides", "Recompute skip matrices with a skips_overrides.json");
  apply->add_option("dir", dir, "URDD directory")->required();
  apply->add_option("--overrides", overrides, "skips_overrides.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }
  combine.parent_prefix_set = comb->count("--parent-prefix") > 0;
  combine.child_prefix_set = comb->count("--child-prefix") > 0;

  try {
    if (*convert) return cmd_convert(urdf, out, derive);
    if (*batch) return cmd_batch(in_root, out, derive);
    if (*comb) return cmd_combine(combine, derive);
    if (*validate) return cmd_validate(dir);
    if (*info) return cmd_info(dir, json);
    if (*fk) return cmd_fk(dir, q_text, link);
    if (*vectors) return cmd_fk_vectors(dir, count, vector_seed, out);
    if (*apply) return cmd_apply_overrides(dir, overrides);
  } catch (const urdd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDerivation;
  }
  return kExitInput;
}
