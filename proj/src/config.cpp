// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/config.hpp"

#include <fstream>

#include "spsatune/error.hpp"
#include "spsatune/serialization.hpp"

namespace spsatune {

namespace {

using nlohmann::json;

std::optional<std::filesystem::path> output_path(const json& output, const char* key,
                                                 const std::filesystem::path& base_dir) {
  auto it = output.find(key);
  if (it == output.end() || it->is_null()) return std::nullopt;
  const std::string where = std::string("/output/") + key;
  if (!it->is_string() || it->get<std::string>().empty())
    throw ConfigError(where, "expected a nonempty path string");
  std::filesystem::path p = it->get<std::string>();
  if (p.is_relative()) p = base_dir / p;
  p = p.lexically_normal();
  // The parent must exist or be creatable; walk up to the first existing
  // ancestor and make sure it is a directory.
  for (auto parent = p.parent_path(); !parent.empty(); parent = parent.parent_path()) {
    if (std::filesystem::exists(parent)) {
      if (!std::filesystem::is_directory(parent))
        throw ConfigError(where, "'" + parent.string() + "' is not a directory");
      break;
    }
    if (parent == parent.root_path()) break;
  }
  return p;
}

// An mrsim profile may be given as a path to a JSON file holding the profile.
json inline_profile(const json& objective, const std::filesystem::path& base_dir) {
  if (!objective.is_object()) return objective;
  auto it = objective.find("profile");
  if (it == objective.end() || !it->is_string()) return objective;
  std::filesystem::path p = it->get<std::string>();
  if (p.is_relative()) p = base_dir / p;
  std::ifstream in(p);
  if (!in) throw ConfigError("/objective/profile", "cannot read profile file " + p.string());
  json copy = objective;
  try {
    copy["profile"] = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("/objective/profile", p.string() + ": " + e.what());
  }
  return copy;
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "space" && it.key() != "objective" && it.key() != "engine" &&
        it.key() != "output" && it.key().rfind("_", 0) != 0)
      throw ConfigError("/" + it.key(), "unknown top-level section");

  auto section = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw ConfigError(std::string("/") + key, "required section is missing");
    return *it;
  };

  ParameterSpace space = json_codec::space_from_json(section("space"), "/space");
  ObjectiveSpec objective =
      json_codec::objective_from_json(inline_profile(section("objective"), base_dir), "/objective");
  try {
    objective.validate(space);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("/objective", e.what());
  }
  EngineOptions engine = json_codec::options_from_json(section("engine"), "/engine", space.size());

  OutputPaths output;
  if (auto it = doc.find("output"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("/output", "expected an object");
    for (auto f = it->begin(); f != it->end(); ++f)
      if (f.key() != "trace" && f.key() != "checkpoint" && f.key() != "summary")
        throw ConfigError("/output/" + f.key(), "unknown output");
    output.trace = output_path(*it, "trace", base_dir);
    output.checkpoint = output_path(*it, "checkpoint", base_dir);
    output.summary = output_path(*it, "summary", base_dir);
  }
  return RunConfig{std::move(space), std::move(objective), std::move(engine), std::move(output)};
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

}  // namespace spsatune
