// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "spsatune/engine.hpp"
#include "spsatune/objective.hpp"
#include "spsatune/param_space.hpp"

namespace spsatune {

struct OutputPaths {
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> summary;
};

/// A complete tuning run as declared in a config file.
struct RunConfig {
  ParameterSpace space;
  ObjectiveSpec objective;
  EngineOptions engine;
  OutputPaths output;
};

/// Parses a run config document. Relative output paths resolve against
/// `base_dir`. Throws ConfigError naming the offending field.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Reads and parses `path`; relative paths resolve against its directory.
/// Throws IoError when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace spsatune
