// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "spsatune/engine.hpp"
#include "spsatune/param_space.hpp"
#include "spsatune/spsa.hpp"

namespace spsatune {

inline constexpr int kCheckpointFormatVersion = 1;

/// Everything needed to continue a run exactly where it stopped.
struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  ParameterSpace space;
  EngineOptions options;
  TunerState state;
};

/// Writes a self-describing JSON document atomically (temp file + rename).
/// Throws IoError when the file cannot be written.
void save_checkpoint(const std::filesystem::path& path, const ParameterSpace& space,
                     const EngineOptions& options, const TunerState& state);

/// Throws CheckpointError for missing or corrupt files and
/// IncompatibleVersionError when the format version differs.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Writes `contents` to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace spsatune
