// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "spsatune/engine.hpp"

namespace spsatune {

/// Line-delimited JSON trace, one IterationRecord per line, flushed after
/// every row so that each complete line survives a crash.
class TraceWriter {
 public:
  /// Starts a fresh trace, replacing any existing file.
  static TraceWriter create(const std::filesystem::path& path);
  /// Reopens an existing trace for a resumed run: rows with iteration >=
  /// `next_iteration` (and a torn final line) are dropped before appending.
  static TraceWriter resume(const std::filesystem::path& path, std::uint64_t next_iteration);

  TraceWriter(TraceWriter&&) noexcept;
  TraceWriter& operator=(TraceWriter&&) noexcept;
  ~TraceWriter();

  /// Thread-safe. Throws IoError when the row cannot be written.
  void append(const IterationRecord& record);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  TraceWriter(std::filesystem::path path, std::ios::openmode mode);

  std::filesystem::path path_;
  std::ofstream out_;
  std::unique_ptr<std::mutex> mu_;
};

/// Serialized form of one row, without the trailing newline.
std::string format_record(const IterationRecord& record);

/// Reads every complete row; a final line without a newline that fails to
/// parse is ignored. Throws IoError when the file is unreadable and
/// ConfigError for a corrupt complete line.
std::vector<IterationRecord> read_trace(const std::filesystem::path& path);

/// Removes the "wall_ms" member from a serialized row (for comparisons).
std::string strip_wall_ms(const std::string& line);

}  // namespace spsatune
