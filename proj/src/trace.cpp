// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/trace.hpp"

#include <sstream>

#include "spsatune/checkpoint.hpp"
#include "spsatune/error.hpp"
#include "spsatune/serialization.hpp"

namespace spsatune {

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read trace " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Line {
  std::string text;
  bool terminated;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back({text.substr(pos), false});
      break;
    }
    lines.push_back({text.substr(pos, nl - pos), true});
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

TraceWriter::TraceWriter(std::filesystem::path path, std::ios::openmode mode)
    : path_(std::move(path)), mu_(std::make_unique<std::mutex>()) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, mode);
  if (!out_) throw IoError("cannot open trace " + path_.string());
}

TraceWriter::TraceWriter(TraceWriter&&) noexcept = default;
TraceWriter& TraceWriter::operator=(TraceWriter&&) noexcept = default;
TraceWriter::~TraceWriter() = default;

TraceWriter TraceWriter::create(const std::filesystem::path& path) {
  return TraceWriter(path, std::ios::out | std::ios::trunc | std::ios::binary);
}

TraceWriter TraceWriter::resume(const std::filesystem::path& path, std::uint64_t next_iteration) {
  if (std::filesystem::exists(path)) {
    std::string kept;
    for (const auto& line : split_lines(read_all(path))) {
      if (line.text.empty()) continue;
      json_codec::json j;
      try {
        j = json_codec::json::parse(line.text);
      } catch (const std::exception&) {
        if (!line.terminated) break;
        throw ConfigError("", "corrupt trace row in " + path.string());
      }
      if (json_codec::record_from_json(j, "").iteration >= next_iteration) break;
      kept += line.text;
      kept += '\n';
    }
    write_file_atomic(path, kept);
  }
  return TraceWriter(path, std::ios::out | std::ios::app | std::ios::binary);
}

void TraceWriter::append(const IterationRecord& record) {
  std::string line = format_record(record);
  line += '\n';
  std::lock_guard lock(*mu_);
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) throw IoError("cannot append to trace " + path_.string());
}

std::string format_record(const IterationRecord& record) {
  return json_codec::record_to_json(record).dump();
}

std::vector<IterationRecord> read_trace(const std::filesystem::path& path) {
  std::vector<IterationRecord> rows;
  for (const auto& line : split_lines(read_all(path))) {
    if (line.text.empty()) continue;
    json_codec::json j;
    try {
      j = json_codec::json::parse(line.text);
    } catch (const std::exception&) {
      if (!line.terminated) break;
      throw ConfigError("/" + std::to_string(rows.size()), "trace row is not valid JSON");
    }
    rows.push_back(json_codec::record_from_json(j, "/" + std::to_string(rows.size())));
  }
  return rows;
}

std::string strip_wall_ms(const std::string& line) {
  auto j = json_codec::ordered_json::parse(line);
  j.erase("wall_ms");
  return j.dump();
}

}  // namespace spsatune
