// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/checkpoint.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spsatune/error.hpp"
#include "spsatune/serialization.hpp"

namespace spsatune {

using json_codec::json;

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

void save_checkpoint(const std::filesystem::path& path, const ParameterSpace& space,
                     const EngineOptions& options, const TunerState& state) {
  json doc = {{"format_version", kCheckpointFormatVersion},
              {"generator", Rng::kName},
              {"space_fingerprint", space.fingerprint()},
              {"space", json_codec::space_to_json(space)},
              {"options", json_codec::options_to_json(options)},
              {"state", json_codec::state_to_json(state)}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw CheckpointError("checkpoint '" + path.string() + "' is corrupt: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_number_integer())
    throw CheckpointError("checkpoint '" + path.string() + "' has no format_version");
  int version = doc["format_version"].get<int>();
  if (version != kCheckpointFormatVersion)
    throw IncompatibleVersionError("checkpoint format version " + std::to_string(version) +
                                   " is not supported (expected " +
                                   std::to_string(kCheckpointFormatVersion) + ")");

  try {
    ParameterSpace space = json_codec::space_from_json(doc.at("space"), "/space");
    EngineOptions options = json_codec::options_from_json(doc.at("options"), "/options", space.size());
    TunerState state = json_codec::state_from_json(doc.at("state"), "/state");
    if (doc.value("space_fingerprint", std::string()) != space.fingerprint())
      throw CheckpointError("space fingerprint does not match the stored space");
    if (state.theta.size() != space.size())
      throw CheckpointError("state dimension does not match the stored space");
    return Checkpoint{version, std::move(space), std::move(options), std::move(state)};
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError("checkpoint '" + path.string() + "' is invalid: " + e.what());
  }
}

}  // namespace spsatune
