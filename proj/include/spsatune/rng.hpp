// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace spsatune {

/// Counter-based Philox4x32-10 generator.
///
/// The whole state is a 64-bit key and a 128-bit counter, so it serializes
/// to a fixed-width string and independent streams can be split off by
/// setting the upper counter words. Every draw consumes one counter block.
class Rng {
 public:
  static constexpr const char* kName = "philox4x32-10/v1";

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed);

  /// Raw Philox bijection, exposed for known-answer tests.
  static Block philox(Block counter, Key key);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Fair coin as +1 / -1.
  int sign();
  /// Standard normal via Box-Muller (one variate per call).
  double normal();

  /// Generator for stream `stream_id`, disjoint from this one's stream.
  Rng split(std::uint64_t stream_id) const;

  /// Fixed-width text form: "<name>:<16 hex key><32 hex counter>".
  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  bool operator==(const Rng&) const = default;

 private:
  Key key_{};
  Block counter_{};
};

}  // namespace spsatune
