// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/rng.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "spsatune/error.hpp"

namespace spsatune {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

bool parse_hex(const std::string& s, std::size_t pos, std::size_t len, std::uint64_t& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else return false;
    out = (out << 4) | static_cast<std::uint64_t>(v);
  }
  return true;
}

}  // namespace

Rng::Rng(std::uint64_t seed)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

Rng::Block Rng::philox(Block ctr, Key key) {
  for (int r = 0; r < kRounds; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t Rng::next_u64() {
  Block out = philox(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

int Rng::sign() { return (next_u64() >> 63) ? 1 : -1; }

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream_id) const {
  Rng r;
  r.key_ = key_;
  r.counter_ = {0, 0, static_cast<std::uint32_t>(stream_id),
                static_cast<std::uint32_t>(stream_id >> 32)};
  return r;
}

std::string Rng::serialize() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%08" PRIx32 "%08" PRIx32 "%08" PRIx32 "%08" PRIx32 "%08" PRIx32
                "%08" PRIx32,
                key_[1], key_[0], counter_[3], counter_[2], counter_[1], counter_[0]);
  return std::string(kName) + ":" + buf;
}

Rng Rng::deserialize(const std::string& text) {
  const std::string prefix = std::string(kName) + ":";
  if (text.size() != prefix.size() + 48 || text.compare(0, prefix.size(), prefix) != 0)
    throw CheckpointError("unrecognized generator state '" + text + "'");
  std::uint64_t key = 0, hi = 0, lo = 0;
  std::size_t p = prefix.size();
  if (!parse_hex(text, p, 16, key) || !parse_hex(text, p + 16, 16, hi) ||
      !parse_hex(text, p + 32, 16, lo))
    throw CheckpointError("malformed generator state '" + text + "'");
  Rng r;
  r.key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  r.counter_ = {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
  return r;
}

}  // namespace spsatune
