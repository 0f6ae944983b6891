// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spsatune {

enum class ParamKind { real, integer, boolean, categorical };

const char* to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& s);

/// One tunable knob, in raw system units.
///
/// Booleans are stored as integers over {0, 1}; categoricals as an integer
/// index into `categories`. Use the factory functions, which fill in the
/// fixed bounds and resolution of each kind and validate the result.
struct ParameterSpec {
  std::string name;
  ParamKind kind = ParamKind::real;
  double min = 0.0;
  double max = 1.0;
  double default_value = 0.0;
  std::vector<std::string> categories;
  double resolution = 0.01;

  static ParameterSpec real(std::string name, double min, double max, double default_value,
                            std::optional<double> resolution = std::nullopt);
  static ParameterSpec integer(std::string name, double min, double max, double default_value);
  static ParameterSpec boolean(std::string name, bool default_value);
  static ParameterSpec categorical(std::string name, std::vector<std::string> categories,
                                   std::size_t default_index);

  /// Throws StructuralError / DomainError when an invariant is broken.
  void validate() const;

  /// True for every kind stored as an integral value.
  bool is_discrete() const noexcept { return kind != ParamKind::real; }

  double span() const noexcept { return max - min; }

  bool operator==(const ParameterSpec&) const = default;
};

/// Ordered, immutable collection of specs. Index i is coordinate i of every
/// AlgoPoint and SystemConfig built against this space.
class ParameterSpace {
 public:
  explicit ParameterSpace(std::vector<ParameterSpec> specs);

  std::size_t size() const noexcept { return specs_.size(); }
  const ParameterSpec& operator[](std::size_t i) const { return specs_[i]; }
  const std::vector<ParameterSpec>& specs() const noexcept { return specs_; }

  std::optional<std::size_t> index_of(const std::string& name) const;
  const ParameterSpec& at(const std::string& name) const;

  /// Stable 64-bit FNV-1a digest of the canonical space description, as hex.
  std::string fingerprint() const;

  bool operator==(const ParameterSpace&) const = default;

 private:
  std::vector<ParameterSpec> specs_;
};

/// Normalized optimizer iterate; coordinates live in [0,1] after projection.
struct AlgoPoint {
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size(); }
  bool operator==(const AlgoPoint&) const = default;
};

/// Raw parameter values aligned with a ParameterSpace. Discrete kinds hold
/// integral doubles.
struct SystemConfig {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const SystemConfig&) const = default;
};

/// Maps one normalized coordinate to the raw value of `spec`.
double map_coordinate(double u, const ParameterSpec& spec);

/// Inverse of map_coordinate for a raw value inside the spec's bounds.
double normalize_value(double raw, const ParameterSpec& spec);

SystemConfig map_to_system(const AlgoPoint& point, const ParameterSpace& space);
AlgoPoint map_default(const ParameterSpace& space);
AlgoPoint normalize(const SystemConfig& config, const ParameterSpace& space);

/// Component-wise clamp to the unit cube. Throws NumericError on non-finite input.
AlgoPoint project(const AlgoPoint& point);

/// Throws DomainError unless every value is inside its spec's box and
/// discrete kinds are integral.
void validate_config(const SystemConfig& config, const ParameterSpace& space);

/// Human-facing rendering: booleans as true/false, categoricals by name,
/// reals with 6 significant digits, integers verbatim.
std::string render_value(double raw, const ParameterSpec& spec);

}  // namespace spsatune
