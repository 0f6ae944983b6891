// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/param_space.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include "spsatune/error.hpp"

namespace spsatune {

namespace {

// Raw-unit slack added before flooring. Products like span * (v - min) / span
// can land a few ulps under an integer; this keeps the floor on the intended
// side without affecting monotonicity.
constexpr double kFloorSlack = 1e-7;

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Number of equal-width bins used for boolean and categorical kinds.
double bin_count(const ParameterSpec& spec) { return spec.max - spec.min + 1.0; }

}  // namespace

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::real: return "real";
    case ParamKind::integer: return "integer";
    case ParamKind::boolean: return "boolean";
    case ParamKind::categorical: return "categorical";
  }
  return "?";
}

ParamKind param_kind_from_string(const std::string& s) {
  if (s == "real") return ParamKind::real;
  if (s == "integer") return ParamKind::integer;
  if (s == "boolean") return ParamKind::boolean;
  if (s == "categorical") return ParamKind::categorical;
  throw DomainError("unknown parameter kind '" + s + "'");
}

ParameterSpec ParameterSpec::real(std::string name, double min, double max,
                                  double default_value, std::optional<double> resolution) {
  ParameterSpec spec;
  spec.name = std::move(name);
  spec.kind = ParamKind::real;
  spec.min = min;
  spec.max = max;
  spec.default_value = default_value;
  spec.resolution = resolution.value_or((max - min) / 100.0);
  spec.validate();
  return spec;
}

ParameterSpec ParameterSpec::integer(std::string name, double min, double max,
                                     double default_value) {
  ParameterSpec spec;
  spec.name = std::move(name);
  spec.kind = ParamKind::integer;
  spec.min = min;
  spec.max = max;
  spec.default_value = default_value;
  spec.resolution = 1.0;
  spec.validate();
  return spec;
}

ParameterSpec ParameterSpec::boolean(std::string name, bool default_value) {
  ParameterSpec spec;
  spec.name = std::move(name);
  spec.kind = ParamKind::boolean;
  spec.min = 0.0;
  spec.max = 1.0;
  spec.default_value = default_value ? 1.0 : 0.0;
  spec.resolution = 1.0;
  spec.validate();
  return spec;
}

ParameterSpec ParameterSpec::categorical(std::string name, std::vector<std::string> categories,
                                         std::size_t default_index) {
  ParameterSpec spec;
  spec.name = std::move(name);
  spec.kind = ParamKind::categorical;
  spec.min = 0.0;
  spec.max = categories.empty() ? 0.0 : static_cast<double>(categories.size() - 1);
  spec.default_value = static_cast<double>(default_index);
  spec.categories = std::move(categories);
  spec.resolution = 1.0;
  spec.validate();
  return spec;
}

void ParameterSpec::validate() const {
  if (name.empty()) throw StructuralError("parameter name must not be empty");
  const std::string where = "parameter '" + name + "': ";
  if (kind == ParamKind::categorical && categories.size() < 2)
    throw StructuralError(where + "a categorical needs at least two categories");
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(default_value))
    throw NumericError(where + "bounds and default must be finite");
  if (!(min < max)) throw DomainError(where + "min must be strictly less than max");
  if (default_value < min || default_value > max)
    throw DomainError(where + "default " + format_g(default_value, 17) + " outside [" +
                      format_g(min, 17) + ", " + format_g(max, 17) + "]");
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw DomainError(where + "resolution must be positive");
  if (resolution > max - min) throw DomainError(where + "resolution exceeds max - min");

  switch (kind) {
    case ParamKind::real:
      if (!categories.empty()) throw StructuralError(where + "only categoricals take categories");
      break;
    case ParamKind::integer:
      if (!is_integral(min) || !is_integral(max) || !is_integral(default_value))
        throw DomainError(where + "integer bounds and default must be integral");
      if (resolution != 1.0) throw DomainError(where + "integer resolution is fixed at 1");
      break;
    case ParamKind::boolean:
      if (min != 0.0 || max != 1.0) throw DomainError(where + "boolean bounds are fixed at {0,1}");
      if (!is_integral(default_value)) throw DomainError(where + "boolean default must be 0 or 1");
      if (resolution != 1.0) throw DomainError(where + "boolean resolution is fixed at 1");
      break;
    case ParamKind::categorical: {
      if (min != 0.0 || max != static_cast<double>(categories.size() - 1))
        throw DomainError(where + "categorical bounds must be [0, count-1]");
      if (!is_integral(default_value)) throw DomainError(where + "default index must be integral");
      std::set<std::string> seen(categories.begin(), categories.end());
      if (seen.size() != categories.size())
        throw StructuralError(where + "duplicate category names");
      if (resolution != 1.0) throw DomainError(where + "categorical resolution is fixed at 1");
      break;
    }
  }
}

ParameterSpace::ParameterSpace(std::vector<ParameterSpec> specs) : specs_(std::move(specs)) {
  if (specs_.empty()) throw StructuralError("parameter space needs at least one parameter");
  std::set<std::string> names;
  for (const auto& spec : specs_) {
    spec.validate();
    if (!names.insert(spec.name).second)
      throw StructuralError("duplicate parameter name '" + spec.name + "'");
  }
}

std::optional<std::size_t> ParameterSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i)
    if (specs_[i].name == name) return i;
  return std::nullopt;
}

const ParameterSpec& ParameterSpace::at(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw LookupError("unknown parameter '" + name + "'");
  return specs_[*i];
}

std::string ParameterSpace::fingerprint() const {
  std::string canon;
  for (const auto& s : specs_) {
    canon += s.name;
    canon += '|';
    canon += to_string(s.kind);
    canon += '|' + format_g(s.min, 17) + '|' + format_g(s.max, 17) + '|' +
             format_g(s.default_value, 17) + '|' + format_g(s.resolution, 17) + '|';
    for (const auto& c : s.categories) canon += c + ',';
    canon += ';';
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

double map_coordinate(double u, const ParameterSpec& spec) {
  switch (spec.kind) {
    case ParamKind::real:
      return std::clamp(spec.span() * u + spec.min, spec.min, spec.max);
    case ParamKind::integer:
      return std::clamp(std::floor(spec.span() * u + spec.min + kFloorSlack), spec.min, spec.max);
    case ParamKind::boolean:
    case ParamKind::categorical:
      // Equal-width bins, so every value owns a slice of [0,1] of the same size.
      return std::clamp(std::floor(bin_count(spec) * u + kFloorSlack) + spec.min, spec.min,
                        spec.max);
  }
  return spec.min;
}

double normalize_value(double raw, const ParameterSpec& spec) {
  if (spec.kind == ParamKind::boolean || spec.kind == ParamKind::categorical)
    return (raw - spec.min + 0.5) / bin_count(spec);  // bin center
  return (raw - spec.min) / spec.span();
}

SystemConfig map_to_system(const AlgoPoint& point, const ParameterSpace& space) {
  if (point.size() != space.size())
    throw StructuralError("point has dimension " + std::to_string(point.size()) +
                          ", space has " + std::to_string(space.size()));
  SystemConfig out;
  out.values.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    double u = point.coords[i];
    if (!(u >= 0.0 && u <= 1.0))
      throw DomainError("coordinate " + std::to_string(i) + " = " + format_g(u, 17) +
                        " outside [0,1]; project first");
    out.values.push_back(map_coordinate(u, space[i]));
  }
  return out;
}

AlgoPoint map_default(const ParameterSpace& space) {
  AlgoPoint p;
  p.coords.reserve(space.size());
  for (const auto& spec : space.specs()) p.coords.push_back(normalize_value(spec.default_value, spec));
  return p;
}

AlgoPoint normalize(const SystemConfig& config, const ParameterSpace& space) {
  if (config.size() != space.size()) throw StructuralError("config dimension mismatch");
  AlgoPoint p;
  p.coords.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    p.coords.push_back(std::clamp(normalize_value(config.values[i], space[i]), 0.0, 1.0));
  return p;
}

AlgoPoint project(const AlgoPoint& point) {
  AlgoPoint out = point;
  for (std::size_t i = 0; i < out.coords.size(); ++i) {
    double& c = out.coords[i];
    if (!std::isfinite(c))
      throw NumericError("non-finite coordinate " + std::to_string(i) + " cannot be projected");
    c = std::clamp(c, 0.0, 1.0);
  }
  return out;
}

void validate_config(const SystemConfig& config, const ParameterSpace& space) {
  if (config.size() != space.size()) throw StructuralError("config dimension mismatch");
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& spec = space[i];
    double v = config.values[i];
    if (!std::isfinite(v) || v < spec.min || v > spec.max)
      throw DomainError("value " + format_g(v, 17) + " of '" + spec.name + "' outside its bounds");
    if (spec.is_discrete() && !is_integral(v))
      throw DomainError("value of '" + spec.name + "' must be integral");
  }
}

std::string render_value(double raw, const ParameterSpec& spec) {
  switch (spec.kind) {
    case ParamKind::real: return format_g(raw, 6);
    case ParamKind::integer: return format_g(raw, 17);
    case ParamKind::boolean: return raw != 0.0 ? "true" : "false";
    case ParamKind::categorical: {
      auto idx = static_cast<std::size_t>(std::clamp(raw, spec.min, spec.max));
      return spec.categories.at(idx);
    }
  }
  return format_g(raw, 17);
}

}  // namespace spsatune
