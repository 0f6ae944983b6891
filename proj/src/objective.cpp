// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/objective.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "spsatune/error.hpp"
#include "spsatune/process.hpp"
#include "spsatune/synthetics.hpp"

namespace spsatune {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Synthetic functions live on the unit cube, so the adapter hands them the
/// mapped config re-normalized: discrete kinds therefore see their floored
/// values, exactly as a real system would.
class SyntheticObjective : public Objective {
 public:
  SyntheticObjective(const ObjectiveSpec& spec, ParameterSpace space)
      : space_(std::move(space)), noise_sigma_(spec.noise_sigma), spec_(spec) {
    fn_ = spec.function == "quadratic" && !spec.center.empty() ? shifted_quadratic(spec.center)
                                                               : find_synthetic(spec.function);
  }

  ObjectiveSample evaluate(const SystemConfig& config, Rng& rng) override {
    auto t0 = Clock::now();
    ObjectiveSample s;
    s.config = config;
    AlgoPoint x = normalize(config, space_);
    double v = fn_.value(x.coords);
    if (noise_sigma_ > 0.0) v += noise_sigma_ * rng.normal();
    s.value = shape_value(spec_, v);
    s.duration = seconds_since(t0);
    return s;
  }
  bool reentrant_safe() const override { return true; }

 private:
  ParameterSpace space_;
  SyntheticFunction fn_;
  double noise_sigma_;
  ObjectiveSpec spec_;
};

class MrsimObjective : public Objective {
 public:
  MrsimObjective(const ObjectiveSpec& spec, ParameterSpace space)
      : space_(std::move(space)), profile_(spec.profile), spec_(spec) {}

  ObjectiveSample evaluate(const SystemConfig& config, Rng&) override {
    auto t0 = Clock::now();
    ObjectiveSample s;
    s.config = config;
    s.value = shape_value(spec_, mrsim::simulate(profile_, space_, config).total);
    s.duration = seconds_since(t0);
    return s;
  }
  bool reentrant_safe() const override { return true; }

 private:
  ParameterSpace space_;
  mrsim::JobProfile profile_;
  ObjectiveSpec spec_;
};

}  // namespace

const char* to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::synthetic: return "synthetic";
    case ObjectiveKind::process: return "process";
    case ObjectiveKind::mrsim: return "mrsim";
  }
  return "?";
}

const char* to_string(ValueSource v) {
  return v == ValueSource::wall_clock_seconds ? "wall_clock_seconds" : "stdout_last_line";
}

const char* to_string(SampleStatus s) {
  switch (s) {
    case SampleStatus::ok: return "ok";
    case SampleStatus::failed: return "failed";
    case SampleStatus::timeout: return "timeout";
  }
  return "?";
}

const char* to_string(ValueTransform t) { return t == ValueTransform::log ? "log" : "identity"; }

ValueTransform value_transform_from_string(const std::string& s) {
  if (s == "identity") return ValueTransform::identity;
  if (s == "log") return ValueTransform::log;
  throw DomainError("unknown transform '" + s + "'");
}

double shape_value(const ObjectiveSpec& spec, double raw) {
  const double v = raw * spec.value_scale;
  if (spec.transform == ValueTransform::identity) return v;
  return v > 0.0 ? std::log(v) : std::numeric_limits<double>::quiet_NaN();
}

ObjectiveKind objective_kind_from_string(const std::string& s) {
  if (s == "synthetic") return ObjectiveKind::synthetic;
  if (s == "process") return ObjectiveKind::process;
  if (s == "mrsim") return ObjectiveKind::mrsim;
  throw DomainError("unknown objective kind '" + s + "'");
}

ValueSource value_source_from_string(const std::string& s) {
  if (s == "wall_clock_seconds") return ValueSource::wall_clock_seconds;
  if (s == "stdout_last_line") return ValueSource::stdout_last_line;
  throw DomainError("unknown value source '" + s + "'");
}

void ObjectiveSpec::validate(const ParameterSpace& space) const {
  if (!std::isfinite(value_scale) || value_scale == 0.0)
    throw DomainError("value_scale must be finite and nonzero");
  switch (kind) {
    case ObjectiveKind::synthetic:
      find_synthetic(function);
      if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw DomainError("noise_sigma must be a nonnegative real");
      if (!center.empty() && center.size() != space.size())
        throw StructuralError("quadratic center has " + std::to_string(center.size()) +
                              " entries, space has " + std::to_string(space.size()));
      break;
    case ObjectiveKind::process:
      if (command_template.empty()) throw TemplateError("command template is empty");
      for (const auto& name : template_placeholders(command_template))
        if (!space.index_of(name)) throw TemplateError("unknown placeholder {" + name + "}");
      if (!(timeout_seconds > 0.0)) throw DomainError("timeout_seconds must be positive");
      break;
    case ObjectiveKind::mrsim: {
      profile.validate();
      SystemConfig defaults;
      for (const auto& s : space.specs()) defaults.values.push_back(s.default_value);
      mrsim::to_hadoop_config(space, defaults);
      break;
    }
  }
}

ObjectiveSample CallbackObjective::evaluate(const SystemConfig& config, Rng& rng) {
  auto t0 = Clock::now();
  ++calls_;
  ObjectiveSample s;
  s.config = config;
  s.value = fn_(config, rng);
  s.duration = seconds_since(t0);
  if (!std::isfinite(s.value)) {
    s.status = SampleStatus::failed;
    s.diagnostic = "non-finite objective value";
  }
  return s;
}

std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec, const ParameterSpace& space) {
  spec.validate(space);
  switch (spec.kind) {
    case ObjectiveKind::synthetic: return std::make_unique<SyntheticObjective>(spec, space);
    case ObjectiveKind::process: return std::make_unique<ProcessObjective>(spec, space);
    case ObjectiveKind::mrsim: return std::make_unique<MrsimObjective>(spec, space);
  }
  throw DomainError("unknown objective kind");
}

ObjectiveSample evaluate(const ObjectiveSpec& spec, const ParameterSpace& space,
                         const SystemConfig& config, Rng& rng) {
  return make_objective(spec, space)->evaluate(config, rng);
}

}  // namespace spsatune
