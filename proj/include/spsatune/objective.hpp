// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spsatune/mrsim.hpp"
#include "spsatune/param_space.hpp"
#include "spsatune/rng.hpp"

namespace spsatune {

enum class ObjectiveKind { synthetic, process, mrsim };
enum class ValueSource { wall_clock_seconds, stdout_last_line };
enum class SampleStatus { ok, failed, timeout };
enum class ValueTransform { identity, log };

const char* to_string(ObjectiveKind k);
const char* to_string(ValueSource v);
const char* to_string(SampleStatus s);
const char* to_string(ValueTransform t);
ObjectiveKind objective_kind_from_string(const std::string& s);
ValueSource value_source_from_string(const std::string& s);
ValueTransform value_transform_from_string(const std::string& s);

/// Declarative objective description. Lower values are better everywhere;
/// `value_scale` multiplies every measurement (use -1 for throughput-style
/// metrics) and `transform` is applied after scaling. The log transform
/// keeps the minimizer and evens out gradient magnitudes on objectives that
/// span orders of magnitude; it needs positive scaled values.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::synthetic;

  // synthetic
  std::string function = "quadratic";
  std::vector<double> center;  // shifted quadratic only; empty means 0.3 everywhere
  double noise_sigma = 0.0;

  // process
  std::string command_template;
  ValueSource value_source = ValueSource::wall_clock_seconds;
  double timeout_seconds = 600.0;
  bool export_env = true;  // SPSA_PARAM_<NAME> variables

  // mrsim
  mrsim::JobProfile profile;

  double value_scale = 1.0;
  ValueTransform transform = ValueTransform::identity;
  bool reentrant_safe = false;  // process only; the other kinds always are

  /// Throws ConfigError-free DomainError/TemplateError/LookupError on misuse.
  void validate(const ParameterSpace& space) const;
};

struct ObjectiveSample {
  SystemConfig config;
  double value = 0.0;
  double duration = 0.0;  // wall-clock seconds
  SampleStatus status = SampleStatus::ok;
  int attempt = 1;
  std::string diagnostic;
};

/// A black-box measurement source. Implementations that report
/// reentrant_safe() may be called from several threads at once.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual ObjectiveSample evaluate(const SystemConfig& config, Rng& rng) = 0;
  virtual bool reentrant_safe() const = 0;
};

/// Wraps a callable; handy for tests and embedding.
class CallbackObjective : public Objective {
 public:
  using Fn = std::function<double(const SystemConfig&, Rng&)>;
  explicit CallbackObjective(Fn fn, bool reentrant = true)
      : fn_(std::move(fn)), reentrant_(reentrant) {}

  ObjectiveSample evaluate(const SystemConfig& config, Rng& rng) override;
  bool reentrant_safe() const override { return reentrant_; }
  std::uint64_t calls() const noexcept { return calls_.load(); }

 private:
  Fn fn_;
  bool reentrant_;
  std::atomic<std::uint64_t> calls_{0};
};

std::unique_ptr<Objective> make_objective(const ObjectiveSpec& spec, const ParameterSpace& space);

/// Scales and transforms a raw measurement. Returns NaN when the log
/// transform meets a nonpositive value, which the engine treats as a failure.
double shape_value(const ObjectiveSpec& spec, double raw);

/// One-shot evaluation through make_objective.
ObjectiveSample evaluate(const ObjectiveSpec& spec, const ParameterSpace& space,
                         const SystemConfig& config, Rng& rng);

}  // namespace spsatune
