// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spsatune/objective.hpp"
#include "spsatune/param_space.hpp"

namespace spsatune {

/// Placeholder names ({name}) in order of appearance.
std::vector<std::string> template_placeholders(const std::string& tmpl);

/// Splits `tmpl` into arguments (whitespace separated, single quotes group
/// literally) and substitutes each {name} with the rendered raw value.
/// No shell is involved.
std::vector<std::string> render_command(const std::string& tmpl, const SystemConfig& config,
                                        const ParameterSpace& space);

/// SPSA_PARAM_ followed by the upper-cased name with non-alphanumerics as '_'.
std::string param_env_name(const std::string& param_name);

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool launch_failed = false;
  std::string stdout_text;
  double wall_seconds = 0.0;
  std::string error;
};

/// Runs argv[0] (PATH lookup) in its own process group with stdout captured
/// and stderr inherited. On timeout the whole group is killed.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& extra_env,
                          double timeout_seconds);

/// Last non-empty line of `text` parsed as a finite real.
std::optional<double> parse_last_line_value(const std::string& text);

class ProcessObjective : public Objective {
 public:
  ProcessObjective(ObjectiveSpec spec, ParameterSpace space);

  ObjectiveSample evaluate(const SystemConfig& config, Rng& rng) override;
  bool reentrant_safe() const override { return spec_.reentrant_safe; }
  std::uint64_t launches() const noexcept { return launches_.load(); }

 private:
  ObjectiveSpec spec_;
  ParameterSpace space_;
  std::atomic<std::uint64_t> launches_{0};
};

}  // namespace spsatune
