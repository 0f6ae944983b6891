// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spsatune/objective.hpp"
#include "spsatune/param_space.hpp"
#include "spsatune/spsa.hpp"

namespace spsatune {

/// What to do when an evaluation fails or times out: retry up to `retries`
/// times, then substitute a penalty or abort the run. The default penalty is
/// the worst successful value seen so far, inflated by `penalty_factor`.
struct FailurePolicy {
  enum class OnExhausted { penalty, abort };

  int retries = 2;
  OnExhausted on_exhausted = OnExhausted::penalty;
  std::optional<double> penalty_value;
  double penalty_factor = 1.5;

  bool operator==(const FailurePolicy&) const = default;
};

struct EngineOptions {
  StepSchedule schedule = StepSchedule::constant(0.01);
  std::size_t replicates = 1;
  TerminationLimits limits;
  std::uint64_t seed = 0;
  std::uint64_t checkpoint_every = 0;  // 0: only the final checkpoint
  FailurePolicy failure;
  PerturbationOptions perturbation;
  bool parallel = false;  // honored only for reentrant-safe objectives
  std::optional<AlgoPoint> initial_point;

  void validate(std::size_t dimension) const;
  bool operator==(const EngineOptions&) const = default;
};

/// One row of the run trace.
struct IterationRecord {
  std::uint64_t iteration = 0;
  AlgoPoint theta;
  SystemConfig system_config;
  double f_base = 0.0;               // mean over replicates
  std::vector<double> f_perturbed;   // one per replicate
  double grad_norm = 0.0;
  double alpha = 0.0;
  std::uint64_t eval_count = 0;      // cumulative, after this iteration
  double best_value = 0.0;
  double wall_ms = 0.0;
};

enum class RunStatus { converged, budget_exhausted, interrupted, aborted, checkpoint_failed };

const char* to_string(RunStatus s);

struct RunHooks {
  std::function<void(const IterationRecord&)> on_iteration;
  std::optional<std::filesystem::path> checkpoint_path;
  const std::atomic<bool>* stop = nullptr;
};

struct RunResult {
  TunerState state;
  std::vector<IterationRecord> trace;
  RunStatus status = RunStatus::budget_exhausted;
  std::string message;
};

/// Runs projected SPSA from `resume_from` (or from the initial point / the
/// space defaults) until a limit is hit. Each iteration draws `replicates`
/// perturbations, measures f(theta) and f(theta + step) once per replicate
/// (2K evaluations), averages the estimates and takes one projected step.
/// The trajectory depends only on the seed, the options and the objective.
RunResult run(const ParameterSpace& space, Objective& objective, const EngineOptions& options,
              const RunHooks& hooks = {}, std::optional<TunerState> resume_from = std::nullopt);

}  // namespace spsatune
