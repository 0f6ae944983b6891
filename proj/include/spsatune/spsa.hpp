// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "spsatune/param_space.hpp"
#include "spsatune/rng.hpp"

namespace spsatune {

/// How per-dimension perturbation magnitudes are derived from a space.
///
/// The base magnitude of coordinate i is one resolution unit expressed in
/// normalized coordinates (1/span for integers). Outside strict mode it is
/// clamped to [c_lo, c_hi].
struct PerturbationOptions {
  bool strict = false;
  double c_lo = 0.01;
  double c_hi = 0.25;

  bool operator==(const PerturbationOptions&) const = default;
};

/// A signed probe displacement: signed_step[i] = sign_i * magnitudes[i].
struct Perturbation {
  std::vector<double> signed_step;
  std::vector<double> magnitudes;

  std::size_t size() const noexcept { return signed_step.size(); }
};

std::vector<double> perturbation_magnitudes(const ParameterSpace& space,
                                            const PerturbationOptions& options);

/// Draws independent fair signs, one per coordinate, in coordinate order.
Perturbation gen_perturbation(std::span<const double> magnitudes, Rng& rng);
Perturbation gen_perturbation(const ParameterSpace& space, const PerturbationOptions& options,
                              Rng& rng);

enum class ScheduleKind { constant, decaying };

/// Gain sequence. Decaying: alpha_n = alpha0 / (n + 1 + offset)^decay_exponent,
/// with the exponent in (0.5, 1] so the gains sum to infinity while their
/// squares stay summable.
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double alpha0 = 0.01;
  double decay_exponent = 0.602;
  double offset = 0.0;

  static StepSchedule constant(double alpha0);
  static StepSchedule decaying(double alpha0, double exponent, double offset = 0.0);

  void validate() const;
  double alpha(std::uint64_t n) const;

  bool operator==(const StepSchedule&) const = default;
};

struct GradientEstimate {
  std::vector<double> values;
  double f_base = 0.0;
  double f_perturbed = 0.0;
  std::size_t replicates = 1;

  double norm() const;
};

/// One-sided simultaneous-perturbation estimate: every coordinate shares the
/// numerator f_perturbed - f_base and divides by its own signed step.
GradientEstimate estimate_gradient(double f_base, double f_perturbed, const Perturbation& pert);

/// Coordinate-wise mean of independent estimates taken at the same point.
GradientEstimate average_gradient(std::span<const GradientEstimate> estimates);

/// Complete resumable optimizer state.
struct TunerState {
  std::uint64_t iteration = 0;
  AlgoPoint theta;
  Rng rng;
  StepSchedule schedule;
  AlgoPoint best_theta;
  double best_value = std::numeric_limits<double>::infinity();
  std::deque<double> history;  // most recent averaged-gradient norms, oldest first
  std::size_t window = 5;
  std::uint64_t eval_count = 0;
  std::uint64_t attempt_count = 0;  // process launches, including retries
  // Largest successful measurement so far; feeds the penalty failure policy.
  double worst_observed = -std::numeric_limits<double>::infinity();

  static TunerState initial(AlgoPoint theta0, std::uint64_t seed, StepSchedule schedule,
                            std::size_t window);

  bool operator==(const TunerState&) const = default;
};

/// theta <- project(theta - alpha_n * grad); advances the iteration, records
/// the gradient norm and counts 2 * replicates evaluations.
TunerState spsa_step(const TunerState& state, const GradientEstimate& grad);

struct TerminationLimits {
  std::uint64_t max_iterations = 100;
  double grad_tol = 0.0;  // <= 0 disables the convergence test
  std::size_t window = 5;

  bool operator==(const TerminationLimits&) const = default;
};

enum class Decision { continue_run, converged, budget_exhausted };

const char* to_string(Decision d);

/// Budget first; otherwise converged once the window of recent gradient
/// norms is full and its spread is below grad_tol.
Decision should_terminate(const TunerState& state, const TerminationLimits& limits);

/// Default tolerance on gradient-norm spread: 1e-3 * sqrt(n).
double default_grad_tol(std::size_t dimension);

}  // namespace spsatune
