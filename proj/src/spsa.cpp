// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/spsa.hpp"

#include <algorithm>
#include <cmath>

#include "spsatune/error.hpp"

namespace spsatune {

std::vector<double> perturbation_magnitudes(const ParameterSpace& space,
                                            const PerturbationOptions& options) {
  if (!options.strict && !(options.c_lo > 0.0 && options.c_lo <= options.c_hi))
    throw DomainError("perturbation clamps need 0 < c_lo <= c_hi");
  std::vector<double> out;
  out.reserve(space.size());
  for (const auto& spec : space.specs()) {
    // One resolution unit in normalized coordinates. Boolean and categorical
    // values own 1/count of the unit interval each; a probe of one bin width
    // from a bin center always lands in the neighbouring bin, so the cap does
    // not apply to them.
    const bool binned = spec.kind == ParamKind::boolean || spec.kind == ParamKind::categorical;
    const double unit = binned ? spec.resolution / (spec.span() + 1.0) : spec.resolution / spec.span();
    if (options.strict) out.push_back(unit);
    else if (binned) out.push_back(std::max(unit, options.c_lo));
    else out.push_back(std::clamp(unit, options.c_lo, options.c_hi));
  }
  return out;
}

Perturbation gen_perturbation(std::span<const double> magnitudes, Rng& rng) {
  Perturbation p;
  p.magnitudes.assign(magnitudes.begin(), magnitudes.end());
  p.signed_step.reserve(magnitudes.size());
  for (double c : magnitudes) p.signed_step.push_back(rng.sign() * c);
  return p;
}

Perturbation gen_perturbation(const ParameterSpace& space, const PerturbationOptions& options,
                              Rng& rng) {
  auto mags = perturbation_magnitudes(space, options);
  return gen_perturbation(mags, rng);
}

StepSchedule StepSchedule::constant(double alpha0) {
  StepSchedule s;
  s.kind = ScheduleKind::constant;
  s.alpha0 = alpha0;
  s.validate();
  return s;
}

StepSchedule StepSchedule::decaying(double alpha0, double exponent, double offset) {
  StepSchedule s;
  s.kind = ScheduleKind::decaying;
  s.alpha0 = alpha0;
  s.decay_exponent = exponent;
  s.offset = offset;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw DomainError("alpha0 must be positive");
  if (kind == ScheduleKind::decaying) {
    if (!(decay_exponent > 0.5 && decay_exponent <= 1.0))
      throw DomainError("decay_exponent must lie in (0.5, 1]");
    if (!(offset >= 0.0)) throw DomainError("offset must be nonnegative");
  }
}

double StepSchedule::alpha(std::uint64_t n) const {
  if (kind == ScheduleKind::constant) return alpha0;
  return alpha0 / std::pow(static_cast<double>(n) + 1.0 + offset, decay_exponent);
}

double GradientEstimate::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

GradientEstimate estimate_gradient(double f_base, double f_perturbed, const Perturbation& pert) {
  if (!std::isfinite(f_base) || !std::isfinite(f_perturbed))
    throw NumericError("gradient estimate needs finite measurements");
  GradientEstimate g;
  g.f_base = f_base;
  g.f_perturbed = f_perturbed;
  g.replicates = 1;
  const double diff = f_perturbed - f_base;
  g.values.reserve(pert.size());
  for (double step : pert.signed_step) g.values.push_back(diff / step);
  return g;
}

GradientEstimate average_gradient(std::span<const GradientEstimate> estimates) {
  if (estimates.empty()) throw StructuralError("cannot average an empty list of estimates");
  if (estimates.size() == 1) return estimates.front();
  const std::size_t n = estimates.front().values.size();
  GradientEstimate out;
  out.values.assign(n, 0.0);
  for (const auto& e : estimates) {
    if (e.values.size() != n) throw StructuralError("estimates differ in dimension");
    for (std::size_t i = 0; i < n; ++i) out.values[i] += e.values[i];
    out.f_base += e.f_base;
    out.f_perturbed += e.f_perturbed;
  }
  const double k = static_cast<double>(estimates.size());
  for (double& v : out.values) v /= k;
  out.f_base /= k;
  out.f_perturbed /= k;
  out.replicates = estimates.size();
  return out;
}

TunerState TunerState::initial(AlgoPoint theta0, std::uint64_t seed, StepSchedule schedule,
                               std::size_t window) {
  TunerState s;
  s.theta = project(theta0);
  s.best_theta = s.theta;
  s.rng = Rng(seed);
  s.schedule = schedule;
  s.window = window;
  return s;
}

TunerState spsa_step(const TunerState& state, const GradientEstimate& grad) {
  if (grad.values.size() != state.theta.size())
    throw StructuralError("gradient dimension does not match the iterate");
  TunerState next = state;
  const double alpha = state.schedule.alpha(state.iteration);
  AlgoPoint moved = state.theta;
  for (std::size_t i = 0; i < moved.coords.size(); ++i) moved.coords[i] -= alpha * grad.values[i];
  next.theta = project(moved);

  next.history.push_back(grad.norm());
  while (next.history.size() > std::max<std::size_t>(next.window, 1)) next.history.pop_front();

  if (grad.f_base < next.best_value) {
    next.best_value = grad.f_base;
    next.best_theta = state.theta;
  }
  next.iteration = state.iteration + 1;
  next.eval_count = state.eval_count + 2 * grad.replicates;
  return next;
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::continue_run: return "continue";
    case Decision::converged: return "converged";
    case Decision::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

Decision should_terminate(const TunerState& state, const TerminationLimits& limits) {
  if (state.iteration >= limits.max_iterations) return Decision::budget_exhausted;
  if (limits.grad_tol > 0.0 && limits.window > 0 && state.history.size() >= limits.window) {
    auto first = state.history.end() - static_cast<std::ptrdiff_t>(limits.window);
    auto [lo, hi] = std::minmax_element(first, state.history.end());
    if (*hi - *lo < limits.grad_tol) return Decision::converged;
  }
  return Decision::continue_run;
}

double default_grad_tol(std::size_t dimension) {
  return 1e-3 * std::sqrt(static_cast<double>(dimension));
}

}  // namespace spsatune
