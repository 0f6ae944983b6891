// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/engine.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "spsatune/checkpoint.hpp"
#include "spsatune/error.hpp"

namespace spsatune {

namespace {

using Clock = std::chrono::steady_clock;

struct Measurement {
  ObjectiveSample sample;
  int attempts = 0;
};

Measurement measure(Objective& objective, const SystemConfig& config, const Rng& noise,
                    int retries) {
  Measurement m;
  for (int attempt = 1; attempt <= retries + 1; ++attempt) {
    Rng rng = noise;
    m.attempts = attempt;
    try {
      m.sample = objective.evaluate(config, rng);
    } catch (const std::exception& e) {
      m.sample = ObjectiveSample{};
      m.sample.config = config;
      m.sample.status = SampleStatus::failed;
      m.sample.diagnostic = e.what();
    }
    m.sample.attempt = attempt;
    if (m.sample.status == SampleStatus::ok && !std::isfinite(m.sample.value)) {
      m.sample.status = SampleStatus::failed;
      m.sample.diagnostic = "non-finite objective value";
    }
    if (m.sample.status == SampleStatus::ok) break;
  }
  return m;
}

// Substitutes a value for a failed measurement, or throws ObjectiveAbort.
double resolve_failure(const FailurePolicy& policy, double worst_observed,
                       const ObjectiveSample& sample) {
  const std::string why = std::string(to_string(sample.status)) +
                          (sample.diagnostic.empty() ? "" : " (" + sample.diagnostic + ")");
  if (policy.on_exhausted == FailurePolicy::OnExhausted::abort)
    throw ObjectiveAbort("evaluation " + why + " after " + std::to_string(sample.attempt) +
                         " attempt(s)");
  if (policy.penalty_value) return *policy.penalty_value;
  if (!std::isfinite(worst_observed))
    throw ObjectiveAbort("evaluation " + why + " before any successful measurement; no penalty available");
  return worst_observed + (policy.penalty_factor - 1.0) * std::abs(worst_observed);
}

std::filesystem::path emergency_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".emergency";
  return p;
}

// Returns an error message, empty on success.
std::string try_checkpoint(const std::filesystem::path& path, const ParameterSpace& space,
                           const EngineOptions& options, const TunerState& state) {
  try {
    save_checkpoint(path, space, options, state);
    return {};
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (const auto& fallback :
         {emergency_path(path),
          std::filesystem::temp_directory_path() / ("spsatune-" + space.fingerprint() + ".emergency")}) {
      try {
        save_checkpoint(fallback, space, options, state);
        return msg + "; state dumped to " + fallback.string();
      } catch (const std::exception&) {
      }
    }
    return msg + "; emergency dump failed as well";
  }
}

}  // namespace

void EngineOptions::validate(std::size_t dimension) const {
  schedule.validate();
  if (replicates < 1) throw DomainError("replicates must be at least 1");
  if (failure.retries < 0) throw DomainError("retries must be nonnegative");
  if (!(failure.penalty_factor >= 1.0)) throw DomainError("penalty_factor must be >= 1");
  if (!perturbation.strict &&
      !(perturbation.c_lo > 0.0 && perturbation.c_lo <= perturbation.c_hi && perturbation.c_hi <= 1.0))
    throw DomainError("perturbation clamps need 0 < c_lo <= c_hi <= 1");
  if (initial_point) {
    if (initial_point->size() != dimension)
      throw StructuralError("initial_point has dimension " + std::to_string(initial_point->size()) +
                            ", space has " + std::to_string(dimension));
    for (double c : initial_point->coords)
      if (!(c >= 0.0 && c <= 1.0)) throw DomainError("initial_point coordinates must lie in [0,1]");
  }
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::interrupted: return "interrupted";
    case RunStatus::aborted: return "aborted";
    case RunStatus::checkpoint_failed: return "checkpoint_failed";
  }
  return "?";
}

RunResult run(const ParameterSpace& space, Objective& objective, const EngineOptions& options,
              const RunHooks& hooks, std::optional<TunerState> resume_from) {
  options.validate(space.size());
  RunResult result;
  if (resume_from) {
    if (resume_from->theta.size() != space.size())
      throw StructuralError("resumed state does not match the space dimension");
    result.state = std::move(*resume_from);
    result.state.window = options.limits.window;
  } else {
    AlgoPoint theta0 = options.initial_point ? *options.initial_point : map_default(space);
    result.state = TunerState::initial(std::move(theta0), options.seed, options.schedule,
                                       options.limits.window);
  }
  TunerState& state = result.state;

  const auto magnitudes = perturbation_magnitudes(space, options.perturbation);
  const std::size_t k = options.replicates;
  const bool parallel = options.parallel && objective.reentrant_safe();

  auto finish = [&](RunStatus status, std::string message) {
    result.status = status;
    result.message = std::move(message);
    if (hooks.checkpoint_path && status != RunStatus::checkpoint_failed) {
      std::string err = try_checkpoint(*hooks.checkpoint_path, space, options, state);
      if (!err.empty()) {
        result.status = RunStatus::checkpoint_failed;
        result.message = err;
      }
    }
    return std::move(result);
  };

  for (;;) {
    if (hooks.stop && hooks.stop->load()) return finish(RunStatus::interrupted, "stop requested");
    Decision d = should_terminate(state, options.limits);
    if (d == Decision::budget_exhausted) return finish(RunStatus::budget_exhausted, {});
    if (d == Decision::converged) return finish(RunStatus::converged, {});

    const auto t0 = Clock::now();
    TunerState next = state;

    // Perturbations are drawn up front in replicate order so that the
    // trajectory does not depend on how evaluations are scheduled.
    std::vector<Perturbation> perts;
    std::vector<SystemConfig> configs;
    const SystemConfig base = map_to_system(state.theta, space);
    for (std::size_t r = 0; r < k; ++r) {
      perts.push_back(gen_perturbation(magnitudes, next.rng));
      AlgoPoint probe = state.theta;
      for (std::size_t i = 0; i < probe.size(); ++i) probe.coords[i] += perts[r].signed_step[i];
      configs.push_back(base);
      configs.push_back(map_to_system(project(probe), space));
    }

    // Evaluation j gets its own noise stream keyed by its global index.
    std::vector<Measurement> measured(configs.size());
    auto noise_for = [&](std::size_t j) { return state.rng.split(state.eval_count + j + 1); };
    if (parallel) {
      std::vector<std::future<Measurement>> futures;
      for (std::size_t j = 0; j < configs.size(); ++j)
        futures.push_back(std::async(std::launch::async, measure, std::ref(objective),
                                     std::cref(configs[j]), noise_for(j), options.failure.retries));
      for (std::size_t j = 0; j < configs.size(); ++j) measured[j] = futures[j].get();
    } else {
      for (std::size_t j = 0; j < configs.size(); ++j)
        measured[j] = measure(objective, configs[j], noise_for(j), options.failure.retries);
    }

    std::vector<double> values(configs.size());
    try {
      for (std::size_t j = 0; j < configs.size(); ++j) {
        const auto& m = measured[j];
        next.attempt_count += static_cast<std::uint64_t>(m.attempts);
        if (m.sample.status == SampleStatus::ok) {
          values[j] = m.sample.value;
          next.worst_observed = std::max(next.worst_observed, values[j]);
        } else {
          values[j] = resolve_failure(options.failure, next.worst_observed, m.sample);
        }
      }
    } catch (const ObjectiveAbort& e) {
      return finish(RunStatus::aborted, e.what());
    }

    std::vector<GradientEstimate> estimates;
    IterationRecord rec;
    for (std::size_t r = 0; r < k; ++r) {
      estimates.push_back(estimate_gradient(values[2 * r], values[2 * r + 1], perts[r]));
      rec.f_perturbed.push_back(values[2 * r + 1]);
    }
    const GradientEstimate grad = average_gradient(estimates);

    rec.iteration = state.iteration;
    rec.theta = state.theta;
    rec.system_config = base;
    rec.f_base = grad.f_base;
    rec.grad_norm = grad.norm();
    rec.alpha = next.schedule.alpha(state.iteration);

    next = spsa_step(next, grad);
    rec.eval_count = next.eval_count;
    rec.best_value = next.best_value;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    state = std::move(next);
    if (hooks.on_iteration) hooks.on_iteration(rec);
    result.trace.push_back(std::move(rec));

    if (hooks.checkpoint_path && options.checkpoint_every > 0 &&
        state.iteration % options.checkpoint_every == 0) {
      std::string err = try_checkpoint(*hooks.checkpoint_path, space, options, state);
      if (!err.empty()) return finish(RunStatus::checkpoint_failed, err);
    }
  }
}

}  // namespace spsatune
