// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "spsatune/checkpoint.hpp"
#include "spsatune/engine.hpp"
#include "spsatune/error.hpp"
#include "spsatune/trace.hpp"
#include "test_util.hpp"

namespace spsatune {
namespace {

using testing::TempDir;

ParameterSpace unit_square(double d0 = 0.8, double d1 = 0.1) {
  return ParameterSpace({ParameterSpec::real("x", 0, 1, d0, 0.01), ParameterSpec::real("y", 0, 1, d1, 0.01)});
}

double shifted(const SystemConfig& c) {
  double s = 0;
  for (double v : c.values) s += (v - 0.3) * (v - 0.3);
  return s;
}

CallbackObjective quadratic_objective() {
  return CallbackObjective([](const SystemConfig& c, Rng&) { return shifted(c); });
}

EngineOptions options(std::uint64_t seed, std::uint64_t iters, double alpha = 0.05) {
  EngineOptions o;
  o.seed = seed;
  o.schedule = StepSchedule::constant(alpha);
  o.limits.max_iterations = iters;
  return o;
}

std::vector<std::string> lines_without_wall(const std::vector<IterationRecord>& trace) {
  std::vector<std::string> out;
  for (const auto& r : trace) out.push_back(strip_wall_ms(format_record(r)));
  return out;
}

TEST(Run, ConvergesOnNoiselessQuadratic) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto r = run(space, obj, options(3, 200));
  EXPECT_EQ(r.status, RunStatus::budget_exhausted);
  EXPECT_LT(shifted(map_to_system(r.state.theta, space)), 1e-3);
}

TEST(Run, ZeroIterationsReturnsStart) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto r = run(space, obj, options(3, 0));
  EXPECT_EQ(r.state.theta, map_default(space));
  EXPECT_EQ(r.state.eval_count, 0u);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(obj.calls(), 0u);
}

TEST(Run, DeterministicForSameSeed) {
  auto space = unit_square();
  auto a = quadratic_objective(), b = quadratic_objective();
  auto ra = run(space, a, options(11, 50));
  auto rb = run(space, b, options(11, 50));
  EXPECT_EQ(lines_without_wall(ra.trace), lines_without_wall(rb.trace));
  EXPECT_EQ(ra.state, rb.state);
}

TEST(Run, ExplicitInitialPoint) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto o = options(1, 1);
  o.initial_point = AlgoPoint{{0.2, 0.9}};
  auto r = run(space, obj, o);
  EXPECT_EQ(r.trace.front().theta.coords, (std::vector<double>{0.2, 0.9}));
  o.initial_point = AlgoPoint{{0.2}};
  EXPECT_THROW(run(space, obj, o), StructuralError);
}

TEST(Run, TraceInvariants) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto o = options(4, 30);
  o.replicates = 3;
  auto r = run(space, obj, o);
  ASSERT_EQ(r.trace.size(), 30u);
  double best = INFINITY;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& row = r.trace[i];
    EXPECT_EQ(row.iteration, i);
    EXPECT_EQ(row.eval_count, 6 * (i + 1));
    EXPECT_EQ(row.f_perturbed.size(), 3u);
    best = std::min(best, row.f_base);
    EXPECT_EQ(row.best_value, best);
    for (double c : row.theta.coords) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
  }
  EXPECT_EQ(obj.calls(), 180u);
}

TEST(Run, ParallelMatchesSequential) {
  auto space = unit_square();
  auto noisy = [](const SystemConfig& c, Rng& rng) { return shifted(c) + 0.01 * rng.normal(); };
  CallbackObjective a(noisy), b(noisy);
  auto o = options(8, 25);
  o.replicates = 4;
  auto seq = run(space, a, o);
  o.parallel = true;
  auto par = run(space, b, o);
  EXPECT_EQ(lines_without_wall(seq.trace), lines_without_wall(par.trace));
}

TEST(Run, StopsWhenGradientFlattens) {
  auto space = unit_square(0.3, 0.3);
  CallbackObjective flat([](const SystemConfig&, Rng&) { return 1.0; });
  auto o = options(1, 100);
  o.limits.grad_tol = 1e-3;
  auto r = run(space, flat, o);
  EXPECT_EQ(r.status, RunStatus::converged);
  EXPECT_EQ(r.state.iteration, 5u);
}

TEST(Run, StopFlagInterrupts) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  std::atomic<bool> stop{false};
  RunHooks hooks;
  hooks.stop = &stop;
  hooks.on_iteration = [&](const IterationRecord& r) {
    if (r.iteration == 4) stop = true;
  };
  auto r = run(space, obj, options(1, 100), hooks);
  EXPECT_EQ(r.status, RunStatus::interrupted);
  EXPECT_EQ(r.state.iteration, 5u);
}

// Failure policy.

TEST(FailurePolicy, RetriesThenSucceeds) {
  auto space = unit_square();
  int calls = 0;
  CallbackObjective flaky([&](const SystemConfig& c, Rng&) {
    return ++calls % 2 == 1 ? NAN : shifted(c);
  });
  auto r = run(space, flaky, options(1, 3));
  EXPECT_EQ(r.status, RunStatus::budget_exhausted);
  EXPECT_EQ(r.state.eval_count, 6u);
  EXPECT_EQ(r.state.attempt_count, 12u);
}

TEST(FailurePolicy, PenaltyFromWorstObserved) {
  auto space = unit_square();
  int calls = 0;
  // First evaluation succeeds with 2.0, the probe then fails every attempt.
  CallbackObjective obj([&](const SystemConfig&, Rng&) { return ++calls == 1 ? 2.0 : NAN; });
  auto o = options(1, 1);
  auto r = run(space, obj, o);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].f_base, 2.0);
  EXPECT_EQ(r.trace[0].f_perturbed[0], 3.0);
  EXPECT_EQ(calls, 1 + 3);
}

TEST(FailurePolicy, FixedPenaltyAndAbort) {
  auto space = unit_square();
  CallbackObjective broken([](const SystemConfig&, Rng&) -> double { throw std::runtime_error("boom"); });
  auto o = options(1, 2);
  o.failure.retries = 0;
  auto r = run(space, broken, o);
  EXPECT_EQ(r.status, RunStatus::aborted);  // nothing observed, no fixed penalty
  EXPECT_NE(r.message.find("boom"), std::string::npos);

  o.failure.penalty_value = 100.0;
  r = run(space, broken, o);
  EXPECT_EQ(r.status, RunStatus::budget_exhausted);
  EXPECT_EQ(r.trace[0].f_base, 100.0);

  o.failure.on_exhausted = FailurePolicy::OnExhausted::abort;
  r = run(space, broken, o);
  EXPECT_EQ(r.status, RunStatus::aborted);
  EXPECT_TRUE(r.trace.empty());
}

// Checkpoints.

TEST(Checkpoint, SaveLoadRoundTrip) {
  TempDir dir;
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto o = options(9, 7);
  o.replicates = 2;
  auto r = run(space, obj, o);
  save_checkpoint(dir / "c.json", space, o, r.state);
  Checkpoint cp = load_checkpoint(dir / "c.json");
  EXPECT_EQ(cp.format_version, kCheckpointFormatVersion);
  EXPECT_EQ(cp.space, space);
  EXPECT_EQ(cp.options, o);
  EXPECT_EQ(cp.state, r.state);
}

TEST(Checkpoint, InitialStateWithInfinitiesRoundTrips) {
  TempDir dir;
  auto space = unit_square();
  auto state = TunerState::initial(map_default(space), 5, StepSchedule::decaying(0.1, 0.602, 2), 5);
  save_checkpoint(dir / "c.json", space, options(5, 1), state);
  EXPECT_EQ(load_checkpoint(dir / "c.json").state, state);
}

TEST(Checkpoint, SplitRunEqualsUnsplitRun) {
  TempDir dir;
  auto space = unit_square();
  auto noisy = [](const SystemConfig& c, Rng& rng) { return shifted(c) + 0.02 * rng.normal(); };
  CallbackObjective a(noisy), b(noisy);
  auto full = run(space, a, options(21, 20));

  RunHooks hooks;
  hooks.checkpoint_path = dir / "mid.json";
  auto first = run(space, b, options(21, 10), hooks);
  Checkpoint cp = load_checkpoint(dir / "mid.json");
  auto second = run(space, b, options(21, 20), {}, cp.state);

  auto joined = lines_without_wall(first.trace);
  for (auto& l : lines_without_wall(second.trace)) joined.push_back(l);
  EXPECT_EQ(joined, lines_without_wall(full.trace));
  EXPECT_EQ(second.state, full.state);
}

TEST(Checkpoint, PeriodicCheckpointsFollowTheRun) {
  TempDir dir;
  auto space = unit_square();
  auto obj = quadratic_objective();
  auto o = options(2, 9);
  o.checkpoint_every = 4;
  RunHooks hooks;
  std::vector<std::uint64_t> seen;
  hooks.checkpoint_path = dir / "p.json";
  hooks.on_iteration = [&](const IterationRecord& r) {
    if (r.iteration == 5) seen.push_back(load_checkpoint(dir / "p.json").state.iteration);
  };
  run(space, obj, o, hooks);
  EXPECT_EQ(seen, std::vector<std::uint64_t>{4});
  EXPECT_EQ(load_checkpoint(dir / "p.json").state.iteration, 9u);
}

TEST(Checkpoint, TruncatedOrMissingFileFailsCleanly) {
  TempDir dir;
  auto space = unit_square();
  auto state = TunerState::initial(map_default(space), 5, StepSchedule::constant(0.01), 5);
  save_checkpoint(dir / "c.json", space, options(5, 1), state);
  std::string text = testing::read_file(dir / "c.json");
  testing::write_file(dir / "t.json", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(dir / "t.json"), CheckpointError);
  EXPECT_THROW(load_checkpoint(dir / "missing.json"), CheckpointError);
}

TEST(Checkpoint, RejectsOtherFormatVersions) {
  TempDir dir;
  auto space = unit_square();
  auto state = TunerState::initial(map_default(space), 5, StepSchedule::constant(0.01), 5);
  save_checkpoint(dir / "c.json", space, options(5, 1), state);
  std::string text = testing::read_file(dir / "c.json");
  const std::string key = "\"format_version\": 1";
  auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, key.size(), "\"format_version\": 99");
  testing::write_file(dir / "v.json", text);
  EXPECT_THROW(load_checkpoint(dir / "v.json"), IncompatibleVersionError);
}

TEST(Checkpoint, UnwritablePathFallsBackToEmergencyDump) {
  auto space = unit_square();
  auto obj = quadratic_objective();
  RunHooks hooks;
  hooks.checkpoint_path = "/proc/definitely/not/writable/c.json";
  auto r = run(space, obj, options(1, 2), hooks);
  EXPECT_EQ(r.status, RunStatus::checkpoint_failed);
  EXPECT_NE(r.message.find("dumped to"), std::string::npos) << r.message;
}

}  // namespace
}  // namespace spsatune
