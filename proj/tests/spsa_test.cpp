// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "spsatune/error.hpp"
#include "spsatune/fd_oracle.hpp"
#include "spsatune/spsa.hpp"

namespace spsatune {
namespace {

Perturbation fixed_step(std::vector<double> signed_step) {
  Perturbation p;
  for (double s : signed_step) p.magnitudes.push_back(std::abs(s));
  p.signed_step = std::move(signed_step);
  return p;
}

TEST(Perturbation, IntegerMagnitudeIsOneOverSpan) {
  ParameterSpace s({ParameterSpec::integer("n", 0, 100, 50)});
  Rng rng(1);
  auto p = gen_perturbation(s, {}, rng);
  EXPECT_DOUBLE_EQ(p.magnitudes[0], 0.01);
  EXPECT_DOUBLE_EQ(std::abs(p.signed_step[0]), 0.01);
}

TEST(Perturbation, ClampsAndStrictMode) {
  ParameterSpace s({ParameterSpec::real("r", 0, 1, 0.5, 0.5), ParameterSpec::integer("n", 0, 1000, 1),
                    ParameterSpec::boolean("b", false)});
  auto clamped = perturbation_magnitudes(s, {});
  EXPECT_DOUBLE_EQ(clamped[0], 0.25);
  EXPECT_DOUBLE_EQ(clamped[1], 0.01);
  EXPECT_DOUBLE_EQ(clamped[2], 0.5);  // one bin width
  auto strict = perturbation_magnitudes(s, {.strict = true});
  EXPECT_DOUBLE_EQ(strict[0], 0.5);
  EXPECT_DOUBLE_EQ(strict[1], 0.001);
}

TEST(Perturbation, SignsAreFairAndIndependent) {
  const std::size_t n = 4, draws = 100000;
  std::vector<double> mags(n, 0.1);
  Rng rng(2024);
  std::vector<double> sum(n, 0.0), cross(n * n, 0.0);
  for (std::size_t t = 0; t < draws; ++t) {
    auto p = gen_perturbation(mags, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double si = p.signed_step[i] / 0.1;
      ASSERT_EQ(std::abs(si), 1.0);
      sum[i] += si;
      for (std::size_t j = 0; j < n; ++j) cross[i * n + j] += si * p.signed_step[j] / 0.1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_LT(std::abs(sum[i] / draws), 0.02);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double mi = sum[i] / draws, mj = sum[j] / draws;
      const double corr = (cross[i * n + j] / draws - mi * mj) /
                          std::sqrt((1 - mi * mi) * (1 - mj * mj));
      EXPECT_LT(std::abs(corr), 0.02) << i << "," << j;
    }
  }
}

TEST(Perturbation, SameSeedSameSigns) {
  std::vector<double> mags(7, 0.05);
  Rng a(99), b(99);
  for (int t = 0; t < 1000; ++t)
    EXPECT_EQ(gen_perturbation(mags, a).signed_step, gen_perturbation(mags, b).signed_step);
}

TEST(EstimateGradient, Examples) {
  auto g = estimate_gradient(0.0, 0.02, fixed_step({0.1, -0.1}));
  EXPECT_DOUBLE_EQ(g.values[0], 0.2);
  EXPECT_DOUBLE_EQ(g.values[1], -0.2);
  auto z = estimate_gradient(1.5, 1.5, fixed_step({0.1, -0.3}));
  EXPECT_EQ(z.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(estimate_gradient(std::nan(""), 1.0, fixed_step({0.1})), NumericError);
}

TEST(EstimateGradient, SignEnumerationIsExactOnQuadratic) {
  // f = x0^2 + x1^2 at (0.5, 0.5), c = 0.1: the four sign patterns average
  // to the true gradient (1, 1).
  auto f = [](double a, double b) { return a * a + b * b; };
  std::vector<double> mean(2, 0.0);
  for (int s0 : {-1, 1})
    for (int s1 : {-1, 1}) {
      auto p = fixed_step({0.1 * s0, 0.1 * s1});
      auto g = estimate_gradient(f(0.5, 0.5), f(0.5 + p.signed_step[0], 0.5 + p.signed_step[1]), p);
      mean[0] += g.values[0] / 4;
      mean[1] += g.values[1] / 4;
    }
  EXPECT_NEAR(mean[0], 1.0, 1e-12);
  EXPECT_NEAR(mean[1], 1.0, 1e-12);
}

TEST(AverageGradient, Examples) {
  GradientEstimate a{{1, -1}, 0, 0, 1}, b{{3, 1}, 0, 0, 1};
  std::vector<GradientEstimate> one{a};
  EXPECT_EQ(average_gradient(one).values, a.values);
  std::vector<GradientEstimate> two{a, b};
  auto avg = average_gradient(two);
  EXPECT_EQ(avg.values, (std::vector<double>{2, 0}));
  EXPECT_EQ(avg.replicates, 2u);
  EXPECT_THROW(average_gradient(std::span<const GradientEstimate>{}), StructuralError);
}

TEST(AverageGradient, FourReplicatesQuarterTheVariance) {
  // Noisy quadratic in 3D; compare the variance of coordinate 0 for single
  // estimates against 4-replicate averages.
  const std::vector<double> theta{0.4, 0.6, 0.2};
  auto f = [](const std::vector<double>& x, Rng& noise) {
    double s = 0;
    for (double v : x) s += (v - 0.3) * (v - 0.3);
    return s + 0.01 * noise.normal();
  };
  std::vector<double> mags(3, 0.05);
  Rng rng(5);
  auto one_estimate = [&] {
    auto p = gen_perturbation(mags, rng);
    std::vector<double> probe = theta;
    for (int i = 0; i < 3; ++i) probe[i] += p.signed_step[i];
    return estimate_gradient(f(theta, rng), f(probe, rng), p);
  };
  auto variance = [](const std::vector<double>& v) {
    double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size(), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  const int trials = 10000;
  std::vector<double> single, averaged;
  for (int t = 0; t < trials; ++t) single.push_back(one_estimate().values[0]);
  for (int t = 0; t < trials; ++t) {
    std::vector<GradientEstimate> k4{one_estimate(), one_estimate(), one_estimate(), one_estimate()};
    averaged.push_back(average_gradient(k4).values[0]);
  }
  EXPECT_NEAR(variance(averaged) / variance(single), 0.25, 0.05);
}

TEST(StepSchedule, ConstantAndDecaying) {
  auto c = StepSchedule::constant(0.01);
  EXPECT_EQ(c.alpha(0), 0.01);
  EXPECT_EQ(c.alpha(1000), 0.01);
  auto d = StepSchedule::decaying(0.5, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(d.alpha(0), 0.25);
  EXPECT_DOUBLE_EQ(d.alpha(2), 0.125);
  EXPECT_THROW(StepSchedule::decaying(0.1, 0.5), DomainError);
  EXPECT_THROW(StepSchedule::decaying(0.1, 1.1), DomainError);
  EXPECT_THROW(StepSchedule::constant(0.0), DomainError);
}

TunerState state_at(std::vector<double> theta, double alpha = 0.01) {
  return TunerState::initial({std::move(theta)}, 1, StepSchedule::constant(alpha), 5);
}

TEST(SpsaStep, Examples) {
  GradientEstimate zero{{0.0}, 1.0, 1.0, 1};
  EXPECT_EQ(spsa_step(state_at({0.4}), zero).theta.coords[0], 0.4);
  GradientEstimate five{{5.0}, 1.0, 1.0, 1};
  EXPECT_EQ(spsa_step(state_at({0.0}), five).theta.coords[0], 0.0);
  GradientEstimate two{{2.0}, 1.0, 1.0, 1};
  EXPECT_DOUBLE_EQ(spsa_step(state_at({0.5}), two).theta.coords[0], 0.48);
}

TEST(SpsaStep, CountsEvaluationsAndTracksBest) {
  TunerState s = state_at({0.5, 0.5});
  GradientEstimate g{{1.0, -1.0}, 3.0, 2.5, 3};
  s = spsa_step(s, g);
  EXPECT_EQ(s.iteration, 1u);
  EXPECT_EQ(s.eval_count, 6u);
  EXPECT_EQ(s.best_value, 3.0);
  EXPECT_EQ(s.best_theta.coords, (std::vector<double>{0.5, 0.5}));
  ASSERT_EQ(s.history.size(), 1u);
  EXPECT_DOUBLE_EQ(s.history[0], std::sqrt(2.0));
  g.f_base = 4.0;
  s = spsa_step(s, g);
  EXPECT_EQ(s.best_value, 3.0);
}

TEST(ShouldTerminate, Cases) {
  TerminationLimits lim{.max_iterations = 10, .grad_tol = 1e-3, .window = 5};
  TunerState s = state_at({0.5});
  s.iteration = 10;
  EXPECT_EQ(should_terminate(s, lim), Decision::budget_exhausted);

  s.iteration = 3;
  s.history = {0.3, 0.3, 0.3, 0.3};
  EXPECT_EQ(should_terminate(s, lim), Decision::continue_run);  // window not full
  s.history.push_back(0.3);
  EXPECT_EQ(should_terminate(s, lim), Decision::converged);

  s.history = {0.3, 0.1, 0.5, 0.3, 0.3};
  EXPECT_EQ(should_terminate(s, lim), Decision::continue_run);

  lim.grad_tol = 0.0;
  s.history = {0.3, 0.3, 0.3, 0.3, 0.3};
  EXPECT_EQ(should_terminate(s, lim), Decision::continue_run);
}

TEST(ShouldTerminate, DefaultTolerance) { EXPECT_DOUBLE_EQ(default_grad_tol(4), 2e-3); }

TEST(FiniteDifference, Examples) {
  int calls = 0;
  auto linear = [&](std::span<const double> x) {
    ++calls;
    return 2.0 * x[0];
  };
  std::vector<double> x{0.5};
  EXPECT_EQ(finite_difference_oracle(linear, x, 0.25)[0], 2.0);
  EXPECT_DOUBLE_EQ(finite_difference_oracle(linear, x, 1e-3)[0], 2.0);

  auto sq = [](std::span<const double> v) { return v[0] * v[0]; };
  EXPECT_NEAR(finite_difference_oracle(sq, x, 0.01)[0], 1.01, 1e-12);

  calls = 0;
  std::vector<double> x11(11, 0.5);
  auto sum = [&](std::span<const double> v) {
    ++calls;
    return std::accumulate(v.begin(), v.end(), 0.0);
  };
  finite_difference_oracle(sum, x11, 1e-3);
  EXPECT_EQ(calls, 12);
}

TEST(FiniteDifference, RejectsProbesOutsideTheBox) {
  auto f = [](std::span<const double> v) { return v[0]; };
  std::vector<double> edge{0.9999995};
  EXPECT_THROW(finite_difference_oracle(f, edge, 1e-6), DomainError);
  std::vector<double> inside{0.5};
  EXPECT_THROW(finite_difference_oracle(f, inside, 0.0), DomainError);
}

}  // namespace
}  // namespace spsatune
