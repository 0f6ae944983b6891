// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "spsatune/error.hpp"
#include "spsatune/fd_oracle.hpp"
#include "spsatune/objective.hpp"
#include "spsatune/process.hpp"
#include "spsatune/synthetics.hpp"
#include "test_util.hpp"

namespace spsatune {
namespace {

ParameterSpace reals(std::size_t n, double def = 0.3) {
  std::vector<ParameterSpec> specs;
  for (std::size_t i = 0; i < n; ++i)
    specs.push_back(ParameterSpec::real("x" + std::to_string(i), 0, 1, def, 0.01));
  return ParameterSpace(std::move(specs));
}

std::string bench() { return (testing::source_dir() / "tests/data/fake_bench.sh").string(); }

TEST(Synthetic, QuadraticMinimumIsZero) {
  auto space = reals(4);
  ObjectiveSpec spec;
  Rng rng(1);
  auto s = evaluate(spec, space, map_to_system(map_default(space), space), rng);
  EXPECT_EQ(s.status, SampleStatus::ok);
  EXPECT_NEAR(s.value, 0.0, 1e-24);
}

TEST(Synthetic, NoiseAveragesOut) {
  auto space = reals(3, 0.6);
  ObjectiveSpec spec;
  spec.noise_sigma = 0.01;
  auto obj = make_objective(spec, space);
  const auto cfg = map_to_system(map_default(space), space);
  Rng rng(2);
  double sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += obj->evaluate(cfg, rng).value;
  EXPECT_NEAR(sum / n, 3 * 0.09, 0.0005);
}

TEST(Synthetic, DiscreteKindsSeeFlooredValues) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 10, 3)});
  ObjectiveSpec spec;
  Rng rng(0);
  auto s = evaluate(spec, space, {{3}}, rng);
  EXPECT_NEAR(s.value, 0.0, 1e-30);
}

TEST(Synthetic, ValueScaleAndLogTransform) {
  auto space = reals(1, 0.8);
  ObjectiveSpec spec;
  spec.value_scale = -2.0;
  Rng rng(0);
  const auto cfg = map_to_system(map_default(space), space);
  EXPECT_DOUBLE_EQ(evaluate(spec, space, cfg, rng).value, -0.5);
  spec.value_scale = 4.0;
  spec.transform = ValueTransform::log;
  EXPECT_DOUBLE_EQ(evaluate(spec, space, cfg, rng).value, 0.0);
  EXPECT_TRUE(std::isnan(shape_value(spec, 0.0)));
}

TEST(Synthetic, CatalogGradients) {
  auto q = shifted_quadratic(0.3);
  std::vector<double> x{0.5, 0.1};
  EXPECT_NEAR(q.gradient(x)[0], 0.4, 1e-15);
  EXPECT_NEAR(q.gradient(x)[1], -0.4, 1e-15);
  std::vector<double> m(5, 0.75);
  EXPECT_NEAR(rosenbrock_cube().value(m), 0.0, 1e-12);
  EXPECT_THROW(find_synthetic("nope"), LookupError);
  EXPECT_EQ(builtin_synthetics().size(), 4u);
}

TEST(Synthetic, CrossQuadraticMatchesFiniteDifferences) {
  const auto& f = find_synthetic("cross_quadratic");
  std::vector<double> x{0.2, 0.45, 0.7, 0.33};
  auto fd = finite_difference_oracle(f.value, x, 1e-6);
  auto g = f.gradient(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(fd[i], g[i], 1e-4 * std::max(1.0, std::abs(g[i])));
}

TEST(Synthetic, ValidatesSpec) {
  auto space = reals(2);
  ObjectiveSpec spec;
  spec.function = "unknown";
  EXPECT_THROW(spec.validate(space), LookupError);
  spec.function = "quadratic";
  spec.center = {0.1};
  EXPECT_THROW(spec.validate(space), StructuralError);
  spec.center = {};
  spec.noise_sigma = -1;
  EXPECT_THROW(spec.validate(space), DomainError);
}

TEST(RenderCommand, Examples) {
  ParameterSpace space({ParameterSpec::integer("io.sort.mb", 10, 2000, 100),
                        ParameterSpec::boolean("mapred.compress.map.output", true)});
  const SystemConfig cfg{{100, 1}};
  EXPECT_EQ(render_command("bench --sort-mb {io.sort.mb}", cfg, space),
            (std::vector<std::string>{"bench", "--sort-mb", "100"}));
  EXPECT_EQ(render_command("  run   it now ", cfg, space), (std::vector<std::string>{"run", "it", "now"}));
  EXPECT_EQ(render_command("b --c={mapred.compress.map.output}", cfg, space),
            (std::vector<std::string>{"b", "--c=true"}));
  EXPECT_EQ(render_command("b 'two words' '{io.sort.mb} x'", cfg, space),
            (std::vector<std::string>{"b", "two words", "100 x"}));
}

TEST(RenderCommand, Errors) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 9, 1)});
  EXPECT_THROW(render_command("b {m}", {{1}}, space), TemplateError);
  EXPECT_THROW(render_command("b 'open", {{1}}, space), TemplateError);
  EXPECT_THROW(render_command("b {n", {{1}}, space), TemplateError);
  EXPECT_THROW(render_command("b n}", {{1}}, space), TemplateError);
}

TEST(ParamEnvName, Mangles) {
  EXPECT_EQ(param_env_name("io.sort.mb"), "SPSA_PARAM_IO_SORT_MB");
  EXPECT_EQ(param_env_name("a-b2"), "SPSA_PARAM_A_B2");
}

TEST(ParseLastLine, Values) {
  EXPECT_EQ(parse_last_line_value("noise\n42.5\n"), 42.5);
  EXPECT_EQ(parse_last_line_value("1\n  -3e2  \n\n"), -300.0);
  EXPECT_FALSE(parse_last_line_value("42.5 seconds\n").has_value());
  EXPECT_FALSE(parse_last_line_value("").has_value());
  EXPECT_FALSE(parse_last_line_value("nan\n").has_value());
}

ObjectiveSpec process_spec(std::string cmd) {
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::process;
  spec.command_template = std::move(cmd);
  spec.value_source = ValueSource::stdout_last_line;
  spec.timeout_seconds = 10;
  return spec;
}

TEST(Process, ReadsLastStdoutLine) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 9, 1)});
  ProcessObjective obj(process_spec("sh -c 'echo hello; echo 42.5'"), space);
  Rng rng(0);
  auto s = obj.evaluate({{1}}, rng);
  EXPECT_EQ(s.status, SampleStatus::ok) << s.diagnostic;
  EXPECT_EQ(s.value, 42.5);
  EXPECT_EQ(obj.launches(), 1u);
}

TEST(Process, ExportsParametersAsEnvironment) {
  ParameterSpace space({ParameterSpec::integer("io.sort.mb", 10, 2000, 100)});
  ProcessObjective obj(process_spec("sh -c 'echo $SPSA_PARAM_IO_SORT_MB'"), space);
  Rng rng(0);
  EXPECT_EQ(obj.evaluate({{123}}, rng).value, 123.0);
}

TEST(Process, WallClockValueSource) {
  ParameterSpace space({ParameterSpec::real("x", 0, 10, 7), ParameterSpec::real("y", 0, 10, 3)});
  auto spec = process_spec(bench() + " --x {x} --y {y}");
  spec.value_source = ValueSource::wall_clock_seconds;
  ProcessObjective obj(spec, space);
  Rng rng(0);
  auto s = obj.evaluate({{7, 3}}, rng);
  EXPECT_EQ(s.status, SampleStatus::ok) << s.diagnostic;
  EXPECT_GE(s.value, 0.02);
  EXPECT_LT(s.value, 0.5);
}

TEST(Process, NonzeroExitAndUnparsableOutputFail) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 9, 1)});
  Rng rng(0);
  EXPECT_EQ(ProcessObjective(process_spec("sh -c 'echo 1; exit 4'"), space).evaluate({{1}}, rng).status,
            SampleStatus::failed);
  EXPECT_EQ(ProcessObjective(process_spec("sh -c 'echo fast'"), space).evaluate({{1}}, rng).status,
            SampleStatus::failed);
  EXPECT_EQ(ProcessObjective(process_spec("/no/such/binary"), space).evaluate({{1}}, rng).status,
            SampleStatus::failed);
}

TEST(Process, TimeoutKillsTheProcessGroup) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 9, 1)});
  auto spec = process_spec("sh -c 'sleep 20 & sleep 20; echo 1'");
  spec.timeout_seconds = 0.5;
  ProcessObjective obj(spec, space);
  Rng rng(0);
  const auto t0 = std::chrono::steady_clock::now();
  auto s = obj.evaluate({{1}}, rng);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(s.status, SampleStatus::timeout);
  EXPECT_LT(elapsed, 0.5 + 1.0);
}

TEST(Process, ValidateChecksPlaceholders) {
  ParameterSpace space({ParameterSpec::integer("n", 0, 9, 1)});
  EXPECT_THROW(process_spec("b {m}").validate(space), TemplateError);
  EXPECT_THROW(process_spec("").validate(space), TemplateError);
  EXPECT_NO_THROW(process_spec("b {n}").validate(space));
}

}  // namespace
}  // namespace spsatune
