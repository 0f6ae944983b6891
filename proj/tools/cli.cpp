// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "spsatune/checkpoint.hpp"
#include "spsatune/config.hpp"
#include "spsatune/engine.hpp"
#include "spsatune/error.hpp"
#include "spsatune/mrsim.hpp"
#include "spsatune/report.hpp"
#include "spsatune/trace.hpp"

namespace spsatune::cli {

namespace {

struct GlobalFlags {
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> max_iterations_override;
  bool quiet = false;
};

void apply_overrides(RunConfig& cfg, const GlobalFlags& flags) {
  if (flags.seed_override) cfg.engine.seed = *flags.seed_override;
  if (flags.max_iterations_override) cfg.engine.limits.max_iterations = *flags.max_iterations_override;
}

int exit_code_for(RunStatus s) {
  switch (s) {
    case RunStatus::converged:
    case RunStatus::budget_exhausted:
    case RunStatus::interrupted: return kOk;
    case RunStatus::aborted: return kObjectiveAbort;
    case RunStatus::checkpoint_failed: return kIo;
  }
  return kUsage;
}

int execute(RunConfig& cfg, std::optional<TunerState> resume_from, const GlobalFlags& flags,
            std::ostream& out, std::ostream& err) {
  auto objective = make_objective(cfg.objective, cfg.space);

  std::optional<TraceWriter> trace;
  if (cfg.output.trace) {
    trace = resume_from ? TraceWriter::resume(*cfg.output.trace, resume_from->iteration)
                        : TraceWriter::create(*cfg.output.trace);
  }

  RunHooks hooks;
  hooks.checkpoint_path = cfg.output.checkpoint;
  hooks.stop = &stop_flag();
  hooks.on_iteration = [&](const IterationRecord& r) {
    if (trace) trace->append(r);
    spdlog::debug("iteration {} f_base={} grad_norm={} best={}", r.iteration, r.f_base, r.grad_norm,
                  r.best_value);
  };

  RunResult result = spsatune::run(cfg.space, *objective, cfg.engine, hooks, std::move(resume_from));
  if (cfg.output.summary) write_summary(*cfg.output.summary, cfg.space, result);

  if (!flags.quiet) {
    out << "status:       " << to_string(result.status) << '\n'
        << "iterations:   " << result.state.iteration << '\n'
        << "evaluations:  " << result.state.eval_count << '\n'
        << "best value:   " << result.state.best_value << '\n';
    const SystemConfig best = map_to_system(result.state.best_theta, cfg.space);
    for (std::size_t i = 0; i < cfg.space.size(); ++i)
      out << "  " << cfg.space[i].name << " = " << render_value(best.values[i], cfg.space[i]) << '\n';
  }
  if (result.status == RunStatus::interrupted)
    err << "interrupted; state saved"
        << (cfg.output.checkpoint ? " to " + cfg.output.checkpoint->string() : std::string(" nowhere"))
        << '\n';
  else if (!result.message.empty())
    err << to_string(result.status) << ": " << result.message << '\n';
  return exit_code_for(result.status);
}

int cmd_tune(const std::string& config_path, const GlobalFlags& flags, std::ostream& out,
             std::ostream& err) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, flags);
  return execute(cfg, std::nullopt, flags, out, err);
}

int cmd_resume(const std::string& checkpoint_path, const std::string& config_path,
               const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, flags);
  Checkpoint cp = load_checkpoint(checkpoint_path);
  const std::string want = cfg.space.fingerprint();
  const std::string have = cp.space.fingerprint();
  if (want != have) {
    err << "error: checkpoint space fingerprint " << have << " does not match config space fingerprint "
        << want << '\n';
    return kUsage;
  }
  return execute(cfg, std::move(cp.state), flags, out, err);
}

int cmd_report(const std::string& trace_path, bool spark, const std::string& plot_path,
               std::ostream& out) {
  const auto rows = read_trace(trace_path);
  if (rows.empty()) throw DomainError("trace " + trace_path + " has no rows");
  print_report(out, summarize_trace(rows));
  if (spark) {
    std::vector<double> f;
    for (const auto& r : rows) f.push_back(r.f_base);
    out << "trajectory:   " << sparkline(f) << '\n';
  }
  if (!plot_path.empty()) write_plot_data(plot_path, rows);
  return kOk;
}

int cmd_simulate(const std::string& config_path, const GlobalFlags& flags, std::ostream& out) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, flags);
  if (cfg.objective.kind != ObjectiveKind::mrsim)
    throw ConfigError("/objective/kind", "simulate needs an mrsim objective");
  const AlgoPoint theta = cfg.engine.initial_point ? *cfg.engine.initial_point : map_default(cfg.space);
  const SystemConfig sc = map_to_system(theta, cfg.space);
  const mrsim::JobProfile& p = cfg.objective.profile;
  const mrsim::SimBreakdown b = mrsim::simulate(p, cfg.space, sc);

  char line[128];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-18s %12.3f s\n", name, v);
    out << line;
  };
  for (std::size_t i = 0; i < cfg.space.size(); ++i)
    out << cfg.space[i].name << " = " << render_value(sc.values[i], cfg.space[i]) << '\n';
  out << "breakdown:\n";
  row("map sort", b.map_sort_cost);
  row("map spill io", b.map_spill_io);
  row("map merge io", b.map_merge_io);
  row("shuffle", b.shuffle_cost);
  row("reduce merge", b.reduce_merge_cost);
  row("reduce io", b.reduce_io);
  row("startup", b.startup_cost);
  row("total", b.total);
  for (const auto& d : b.diagnostics) out << "note: " << d << '\n';
  const double suggested = mrsim::suggested_partial_workload_bytes(p.map_slots, p.block_size_bytes);
  std::snprintf(line, sizeof line, "%.0f MiB (2 x %d map slots x %.0f MiB blocks)",
                suggested / 1048576.0, p.map_slots, p.block_size_bytes / 1048576.0);
  out << "suggested partial workload for tuning runs: " << line << '\n';
  return kOk;
}

void configure_logging(bool quiet) {
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("SPSATUNE_LOG_LEVEL")) level = spdlog::level::from_str(env);
  if (quiet) level = std::max(level, spdlog::level::err);
  spdlog::set_level(level);
}

}  // namespace

std::atomic<bool>& stop_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tune configuration parameters with simultaneous perturbation stochastic approximation.",
               "spsatune"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--seed-override", flags.seed_override, "Replace engine.seed from the config");
  app.add_option("--max-iterations-override", flags.max_iterations_override,
                 "Replace engine.max_iterations from the config");
  app.add_flag("-q,--quiet", flags.quiet, "Print nothing on success");

  std::string config_path, checkpoint_path, trace_path, plot_path;
  bool spark = false;
  auto* tune = app.add_subcommand("tune", "Run a tuning job from a config file");
  tune->add_option("config", config_path, "Run config (JSON)")->required();
  auto* resume = app.add_subcommand("resume", "Continue a run from its checkpoint");
  resume->add_option("checkpoint", checkpoint_path, "Checkpoint file")->required();
  resume->add_option("config", config_path, "Run config (JSON)")->required();
  auto* report = app.add_subcommand("report", "Summarize a trace");
  report->add_option("trace", trace_path, "Trace file (JSON lines)")->required();
  report->add_flag("--sparkline", spark, "Print a text sparkline of f_base");
  report->add_option("--plot-data", plot_path, "Write iteration/f_base columns to this file");
  auto* simulate = app.add_subcommand("simulate", "Evaluate the simulator once and print its breakdown");
  simulate->add_option("config", config_path, "Run config with an mrsim objective")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  configure_logging(flags.quiet);

  try {
    if (*tune) return cmd_tune(config_path, flags, out, err);
    if (*resume) return cmd_resume(checkpoint_path, config_path, flags, out, err);
    if (*report) return cmd_report(trace_path, spark, plot_path, out);
    if (*simulate) return cmd_simulate(config_path, flags, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << '\n';
    return kIo;
  } catch (const ObjectiveAbort& e) {
    err << "objective aborted: " << e.what() << '\n';
    return kObjectiveAbort;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace spsatune::cli
