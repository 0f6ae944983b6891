// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spsatune/checkpoint.hpp"
#include "spsatune/error.hpp"
#include "spsatune/serialization.hpp"

namespace spsatune {

namespace {

using json_codec::ordered_json;

ordered_json describe_point(const ParameterSpace& space, const AlgoPoint& theta) {
  const SystemConfig raw = map_to_system(theta, space);
  validate_config(raw, space);
  ordered_json values = ordered_json::object();
  ordered_json rendered = ordered_json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    values[space[i].name] = raw.values[i];
    rendered[space[i].name] = render_value(raw.values[i], space[i]);
  }
  ordered_json j;
  j["normalized"] = theta.coords;
  j["raw"] = values;
  j["rendered"] = rendered;
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

TraceSummary summarize_trace(std::span<const IterationRecord> rows) {
  if (rows.empty()) throw DomainError("trace has no rows");
  TraceSummary s;
  s.iterations = rows.size();
  s.initial_value = rows.front().f_base;
  s.best_value = rows.front().f_base;
  s.best_iteration = rows.front().iteration;
  for (const auto& r : rows) {
    if (r.f_base < s.best_value) {
      s.best_value = r.f_base;
      s.best_iteration = r.iteration;
    }
  }
  s.improvement = s.initial_value != 0.0 ? 1.0 - s.best_value / s.initial_value : 0.0;
  s.eval_count = rows.back().eval_count;
  return s;
}

std::string sparkline(std::span<const double> values, std::size_t width) {
  static const char* const kGlyphs[] = {"▁", "▂", "▃", "▄", "▅", "▆", "▇", "█"};
  if (values.empty() || width == 0) return {};
  const std::size_t n = std::min(width, values.size());
  std::vector<double> sampled(n);
  for (std::size_t i = 0; i < n; ++i) sampled[i] = values[i * values.size() / n];
  auto [lo, hi] = std::minmax_element(sampled.begin(), sampled.end());
  const double range = *hi - *lo;
  std::string out;
  for (double v : sampled) {
    int level = range > 0 ? static_cast<int>(std::lround((v - *lo) / range * 7.0)) : 0;
    out += kGlyphs[std::clamp(level, 0, 7)];
  }
  return out;
}

void print_report(std::ostream& out, const TraceSummary& s) {
  out << "iterations:   " << s.iterations << '\n'
      << "evaluations:  " << s.eval_count << '\n'
      << "initial f:    " << s.initial_value << '\n'
      << "best f:       " << s.best_value << " (iteration " << s.best_iteration << ")\n"
      << "improvement:  " << fixed(100.0 * s.improvement, 1) << "%\n";
}

void write_plot_data(const std::filesystem::path& path, std::span<const IterationRecord> rows) {
  std::string text = "# iteration f_base\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu %.17g\n", static_cast<unsigned long long>(r.iteration),
                  r.f_base);
    text += buf;
  }
  write_file_atomic(path, text);
}

void write_summary(const std::filesystem::path& path, const ParameterSpace& space,
                   const RunResult& result) {
  const TunerState& s = result.state;
  ordered_json j;
  j["status"] = to_string(result.status);
  if (!result.message.empty()) j["message"] = result.message;
  j["iterations"] = s.iteration;
  j["eval_count"] = s.eval_count;
  j["attempt_count"] = s.attempt_count;
  j["space_fingerprint"] = space.fingerprint();
  if (!result.trace.empty()) j["initial_value"] = json_codec::number_or_null(result.trace.front().f_base);
  j["best_value"] = json_codec::number_or_null(s.best_value);
  j["final"] = describe_point(space, s.theta);
  j["best"] = describe_point(space, s.best_theta);
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace spsatune
