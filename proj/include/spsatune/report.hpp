// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "spsatune/engine.hpp"
#include "spsatune/param_space.hpp"

namespace spsatune {

struct TraceSummary {
  std::size_t iterations = 0;
  double initial_value = 0.0;   // f_base of the first row
  double best_value = 0.0;      // minimum f_base over all rows
  std::uint64_t best_iteration = 0;
  double improvement = 0.0;     // 1 - best / initial
  std::uint64_t eval_count = 0;
};

/// Throws DomainError on an empty trace.
TraceSummary summarize_trace(std::span<const IterationRecord> rows);

/// Plain-text sparkline of `values`, resampled to at most `width` glyphs.
std::string sparkline(std::span<const double> values, std::size_t width = 60);

void print_report(std::ostream& out, const TraceSummary& s);

/// Two whitespace-separated columns: iteration and f_base.
void write_plot_data(const std::filesystem::path& path, std::span<const IterationRecord> rows);

/// Writes the run summary: status, counters, and the final and best points
/// in normalized and raw units. Raw values are re-validated against `space`
/// before writing.
void write_summary(const std::filesystem::path& path, const ParameterSpace& space,
                   const RunResult& result);

}  // namespace spsatune
