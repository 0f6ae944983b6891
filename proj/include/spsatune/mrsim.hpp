// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "spsatune/param_space.hpp"

/// Analytic cost model of one MapReduce job (Hadoop v1 knobs).
///
/// This is a desk-scale stand-in for a cluster: every phase is a closed-form
/// function of the job profile and the eleven tunable parameters, and the
/// result is the critical-path time in seconds. It is deterministic and
/// reentrant. The formula sheet is in README.md.
namespace spsatune::mrsim {

/// Workload and cluster description. Byte quantities are raw bytes; weights
/// are seconds per MiB (cpu, io, network) and seconds per wave (startup).
struct JobProfile {
  double input_bytes = 64.0 * 64.0 * 1048576.0;
  double map_output_ratio = 1.0;
  double record_size_bytes = 100.0;
  int map_slots = 24;
  int reduce_slots = 16;
  double cpu_cost_weight = 0.002;
  double io_cost_weight = 0.02;
  double network_cost_weight = 0.08;
  double startup_cost_seconds = 4.0;
  double compress_speedup = 0.4;  // shuffle bytes multiplier with map-output compression
  double block_size_bytes = 64.0 * 1048576.0;
  double reduce_heap_bytes = 200.0 * 1048576.0;
  double reduce_output_ratio = 1.0;
  double output_replication = 2.0;

  void validate() const;
  bool operator==(const JobProfile&) const = default;
};

/// 64 blocks of input, 24 map / 16 reduce slots (3:2 per node, 8 nodes).
JobProfile reference_profile();

/// The tunable Hadoop v1 knobs in raw units.
struct HadoopConfig {
  double io_sort_mb = 100;
  double io_sort_spill_percent = 0.08;
  double io_sort_factor = 10;
  double shuffle_input_buffer_percent = 0.7;
  double shuffle_merge_percent = 0.66;
  double inmem_merge_threshold = 1000;
  double reduce_input_buffer_percent = 0.0;
  double reduce_tasks = 1;
  double io_sort_record_percent = 0.05;
  bool compress_map_output = false;
  bool output_compress = false;
  // Hadoop v2 knob; not part of default_space() but honored when a space
  // declares it.
  double reduce_slowstart_completedmaps = 0.05;
};

/// Per-phase costs in seconds; total is their sum.
struct SimBreakdown {
  double map_sort_cost = 0;
  double map_spill_io = 0;
  double map_merge_io = 0;
  double shuffle_cost = 0;
  double reduce_merge_cost = 0;
  double reduce_io = 0;
  double startup_cost = 0;
  double total = 0;
  std::vector<std::string> diagnostics;
};

SimBreakdown simulate(const JobProfile& profile, const HadoopConfig& config);

/// Looks parameters up by name; any knob missing from `space` keeps its
/// default value.
SimBreakdown simulate(const JobProfile& profile, const ParameterSpace& space,
                      const SystemConfig& config);

HadoopConfig to_hadoop_config(const ParameterSpace& space, const SystemConfig& config);

/// The eleven Hadoop v1 parameters with their stock defaults and bounds wide
/// enough to hold every commonly reported tuned value.
ParameterSpace default_space();

/// Number of individual merges needed to reduce `streams` sorted runs to one
/// with at most `factor` inputs per merge (40 runs at factor 10 -> 5).
int merge_rounds(long streams, long factor);

/// Number of passes over the data: ceil(log_factor(streams)), 0 for one run.
int merge_passes(long streams, long factor);

/// Input size that fills exactly two map waves.
double suggested_partial_workload_bytes(int map_slots, double block_size_bytes);

}  // namespace spsatune::mrsim
