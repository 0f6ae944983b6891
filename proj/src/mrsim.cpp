// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/mrsim.hpp"

#include <algorithm>
#include <cmath>

#include "spsatune/error.hpp"

namespace spsatune::mrsim {

namespace {

constexpr double kMiB = 1048576.0;
// Per-record accounting entry kept in the map-side sort buffer.
constexpr double kRecordMetaBytes = 16.0;
// Fixed cost of creating one spill file, in MiB-of-io equivalents.
constexpr double kSpillOverheadMiB = 1.0;
// Fixed cost of opening and scheduling one merge, in MiB-of-io equivalents.
constexpr double kMergeOverheadMiB = 2.0;
// One fetch of one map partition by one reducer.
constexpr double kFetchLatencySeconds = 0.02;
// cpu-weight multipliers per MiB.
constexpr double kMapCodecCpu = 5.0;      // fast codec for intermediate data
constexpr double kOutputCodecCpu = 15.0;  // heavier codec for final output
constexpr double kReduceCpu = 1.0;
constexpr double kMaxSlowstartOverlap = 0.30;

double ceil_div(double a, double b) { return std::ceil(a / b); }

}  // namespace

void JobProfile::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string("job profile: ") + name + " must be positive");
  };
  positive(input_bytes, "input_bytes");
  positive(map_output_ratio, "map_output_ratio");
  positive(record_size_bytes, "record_size_bytes");
  positive(block_size_bytes, "block_size_bytes");
  positive(reduce_heap_bytes, "reduce_heap_bytes");
  positive(reduce_output_ratio, "reduce_output_ratio");
  positive(output_replication, "output_replication");
  if (map_slots < 1 || reduce_slots < 1) throw DomainError("job profile: slots must be >= 1");
  for (double w : {cpu_cost_weight, io_cost_weight, network_cost_weight, startup_cost_seconds})
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("job profile: cost weights must be nonnegative");
  if (cpu_cost_weight + io_cost_weight + network_cost_weight + startup_cost_seconds <= 0.0)
    throw DomainError("job profile: at least one cost weight must be positive");
  if (!(compress_speedup > 0.0 && compress_speedup <= 1.0))
    throw DomainError("job profile: compress_speedup must lie in (0, 1]");
}

JobProfile reference_profile() { return JobProfile{}; }

int merge_passes(long streams, long factor) {
  if (streams <= 1) return 0;
  factor = std::max(2L, factor);
  int passes = 0;
  long runs = streams;
  while (runs > 1) {
    runs = (runs + factor - 1) / factor;
    ++passes;
  }
  return passes;
}

int merge_rounds(long streams, long factor) {
  if (streams <= 1) return 0;
  factor = std::max(2L, factor);
  if (streams <= factor) return 1;
  long produced = (streams + factor - 1) / factor;
  return static_cast<int>(produced) + merge_rounds(produced, factor);
}

double suggested_partial_workload_bytes(int map_slots, double block_size_bytes) {
  return 2.0 * map_slots * block_size_bytes;
}

SimBreakdown simulate(const JobProfile& p, const HadoopConfig& c) {
  p.validate();
  SimBreakdown out;

  // Map side. One map per block, run in waves over the map slots.
  const double maps = std::max(1.0, ceil_div(p.input_bytes, p.block_size_bytes));
  const double map_waves = ceil_div(maps, p.map_slots);
  const double map_out = p.input_bytes * p.map_output_ratio / maps;  // bytes per map
  const double map_out_mib = map_out / kMiB;

  // Spill threshold: the data region fills to spill.percent, or the record
  // accounting region (io.sort.record.percent of the buffer) does, whichever
  // comes first.
  const double buffer = c.io_sort_mb * kMiB;
  const double data_cap = buffer * (1.0 - c.io_sort_record_percent) * c.io_sort_spill_percent;
  const double meta_cap = buffer * c.io_sort_record_percent * c.io_sort_spill_percent /
                          kRecordMetaBytes * p.record_size_bytes;
  const double spill_at = std::max(std::min(data_cap, meta_cap), p.record_size_bytes);
  const double spills = std::max(1.0, std::ceil(map_out / spill_at));
  const long factor = std::max(2L, std::lround(c.io_sort_factor));

  // Quicksort of each in-memory chunk: bytes * log2(records per chunk).
  const double chunk_records = std::min(map_out, spill_at) / p.record_size_bytes;
  const double sort = p.cpu_cost_weight * map_out_mib * std::log2(std::max(2.0, chunk_records));

  const double spill_io = p.io_cost_weight * (map_out_mib + kSpillOverheadMiB * spills);

  double merge_io = 0.0;
  if (spills > 1.0) {
    const long runs = static_cast<long>(spills);
    merge_io = p.io_cost_weight * (2.0 * map_out_mib * merge_passes(runs, factor) +
                                   kMergeOverheadMiB * merge_rounds(runs, factor));
  }

  out.map_sort_cost = map_waves * sort;
  out.map_spill_io = map_waves * spill_io;
  out.map_merge_io = map_waves * merge_io;

  // Shuffle. Reducers run in waves over the reduce slots; each fetches its
  // partition of every map output.
  double reducers = std::floor(c.reduce_tasks);
  if (reducers < 1.0) {
    out.diagnostics.push_back("mapred.reduce.tasks < 1 treated as 1");
    reducers = 1.0;
  }
  const double reduce_waves = ceil_div(reducers, p.reduce_slots);
  const double total_out_mib = p.input_bytes * p.map_output_ratio / kMiB;
  const double wire_mib = total_out_mib * (c.compress_map_output ? p.compress_speedup : 1.0);
  const double per_reducer_mib = total_out_mib / reducers;

  double shuffle_task =
      p.network_cost_weight * wire_mib / reducers + kFetchLatencySeconds * maps;
  double codec = 0.0;
  if (c.compress_map_output) {
    codec = map_waves * p.cpu_cost_weight * kMapCodecCpu * map_out_mib +
            reduce_waves * p.cpu_cost_weight * kMapCodecCpu * per_reducer_mib;
  }
  const double slowstart = std::clamp(c.reduce_slowstart_completedmaps, 0.0, 1.0);
  const double overlap = kMaxSlowstartOverlap * (1.0 - slowstart);
  out.shuffle_cost = (reduce_waves * shuffle_task + codec) * (1.0 - overlap);

  // Reduce-side merge. Fetched segments collect in the shuffle buffer and
  // are merged to disk when merge.percent of it is used or inmem.threshold
  // segments have arrived; reduce.input.buffer.percent of the heap may keep
  // map outputs in memory through the reduce.
  const double heap = p.reduce_heap_bytes;
  const double per_reducer = per_reducer_mib * kMiB;
  const double segment = per_reducer / maps;
  const double in_mem_cap = heap * c.shuffle_input_buffer_percent * c.shuffle_merge_percent;
  const double threshold = std::max(1.0, std::floor(c.inmem_merge_threshold));
  const double batch = std::clamp(std::floor(in_mem_cap / segment), 1.0, threshold);
  const double retained = heap * c.reduce_input_buffer_percent;

  double disk_files = 0.0;
  double disk_bytes = 0.0;
  if (per_reducer > retained) {
    disk_bytes = per_reducer - retained;
    disk_files = maps <= batch ? 1.0 : std::ceil(maps / batch);
  }
  double reduce_merge = 0.0;
  if (disk_files > 0.0) {
    const long files = static_cast<long>(disk_files);
    const int extra = files <= factor ? 0 : merge_passes(files, factor) - 1;
    reduce_merge = p.io_cost_weight * ((disk_bytes / kMiB) * (2.0 + 2.0 * extra) +
                                       kMergeOverheadMiB * merge_rounds(files, factor));
  }
  out.reduce_merge_cost = reduce_waves * reduce_merge;

  // Reduce function and final replicated write.
  const double result_mib = per_reducer_mib * p.reduce_output_ratio;
  double reduce_io = p.cpu_cost_weight * kReduceCpu * per_reducer_mib;
  if (c.output_compress) {
    reduce_io += p.io_cost_weight * result_mib * p.compress_speedup * p.output_replication +
                 p.cpu_cost_weight * kOutputCodecCpu * result_mib;
  } else {
    reduce_io += p.io_cost_weight * result_mib * p.output_replication;
  }
  out.reduce_io = reduce_waves * reduce_io;

  out.startup_cost = p.startup_cost_seconds * (map_waves + reduce_waves);

  out.total = out.map_sort_cost + out.map_spill_io + out.map_merge_io + out.shuffle_cost +
              out.reduce_merge_cost + out.reduce_io + out.startup_cost;
  return out;
}

HadoopConfig to_hadoop_config(const ParameterSpace& space, const SystemConfig& config) {
  if (config.size() != space.size()) throw StructuralError("config dimension mismatch");
  HadoopConfig h;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const std::string& name = space[i].name;
    const double v = config.values[i];
    if (name == "io.sort.mb") h.io_sort_mb = v;
    else if (name == "io.sort.spill.percent") h.io_sort_spill_percent = v;
    else if (name == "io.sort.factor") h.io_sort_factor = v;
    else if (name == "shuffle.input.buffer.percent") h.shuffle_input_buffer_percent = v;
    else if (name == "shuffle.merge.percent") h.shuffle_merge_percent = v;
    else if (name == "inmem.merge.threshold") h.inmem_merge_threshold = v;
    else if (name == "reduce.input.buffer.percent") h.reduce_input_buffer_percent = v;
    else if (name == "mapred.reduce.tasks") h.reduce_tasks = v;
    else if (name == "io.sort.record.percent") h.io_sort_record_percent = v;
    else if (name == "mapred.compress.map.output") h.compress_map_output = v != 0.0;
    else if (name == "mapred.output.compress") h.output_compress = v != 0.0;
    else if (name == "reduce.slowstart.completedmaps") h.reduce_slowstart_completedmaps = v;
    else throw LookupError("simulator does not model parameter '" + name + "'");
  }
  return h;
}

SimBreakdown simulate(const JobProfile& profile, const ParameterSpace& space,
                      const SystemConfig& config) {
  return simulate(profile, to_hadoop_config(space, config));
}

ParameterSpace default_space() {
  return ParameterSpace({
      ParameterSpec::integer("io.sort.mb", 10, 2000, 100),
      ParameterSpec::real("io.sort.spill.percent", 0.05, 0.95, 0.08),
      ParameterSpec::integer("io.sort.factor", 2, 500, 10),
      ParameterSpec::real("shuffle.input.buffer.percent", 0.05, 0.95, 0.7),
      ParameterSpec::real("shuffle.merge.percent", 0.05, 0.95, 0.66),
      ParameterSpec::integer("inmem.merge.threshold", 10, 10000, 1000),
      ParameterSpec::real("reduce.input.buffer.percent", 0.0, 0.8, 0.0),
      ParameterSpec::integer("mapred.reduce.tasks", 1, 100, 1),
      ParameterSpec::real("io.sort.record.percent", 0.01, 0.5, 0.05),
      ParameterSpec::boolean("mapred.compress.map.output", false),
      ParameterSpec::boolean("mapred.output.compress", false),
  });
}

}  // namespace spsatune::mrsim
