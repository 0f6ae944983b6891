// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spsatune/error.hpp"

namespace spsatune::json_codec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string child(const std::string& where, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return where + "/" + escaped;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

const json& require(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(child(where, key), "required field is missing");
  return *it;
}

const json* optional_field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  return j.get<double>();
}

std::uint64_t as_uint(const json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError(where, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

bool as_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], child(where, i)));
  return out;
}

double number_or(const json& j, const std::string& where, const char* key, double fallback) {
  const json* f = optional_field(j, where, key);
  return f ? as_number(*f, child(where, key)) : fallback;
}

// Runs `fn`, re-labelling library validation errors with the JSON location.
template <typename Fn>
auto at_location(const std::string& where, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j, double inf_value) {
  return j.is_null() ? inf_value : j.get<double>();
}

json spec_to_json(const ParameterSpec& s) {
  json j = {{"name", s.name}, {"kind", to_string(s.kind)}, {"min", s.min},
            {"max", s.max},   {"default", s.default_value}, {"resolution", s.resolution}};
  if (!s.categories.empty()) j["categories"] = s.categories;
  return j;
}

ParameterSpec spec_from_json(const json& j, const std::string& where) {
  const std::string name = as_string(require(j, where, "name"), child(where, "name"));
  const std::string kind_text = as_string(require(j, where, "kind"), child(where, "kind"));
  ParamKind kind = at_location(child(where, "kind"), [&] { return param_kind_from_string(kind_text); });

  return at_location(where, [&]() -> ParameterSpec {
    switch (kind) {
      case ParamKind::real: {
        double lo = as_number(require(j, where, "min"), child(where, "min"));
        double hi = as_number(require(j, where, "max"), child(where, "max"));
        double def = as_number(require(j, where, "default"), child(where, "default"));
        std::optional<double> res;
        if (const json* r = optional_field(j, where, "resolution"))
          res = as_number(*r, child(where, "resolution"));
        return ParameterSpec::real(name, lo, hi, def, res);
      }
      case ParamKind::integer: {
        double lo = as_number(require(j, where, "min"), child(where, "min"));
        double hi = as_number(require(j, where, "max"), child(where, "max"));
        double def = as_number(require(j, where, "default"), child(where, "default"));
        return ParameterSpec::integer(name, lo, hi, def);
      }
      case ParamKind::boolean: {
        const json& d = require(j, where, "default");
        bool def = d.is_boolean() ? d.get<bool>() : as_number(d, child(where, "default")) != 0.0;
        return ParameterSpec::boolean(name, def);
      }
      case ParamKind::categorical: {
        const json& cats = require(j, where, "categories");
        if (!cats.is_array()) throw ConfigError(child(where, "categories"), "expected an array");
        std::vector<std::string> names;
        for (std::size_t i = 0; i < cats.size(); ++i)
          names.push_back(as_string(cats[i], child(child(where, "categories"), i)));
        const json& d = require(j, where, "default");
        std::size_t idx = 0;
        if (d.is_string()) {
          auto it = std::find(names.begin(), names.end(), d.get<std::string>());
          if (it == names.end())
            throw ConfigError(child(where, "default"), "not one of the declared categories");
          idx = static_cast<std::size_t>(it - names.begin());
        } else {
          idx = as_uint(d, child(where, "default"));
        }
        return ParameterSpec::categorical(name, names, idx);
      }
    }
    throw ConfigError(child(where, "kind"), "unsupported kind");
  });
}

json space_to_json(const ParameterSpace& space) {
  json params = json::array();
  for (const auto& s : space.specs()) params.push_back(spec_to_json(s));
  return {{"parameters", params}};
}

ParameterSpace space_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  std::vector<ParameterSpec> specs;
  const json* preset = optional_field(j, where, "preset");
  const json* params = optional_field(j, where, "parameters");
  if (preset && params)
    throw ConfigError(where, "give either 'preset' or 'parameters', not both");
  if (preset) {
    std::string name = as_string(*preset, child(where, "preset"));
    if (name != "mrsim-v1") throw ConfigError(child(where, "preset"), "unknown preset '" + name + "'");
    specs = mrsim::default_space().specs();
    if (const json* ov = optional_field(j, where, "overrides")) {
      const std::string ow = child(where, "overrides");
      if (!ov->is_object()) throw ConfigError(ow, "expected an object keyed by parameter name");
      for (auto it = ov->begin(); it != ov->end(); ++it) {
        const std::string pw = child(ow, it.key());
        auto found = std::find_if(specs.begin(), specs.end(),
                                  [&](const ParameterSpec& s) { return s.name == it.key(); });
        if (found == specs.end()) throw ConfigError(pw, "preset has no such parameter");
        json merged = spec_to_json(*found);
        if (!it.value().is_object()) throw ConfigError(pw, "expected an object");
        for (auto f = it.value().begin(); f != it.value().end(); ++f) {
          if (f.key() == "name" || f.key() == "kind")
            throw ConfigError(child(pw, f.key()), "cannot be overridden");
          merged[f.key()] = f.value();
        }
        // A changed span invalidates the preset's derived real resolution.
        if (found->kind == ParamKind::real && !it.value().contains("resolution"))
          merged.erase("resolution");
        *found = spec_from_json(merged, pw);
      }
    }
  } else if (params) {
    const std::string pw = child(where, "parameters");
    if (!params->is_array()) throw ConfigError(pw, "expected an array");
    for (std::size_t i = 0; i < params->size(); ++i)
      specs.push_back(spec_from_json((*params)[i], child(pw, i)));
  } else {
    throw ConfigError(child(where, "parameters"), "required field is missing");
  }
  return at_location(where, [&] { return ParameterSpace(std::move(specs)); });
}

json profile_to_json(const mrsim::JobProfile& p) {
  return {{"input_bytes", p.input_bytes},
          {"map_output_ratio", p.map_output_ratio},
          {"record_size_bytes", p.record_size_bytes},
          {"map_slots", p.map_slots},
          {"reduce_slots", p.reduce_slots},
          {"cpu_cost_weight", p.cpu_cost_weight},
          {"io_cost_weight", p.io_cost_weight},
          {"network_cost_weight", p.network_cost_weight},
          {"startup_cost_seconds", p.startup_cost_seconds},
          {"compress_speedup", p.compress_speedup},
          {"block_size_bytes", p.block_size_bytes},
          {"reduce_heap_bytes", p.reduce_heap_bytes},
          {"reduce_output_ratio", p.reduce_output_ratio},
          {"output_replication", p.output_replication}};
}

mrsim::JobProfile profile_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  mrsim::JobProfile p;
  static const json known = profile_to_json(p);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key())) throw ConfigError(child(where, it.key()), "unknown profile field");
  p.input_bytes = number_or(j, where, "input_bytes", p.input_bytes);
  p.map_output_ratio = number_or(j, where, "map_output_ratio", p.map_output_ratio);
  p.record_size_bytes = number_or(j, where, "record_size_bytes", p.record_size_bytes);
  if (const json* f = optional_field(j, where, "map_slots"))
    p.map_slots = static_cast<int>(as_uint(*f, child(where, "map_slots")));
  if (const json* f = optional_field(j, where, "reduce_slots"))
    p.reduce_slots = static_cast<int>(as_uint(*f, child(where, "reduce_slots")));
  p.cpu_cost_weight = number_or(j, where, "cpu_cost_weight", p.cpu_cost_weight);
  p.io_cost_weight = number_or(j, where, "io_cost_weight", p.io_cost_weight);
  p.network_cost_weight = number_or(j, where, "network_cost_weight", p.network_cost_weight);
  p.startup_cost_seconds = number_or(j, where, "startup_cost_seconds", p.startup_cost_seconds);
  p.compress_speedup = number_or(j, where, "compress_speedup", p.compress_speedup);
  p.block_size_bytes = number_or(j, where, "block_size_bytes", p.block_size_bytes);
  p.reduce_heap_bytes = number_or(j, where, "reduce_heap_bytes", p.reduce_heap_bytes);
  p.reduce_output_ratio = number_or(j, where, "reduce_output_ratio", p.reduce_output_ratio);
  p.output_replication = number_or(j, where, "output_replication", p.output_replication);
  at_location(where, [&] {
    p.validate();
    return 0;
  });
  return p;
}

json objective_to_json(const ObjectiveSpec& s) {
  json j = {{"kind", to_string(s.kind)},
            {"value_scale", s.value_scale},
            {"transform", to_string(s.transform)}};
  switch (s.kind) {
    case ObjectiveKind::synthetic:
      j["function"] = s.function;
      j["noise_sigma"] = s.noise_sigma;
      if (!s.center.empty()) j["center"] = s.center;
      break;
    case ObjectiveKind::process:
      j["command"] = s.command_template;
      j["value_source"] = to_string(s.value_source);
      j["timeout_seconds"] = s.timeout_seconds;
      j["export_env"] = s.export_env;
      j["reentrant_safe"] = s.reentrant_safe;
      break;
    case ObjectiveKind::mrsim:
      j["profile"] = profile_to_json(s.profile);
      break;
  }
  return j;
}

ObjectiveSpec objective_from_json(const json& j, const std::string& where) {
  ObjectiveSpec s;
  const std::string kind = as_string(require(j, where, "kind"), child(where, "kind"));
  s.kind = at_location(child(where, "kind"), [&] { return objective_kind_from_string(kind); });
  s.value_scale = number_or(j, where, "value_scale", 1.0);
  if (const json* t = optional_field(j, where, "transform")) {
    std::string text = as_string(*t, child(where, "transform"));
    s.transform =
        at_location(child(where, "transform"), [&] { return value_transform_from_string(text); });
  }
  switch (s.kind) {
    case ObjectiveKind::synthetic:
      if (const json* f = optional_field(j, where, "function"))
        s.function = as_string(*f, child(where, "function"));
      s.noise_sigma = number_or(j, where, "noise_sigma", 0.0);
      if (const json* c = optional_field(j, where, "center"))
        s.center = as_numbers(*c, child(where, "center"));
      break;
    case ObjectiveKind::process:
      s.command_template = as_string(require(j, where, "command"), child(where, "command"));
      if (const json* v = optional_field(j, where, "value_source")) {
        std::string text = as_string(*v, child(where, "value_source"));
        s.value_source =
            at_location(child(where, "value_source"), [&] { return value_source_from_string(text); });
      }
      s.timeout_seconds = number_or(j, where, "timeout_seconds", s.timeout_seconds);
      if (const json* e = optional_field(j, where, "export_env"))
        s.export_env = as_bool(*e, child(where, "export_env"));
      if (const json* r = optional_field(j, where, "reentrant_safe"))
        s.reentrant_safe = as_bool(*r, child(where, "reentrant_safe"));
      break;
    case ObjectiveKind::mrsim:
      if (const json* p = optional_field(j, where, "profile"))
        s.profile = profile_from_json(*p, child(where, "profile"));
      break;
  }
  return s;
}

json schedule_to_json(const StepSchedule& s) {
  json j = {{"kind", s.kind == ScheduleKind::constant ? "constant" : "decaying"},
            {"alpha0", s.alpha0}};
  if (s.kind == ScheduleKind::decaying) {
    j["decay_exponent"] = s.decay_exponent;
    j["offset"] = s.offset;
  }
  return j;
}

StepSchedule schedule_from_json(const json& j, const std::string& where) {
  std::string kind = "constant";
  if (const json* k = optional_field(j, where, "kind")) kind = as_string(*k, child(where, "kind"));
  double alpha0 = number_or(j, where, "alpha0", 0.01);
  if (kind == "constant")
    return at_location(child(where, "alpha0"), [&] { return StepSchedule::constant(alpha0); });
  if (kind == "decaying") {
    double e = number_or(j, where, "decay_exponent", 0.602);
    double off = number_or(j, where, "offset", 0.0);
    return at_location(where, [&] { return StepSchedule::decaying(alpha0, e, off); });
  }
  throw ConfigError(child(where, "kind"), "expected 'constant' or 'decaying'");
}

json options_to_json(const EngineOptions& o) {
  json policy = {{"retries", o.failure.retries},
                 {"on_exhausted",
                  o.failure.on_exhausted == FailurePolicy::OnExhausted::abort ? "abort" : "penalty"},
                 {"penalty_factor", o.failure.penalty_factor}};
  if (o.failure.penalty_value) policy["penalty_value"] = *o.failure.penalty_value;
  json j = {{"seed", o.seed},
            {"schedule", schedule_to_json(o.schedule)},
            {"replicates", o.replicates},
            {"max_iterations", o.limits.max_iterations},
            {"grad_tol", o.limits.grad_tol},
            {"window", o.limits.window},
            {"checkpoint_every", o.checkpoint_every},
            {"failure_policy", policy},
            {"strict_magnitudes", o.perturbation.strict},
            {"c_lo", o.perturbation.c_lo},
            {"c_hi", o.perturbation.c_hi},
            {"parallel", o.parallel}};
  if (o.initial_point) j["initial_point"] = o.initial_point->coords;
  return j;
}

EngineOptions options_from_json(const json& j, const std::string& where, std::size_t dimension) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  EngineOptions o;
  o.seed = as_uint(require(j, where, "seed"), child(where, "seed"));
  if (const json* s = optional_field(j, where, "schedule"))
    o.schedule = schedule_from_json(*s, child(where, "schedule"));
  if (const json* r = optional_field(j, where, "replicates")) {
    o.replicates = as_uint(*r, child(where, "replicates"));
    if (o.replicates < 1) throw ConfigError(child(where, "replicates"), "must be at least 1");
  }
  if (const json* m = optional_field(j, where, "max_iterations"))
    o.limits.max_iterations = as_uint(*m, child(where, "max_iterations"));
  o.limits.grad_tol = number_or(j, where, "grad_tol", default_grad_tol(dimension));
  if (const json* w = optional_field(j, where, "window"))
    o.limits.window = as_uint(*w, child(where, "window"));
  if (const json* c = optional_field(j, where, "checkpoint_every"))
    o.checkpoint_every = as_uint(*c, child(where, "checkpoint_every"));
  if (const json* f = optional_field(j, where, "failure_policy")) {
    const std::string fw = child(where, "failure_policy");
    if (const json* r = optional_field(*f, fw, "retries"))
      o.failure.retries = static_cast<int>(as_uint(*r, child(fw, "retries")));
    if (const json* e = optional_field(*f, fw, "on_exhausted")) {
      std::string text = as_string(*e, child(fw, "on_exhausted"));
      if (text == "abort") o.failure.on_exhausted = FailurePolicy::OnExhausted::abort;
      else if (text == "penalty") o.failure.on_exhausted = FailurePolicy::OnExhausted::penalty;
      else throw ConfigError(child(fw, "on_exhausted"), "expected 'penalty' or 'abort'");
    }
    if (const json* p = optional_field(*f, fw, "penalty_value"))
      o.failure.penalty_value = as_number(*p, child(fw, "penalty_value"));
    o.failure.penalty_factor = number_or(*f, fw, "penalty_factor", o.failure.penalty_factor);
  }
  if (const json* s = optional_field(j, where, "strict_magnitudes"))
    o.perturbation.strict = as_bool(*s, child(where, "strict_magnitudes"));
  o.perturbation.c_lo = number_or(j, where, "c_lo", o.perturbation.c_lo);
  o.perturbation.c_hi = number_or(j, where, "c_hi", o.perturbation.c_hi);
  if (const json* p = optional_field(j, where, "parallel"))
    o.parallel = as_bool(*p, child(where, "parallel"));
  if (const json* ip = optional_field(j, where, "initial_point"))
    o.initial_point = AlgoPoint{as_numbers(*ip, child(where, "initial_point"))};
  at_location(where, [&] {
    o.validate(dimension);
    return 0;
  });
  return o;
}

json state_to_json(const TunerState& s) {
  return {{"iteration", s.iteration},
          {"theta", s.theta.coords},
          {"rng", s.rng.serialize()},
          {"schedule", schedule_to_json(s.schedule)},
          {"best_theta", s.best_theta.coords},
          {"best_value", number_or_null(s.best_value)},
          {"history", std::vector<double>(s.history.begin(), s.history.end())},
          {"window", s.window},
          {"eval_count", s.eval_count},
          {"attempt_count", s.attempt_count},
          {"worst_observed", number_or_null(s.worst_observed)}};
}

TunerState state_from_json(const json& j, const std::string& where) {
  TunerState s;
  s.iteration = as_uint(require(j, where, "iteration"), child(where, "iteration"));
  s.theta.coords = as_numbers(require(j, where, "theta"), child(where, "theta"));
  std::string rng = as_string(require(j, where, "rng"), child(where, "rng"));
  s.rng = at_location(child(where, "rng"), [&] { return Rng::deserialize(rng); });
  s.schedule = schedule_from_json(require(j, where, "schedule"), child(where, "schedule"));
  s.best_theta.coords = as_numbers(require(j, where, "best_theta"), child(where, "best_theta"));
  const json& best = require(j, where, "best_value");
  s.best_value = best.is_null() ? kInf : as_number(best, child(where, "best_value"));
  auto hist = as_numbers(require(j, where, "history"), child(where, "history"));
  s.history.assign(hist.begin(), hist.end());
  s.window = as_uint(require(j, where, "window"), child(where, "window"));
  s.eval_count = as_uint(require(j, where, "eval_count"), child(where, "eval_count"));
  s.attempt_count = as_uint(require(j, where, "attempt_count"), child(where, "attempt_count"));
  const json& worst = require(j, where, "worst_observed");
  s.worst_observed = worst.is_null() ? -kInf : as_number(worst, child(where, "worst_observed"));
  if (s.best_theta.size() != s.theta.size())
    throw ConfigError(child(where, "best_theta"), "dimension differs from theta");
  return s;
}

ordered_json record_to_json(const IterationRecord& r) {
  ordered_json j;
  j["iteration"] = r.iteration;
  j["theta"] = r.theta.coords;
  j["system_config"] = r.system_config.values;
  j["f_base"] = number_or_null(r.f_base);
  j["f_perturbed"] = r.f_perturbed;
  j["grad_norm"] = number_or_null(r.grad_norm);
  j["alpha"] = r.alpha;
  j["eval_count"] = r.eval_count;
  j["best_value"] = number_or_null(r.best_value);
  j["wall_ms"] = r.wall_ms;
  return j;
}

IterationRecord record_from_json(const json& j, const std::string& where) {
  IterationRecord r;
  r.iteration = as_uint(require(j, where, "iteration"), child(where, "iteration"));
  r.theta.coords = as_numbers(require(j, where, "theta"), child(where, "theta"));
  r.system_config.values = as_numbers(require(j, where, "system_config"), child(where, "system_config"));
  r.f_base = number_or_inf(require(j, where, "f_base"), kInf);
  r.f_perturbed = as_numbers(require(j, where, "f_perturbed"), child(where, "f_perturbed"));
  r.grad_norm = number_or_inf(require(j, where, "grad_norm"), kInf);
  r.alpha = as_number(require(j, where, "alpha"), child(where, "alpha"));
  r.eval_count = as_uint(require(j, where, "eval_count"), child(where, "eval_count"));
  r.best_value = number_or_inf(require(j, where, "best_value"), kInf);
  if (const json* w = optional_field(j, where, "wall_ms")) r.wall_ms = as_number(*w, child(where, "wall_ms"));
  return r;
}

}  // namespace spsatune::json_codec
