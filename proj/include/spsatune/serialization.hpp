// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "spsatune/engine.hpp"
#include "spsatune/mrsim.hpp"
#include "spsatune/objective.hpp"
#include "spsatune/param_space.hpp"
#include "spsatune/spsa.hpp"

/// JSON codecs shared by the config loader, checkpoints and traces.
///
/// Every `*_from_json` takes the JSON pointer of the node it reads and throws
/// ConfigError naming the exact offending field. Doubles round-trip exactly;
/// infinities are written as null.
namespace spsatune::json_codec {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json spec_to_json(const ParameterSpec& spec);
ParameterSpec spec_from_json(const json& j, const std::string& where);

json space_to_json(const ParameterSpace& space);
ParameterSpace space_from_json(const json& j, const std::string& where);

json profile_to_json(const mrsim::JobProfile& p);
mrsim::JobProfile profile_from_json(const json& j, const std::string& where);

json objective_to_json(const ObjectiveSpec& spec);
ObjectiveSpec objective_from_json(const json& j, const std::string& where);

json schedule_to_json(const StepSchedule& s);
StepSchedule schedule_from_json(const json& j, const std::string& where);

json options_to_json(const EngineOptions& o);
/// `dimension` sizes default tolerances and checks the initial point.
EngineOptions options_from_json(const json& j, const std::string& where, std::size_t dimension);

json state_to_json(const TunerState& s);
TunerState state_from_json(const json& j, const std::string& where);

ordered_json record_to_json(const IterationRecord& r);
IterationRecord record_from_json(const json& j, const std::string& where);

json number_or_null(double v);
double number_or_inf(const json& j, double inf_value);

}  // namespace spsatune::json_codec
