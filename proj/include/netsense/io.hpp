// SPDX-License-Identifier: Apache-2.0
//
// netsense - networked device-free sensing simulator
// Copyright (C) 2026 The netsense authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netsense/association.hpp"
#include "netsense/harness.hpp"
#include "netsense/ranging.hpp"
#include "netsense/scenario.hpp"

namespace netsense
{
    using Json = nlohmann::json;

    Json to_json(const Scenario &scene);
    Scenario scenario_from_json(const Json &j);

    /// Phase I -> Phase II handoff: BS positions, grid and every D_{u,m}.
    struct RangeHandoff
    {
        std::vector<Point2D> bs_positions;
        GridConfig grid;
        RangeSet ranges;
    };

    Json to_json(const RangeHandoff &handoff);
    RangeHandoff handoff_from_json(const Json &j);

    Json to_json(const SensingResult &result);
    Json to_json(const MetricsReport &report);
    Json to_json(const ExperimentConfig &config);

    /// Missing keys keep their defaults; unknown keys are rejected so that typos
    /// surface as errors.
    ExperimentConfig experiment_from_json(const Json &j);

    Json read_json_file(const std::string &path);
    void write_text_file(const std::string &path, const std::string &text);
}
