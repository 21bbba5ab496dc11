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

#include "netsense/association.hpp"

namespace netsense
{
    struct AuditLimits
    {
        double delta = 0.0;          // sum-range tolerance, m
        double beta_per_level = 0.0; // residual gate per detecting BS, m^2
        double residual_slack = 1e-9; // relative slack on the residual gate
    };

    /// Post-hoc check of a set of accepted mappings against the raw range sets.
    /// Re-derives every constraint from scratch: index bounds, echo/bistatic
    /// consistency, no index shared between two mappings, both sum-range
    /// conditions, residual at the reported location and reported level.
    /// Returns one message per violation; empty means the set is feasible.
    std::vector<std::string> audit_mappings(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                                            const std::vector<DetectedTarget> &targets, const AuditLimits &limits);
}
