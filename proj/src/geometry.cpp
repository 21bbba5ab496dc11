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

#include "netsense/geometry.hpp"

#include "netsense/common.hpp"

namespace netsense
{
    void validate(const GridConfig &grid)
    {
        require(grid.n_subcarriers >= 1, "grid: n_subcarriers must be >= 1");
        require(grid.subcarrier_spacing > 0.0, "grid: subcarrier_spacing must be > 0");
        require(grid.speed_of_light > 0.0, "grid: speed_of_light must be > 0");
    }

    double direct_distance(Point2D bs, Point2D target)
    {
        return std::hypot(bs.x - target.x, bs.y - target.y);
    }

    double sum_distance(Point2D bs_u, Point2D bs_m, Point2D target)
    {
        return direct_distance(bs_u, target) + direct_distance(bs_m, target);
    }

    long delay_in_samples(double distance, const GridConfig &grid)
    {
        require(distance >= 0.0, "delay_in_samples: distance must be non-negative");
        const double rate = static_cast<double>(grid.n_subcarriers) * grid.subcarrier_spacing;
        return static_cast<long>(std::floor(rate * distance / grid.speed_of_light));
    }

    double range_quantum(const GridConfig &grid)
    {
        return grid.speed_of_light / (static_cast<double>(grid.n_subcarriers) * grid.subcarrier_spacing);
    }

    double half_quantum(const GridConfig &grid)
    {
        return 0.5 * range_quantum(grid);
    }
}
