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

#include <cmath>

namespace netsense
{
    inline constexpr double kSpeedOfLight = 299'792'458.0;

    struct Point2D
    {
        double x{};
        double y{};

        friend bool operator==(const Point2D &, const Point2D &) = default;
    };

    /// OFDM sampling grid. The product N * subcarrier_spacing is the sampling
    /// rate and fixes the range quantum c0 / (N * df).
    struct GridConfig
    {
        int n_subcarriers = 3300;
        double subcarrier_spacing = 120e3; // Hz
        double speed_of_light = kSpeedOfLight;

        double sample_rate() const { return n_subcarriers * subcarrier_spacing; }
    };

    /// Throws PreconditionError unless n_subcarriers >= 1, spacing > 0 and c0 > 0.
    void validate(const GridConfig &grid);

    double direct_distance(Point2D bs, Point2D target);

    /// Length of the bistatic path bs_u -> target -> bs_m.
    double sum_distance(Point2D bs_u, Point2D bs_m, Point2D target);

    /// floor(N * df * distance / c0). The product is formed before dividing so
    /// that distances on an exact sample boundary quantize without rounding loss.
    long delay_in_samples(double distance, const GridConfig &grid);

    /// Full range quantum c0 / (N * df).
    double range_quantum(const GridConfig &grid);

    /// Worst-case quantization error c0 / (2 N df), i.e. half the range quantum.
    double half_quantum(const GridConfig &grid);
}
