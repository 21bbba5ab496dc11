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

#include "netsense/audit.hpp"

#include <cmath>
#include <sstream>

namespace netsense
{
    namespace
    {
        double dist(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }
    }

    std::vector<std::string> audit_mappings(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                                            const std::vector<DetectedTarget> &targets, const AuditLimits &limits)
    {
        std::vector<std::string> issues;
        const int n = ranges.n_bs();
        auto report = [&](std::size_t k, const std::string &what) {
            std::ostringstream os;
            os << "target " << k << ": " << what;
            issues.push_back(os.str());
        };
        if (static_cast<int>(bs_positions.size()) != n)
        {
            issues.push_back("BS position count does not match range sets");
            return issues;
        }

        for (std::size_t k = 0; k < targets.size(); ++k)
        {
            const auto &t = targets[k];
            const auto &g = t.mapping;
            if (g.n_bs() != n)
            {
                report(k, "mapping size mismatch");
                continue;
            }
            bool bounds_ok = true;
            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                    if (g.at(u, m) < 0 || g.at(u, m) > ranges.size(u, m))
                    {
                        std::ostringstream os;
                        os << "index (" << u << "," << m << ") = " << g.at(u, m) << " out of bounds";
                        report(k, os.str());
                        bounds_ok = false;
                    }
            if (!bounds_ok)
                continue;

            int detecting = 0;
            for (int m = 0; m < n; ++m)
                detecting += g.at(m, m) > 0;
            if (detecting != t.level)
                report(k, "reported level differs from the number of detecting BSs");
            if (detecting < 3)
                report(k, "fewer than three detecting BSs");

            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                {
                    if (u == m)
                        continue;
                    const bool echoes = g.at(u, u) > 0 && g.at(m, m) > 0;
                    if (echoes != (g.at(u, m) > 0))
                    {
                        std::ostringstream os;
                        os << "pair (" << u << "," << m << ") inconsistent with echo entries";
                        report(k, os.str());
                        continue;
                    }
                    if (!echoes)
                        continue;
                    const double half = 0.5 * (ranges.at(u, u)[g.at(u, u) - 1] + ranges.at(m, m)[g.at(m, m) - 1]);
                    const double bistatic = ranges.at(u, m)[g.at(u, m) - 1];
                    if (std::abs(half - bistatic) > limits.delta + kDeltaSlack)
                    {
                        std::ostringstream os;
                        os << "pair (" << u << "," << m << ") sum-range mismatch " << std::abs(half - bistatic);
                        report(k, os.str());
                    }
                }

            double objective = 0.0;
            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                    if (g.at(u, m) > 0)
                    {
                        const double r = dist(t.location, bs_positions[u]) + dist(t.location, bs_positions[m]) -
                                         ranges.at(u, m)[g.at(u, m) - 1];
                        objective += r * r;
                    }
            const double gate = limits.beta_per_level * detecting;
            if (!(objective <= gate * (1.0 + limits.residual_slack) + 1e-12))
            {
                std::ostringstream os;
                os << "residual " << objective << " exceeds gate " << gate;
                report(k, os.str());
            }
        }

        for (std::size_t a = 0; a < targets.size(); ++a)
            for (std::size_t b = a + 1; b < targets.size(); ++b)
            {
                const auto &ga = targets[a].mapping;
                const auto &gb = targets[b].mapping;
                if (ga.n_bs() != n || gb.n_bs() != n)
                    continue;
                for (int u = 0; u < n; ++u)
                    for (int m = 0; m < n; ++m)
                        if (ga.at(u, m) > 0 && ga.at(u, m) == gb.at(u, m))
                        {
                            std::ostringstream os;
                            os << "shares index " << ga.at(u, m) << " of (" << u << "," << m << ") with target " << b;
                            report(a, os.str());
                        }
            }
        return issues;
    }
}
