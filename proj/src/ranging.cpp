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

#include "netsense/ranging.hpp"

#include <algorithm>

namespace netsense
{
    bool StoEstimate::failed(int u, int m) const
    {
        return std::find(failed_pairs.begin(), failed_pairs.end(), std::make_pair(u, m)) != failed_pairs.end();
    }

    StoEstimate estimate_sto(const SupportSets &support, const std::vector<Point2D> &bs_positions,
                             const GridConfig &grid)
    {
        const int n_bs = support.n_bs;
        require(static_cast<int>(bs_positions.size()) == n_bs, "estimate_sto: BS position count mismatch");
        StoEstimate out;
        out.tau = IntMatrix::Zero(n_bs, n_bs);
        for (int u = 0; u < n_bs; ++u)
            for (int m = 0; m < n_bs; ++m)
            {
                if (u == m)
                    continue;
                const auto &indices = support.at(u, m);
                if (indices.empty())
                {
                    out.failed_pairs.emplace_back(u, m);
                    continue;
                }
                const long type_one = delay_in_samples(direct_distance(bs_positions[u], bs_positions[m]), grid);
                out.tau(u, m) = static_cast<int>(*std::min_element(indices.begin(), indices.end()) - type_one);
            }
        return out;
    }

    RangeSet::RangeSet(int n_bs) : n_bs_(n_bs), sets_(static_cast<std::size_t>(n_bs) * n_bs) {}

    double RangeSet::value(int u, int m, int g) const
    {
        const auto &set = at(u, m);
        require(g >= 1 && g <= static_cast<int>(set.size()), "RangeSet::value: index outside [1, N_{u,m}]");
        return set[g - 1];
    }

    void RangeSet::assign(int u, int m, std::vector<double> values)
    {
        require(u >= 0 && u < n_bs_ && m >= 0 && m < n_bs_, "RangeSet::assign: BS index out of range");
        std::sort(values.begin(), values.end());
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            require(values[i] > 0.0, "RangeSet::assign: ranges must be positive");
            require(i == 0 || values[i] > values[i - 1], "RangeSet::assign: ranges must be distinct");
        }
        sets_[u * n_bs_ + m] = std::move(values);
    }

    std::size_t RangeSet::total_size() const
    {
        std::size_t total = 0;
        for (const auto &set : sets_)
            total += set.size();
        return total;
    }

    std::vector<int> corrected_delays(const SupportSets &support, const StoEstimate &sto, int u, int m)
    {
        std::vector<int> out;
        for (int l : support.at(u, m))
            out.push_back(l - sto.tau(u, m));
        return out;
    }

    RangeSet ranges_from_support(const SupportSets &support, const StoEstimate &sto, const GridConfig &grid,
                                 std::vector<std::string> *warnings)
    {
        const int n_bs = support.n_bs;
        const double quantum = range_quantum(grid);
        RangeSet out(n_bs);
        for (int u = 0; u < n_bs; ++u)
            for (int m = 0; m < n_bs; ++m)
            {
                const auto &indices = support.at(u, m);
                if (indices.empty())
                    continue;
                const int type_one = u != m ? *std::min_element(indices.begin(), indices.end()) : -1;
                std::vector<double> values;
                for (int l : indices)
                {
                    if (l == type_one)
                        continue;
                    const int corrected = l - sto.tau(u, m);
                    if (corrected < 0)
                    {
                        if (warnings)
                            warnings->push_back("pair (" + std::to_string(u) + ", " + std::to_string(m) +
                                                "): negative corrected delay " + std::to_string(corrected) +
                                                " dropped");
                        continue;
                    }
                    values.push_back(corrected * quantum + 0.5 * quantum);
                }
                out.assign(u, m, std::move(values));
            }
        return out;
    }
}
