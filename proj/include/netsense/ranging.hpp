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
#include <utility>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/geometry.hpp"
#include "netsense/sparse.hpp"

namespace netsense
{
    /// Estimated STO matrix; pairs whose support was empty are listed in
    /// failed_pairs and carry tau = 0.
    struct StoEstimate
    {
        IntMatrix tau;
        std::vector<std::pair<int, int>> failed_pairs;

        bool ok() const { return failed_pairs.empty(); }
        bool failed(int u, int m) const;
    };

    /// tau_{u,m} = min(support_{u,m}) - l_{u,m} for u != m, with l_{u,m} the Type I
    /// delay of the surveyed BS positions; zero on the diagonal.
    StoEstimate estimate_sto(const SupportSets &support, const std::vector<Point2D> &bs_positions,
                             const GridConfig &grid);

    /// Per ordered BS pair, the ascending estimated path lengths D_{u,m}.
    /// Mapping indices into a set are 1-based; 0 means "no entry".
    class RangeSet
    {
    public:
        RangeSet() = default;
        explicit RangeSet(int n_bs);

        int n_bs() const { return n_bs_; }
        const std::vector<double> &at(int u, int m) const { return sets_[u * n_bs_ + m]; }
        int size(int u, int m) const { return static_cast<int>(at(u, m).size()); }

        /// D_{u,m}(g), the g-th smallest entry, g in [1, size].
        double value(int u, int m, int g) const;

        /// Stores `values` sorted ascending. Throws PreconditionError on a
        /// non-positive entry or a repeated value.
        void assign(int u, int m, std::vector<double> values);

        std::size_t total_size() const;

    private:
        int n_bs_ = 0;
        std::vector<std::vector<double>> sets_;
    };

    /// Support index l minus the estimated STO, for every l in the pair's support.
    std::vector<int> corrected_delays(const SupportSets &support, const StoEstimate &sto, int u, int m);

    /// r = (l - tau) q + q / 2 for every support index except the Type I entry
    /// (the minimum, bistatic pairs only). Entries whose corrected delay is
    /// negative are dropped and reported through `warnings` when given.
    RangeSet ranges_from_support(const SupportSets &support, const StoEstimate &sto, const GridConfig &grid,
                                 std::vector<std::string> *warnings = nullptr);
}
