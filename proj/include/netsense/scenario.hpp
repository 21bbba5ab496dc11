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

#include <optional>
#include <string>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/geometry.hpp"

namespace netsense
{
    struct ScenarioConfig
    {
        int n_bs = 4;
        int n_targets = 3;
        double area_side = 80.0;        // m, placement square [0, side]^2
        double blockage_prob = 0.1;     // per (BS, target) LOS blockage
        double nlos_prob = 0.5;         // per (u, m, k) extra scattered path
        int max_sto = 10;               // samples
        int max_taps = 200;             // L, resolvable delay span of h_{u,m}
        double min_bs_separation = 39.0;
        std::uint64_t rng_seed = 1;
        bool reciprocal_nlos = true;    // mirror scattered paths onto (m, u)
        int max_attempts = 10000;       // rejection-sampling budget per draw
    };

    /// Throws PreconditionError if the configuration cannot produce a valid scene
    /// on the given grid (probabilities out of range, too few BSs, a minimum BS
    /// separation too small to keep every shifted Type I delay non-negative).
    void validate(const ScenarioConfig &config, const GridConfig &grid);

    struct NlosPath
    {
        int u{};
        int m{};
        int k{};
        double range{};
    };

    /// Ground truth of one sensing snapshot.
    struct Scenario
    {
        std::vector<Point2D> bs_positions;
        std::vector<Point2D> target_positions;
        std::vector<std::vector<bool>> los_mask; // [m][k]
        std::vector<NlosPath> nlos_paths;
        IntMatrix sto;                           // tau_{u,m}, antisymmetric
        std::vector<std::string> warnings;

        int n_bs() const { return static_cast<int>(bs_positions.size()); }
        int n_targets() const { return static_cast<int>(target_positions.size()); }
        bool los(int m, int k) const { return los_mask[m][k]; }
        /// Indices of the BSs with a LOS link to target k, ascending.
        std::vector<int> detecting_bs(int k) const;
    };

    Scenario generate(const ScenarioConfig &config, const GridConfig &grid);

    /// Re-checks every scene invariant and throws ScenarioError naming the first
    /// violation: |M_k| >= 3, STO antisymmetry and bound, non-negative shifted
    /// Type I delays, Type II resolvability (pairwise and against Type I), all
    /// Type II delays below L, and strictly positive NLOS bias.
    void validate(const Scenario &scene, const ScenarioConfig &config, const GridConfig &grid);

    /// Draws the length of a scattered path uniformly on (d_los + 2*dd, (L-1)*q],
    /// q being the range quantum. Returns nullopt when that interval is empty.
    std::optional<double> nlos_range_draw(double d_los, const GridConfig &grid, int max_taps, Rng &rng);

    enum class PathType
    {
        TypeI,   // BS -> BS
        TypeII,  // BS -> target -> BS, both links LOS
        TypeIII, // scattered
    };

    struct TruePath
    {
        int delay{};
        PathType type{};
        std::optional<int> target;
        cdouble gain{1.0, 0.0};
    };

    struct GainModel
    {
        bool free_space_loss = false; // scale |gain| by 1 / path length
    };

    /// Every physical path of every ordered BS pair, delays in samples.
    class TruePathTable
    {
    public:
        TruePathTable(int n_bs, int max_taps);

        int n_bs() const { return n_bs_; }
        int max_taps() const { return max_taps_; }

        std::vector<TruePath> &at(int u, int m) { return paths_[u * n_bs_ + m]; }
        const std::vector<TruePath> &at(int u, int m) const { return paths_[u * n_bs_ + m]; }

        /// Sorted distinct delays of pair (u, m), the set L_{u,m}.
        std::vector<int> delay_set(int u, int m) const;

        /// Dense L-tap channel h_{u,m}; colliding paths add coherently.
        Eigen::VectorXcd taps(int u, int m) const;

    private:
        int n_bs_;
        int max_taps_;
        std::vector<std::vector<TruePath>> paths_;
    };

    TruePathTable build_true_channels(const Scenario &scene, const GridConfig &grid, int max_taps,
                                      const GainModel &gain_model, Rng &rng);
}
