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

#include <cstddef>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/geometry.hpp"
#include "netsense/localizer.hpp"
#include "netsense/ranging.hpp"

namespace netsense
{
    /// Candidate assignment of one hypothesised target: entry (u, m) is a 1-based
    /// index into D_{u,m}, 0 when the target contributes no range there.
    class Mapping
    {
    public:
        Mapping() = default;
        explicit Mapping(int n_bs);

        int n_bs() const { return n_bs_; }
        int &at(int u, int m) { return entries_[u * n_bs_ + m]; }
        int at(int u, int m) const { return entries_[u * n_bs_ + m]; }
        const std::vector<int> &entries() const { return entries_; }

        /// M(G): BSs whose echo entry g_{m,m} is positive, ascending.
        std::vector<int> detecting_bs() const;
        int level() const;

        /// g_{u,m} > 0 exactly when g_{u,u} > 0 and g_{m,m} > 0.
        bool consistent() const;

        /// True when both mappings use the same positive index at some (u, m).
        bool conflicts_with(const Mapping &other) const;

        friend bool operator==(const Mapping &, const Mapping &) = default;
        friend bool operator<(const Mapping &a, const Mapping &b) { return a.entries_ < b.entries_; }

    private:
        int n_bs_ = 0;
        std::vector<int> entries_;
    };

    /// Absolute slack (m) added to delta. Bin-centre ranges differ by multiples
    /// of dd, so sums landing exactly on delta = 3 dd are common and must not be
    /// decided by rounding.
    inline constexpr double kDeltaSlack = 1e-9;

    struct AssociationConfig
    {
        // Defaults match defaults_for(GridConfig{}).
        double delta = 3.0 * kSpeedOfLight / (2.0 * 3300 * 120e3); // sum-range tolerance, m
        double beta_per_level = kSpeedOfLight * kSpeedOfLight / (3300.0 * 120e3 * 3300.0 * 120e3); // m^2
        int min_detect = 3;
        int anchor_bs = 0;                // BS whose echo index partitions the candidates
        bool anchor_largest_set = false;  // use the BS with the most echo ranges instead
        std::size_t frontier_cap = 256;
        bool include_monostatic_terms = true;

        double beta(int level) const { return beta_per_level * level; }

        /// delta = 3 dd and beta(l) = l (2 dd)^2 for the half quantum dd of `grid`.
        static AssociationConfig defaults_for(const GridConfig &grid);
    };

    void validate(const AssociationConfig &config);

    struct ScoredMapping
    {
        Mapping mapping;
        LocalizationFit fit;
        int level = 0;
    };

    /// One term per positive entry (u, m); echo terms are skipped when
    /// include_monostatic is false.
    NlsProblem make_problem(const Mapping &mapping, const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                            bool include_monostatic = true);

    /// |G^(l)|: mappings satisfying only the index bounds and |M(G)| = l, counted
    /// in closed form as sum over BS subsets S of prod_{u,m in S} N_{u,m}.
    double count_candidate_mappings(const RangeSet &ranges, int level);

    /// The set Gbar^(l): every mapping with exactly `level` detecting BSs whose
    /// echo and bistatic ranges satisfy both sum-range conditions within
    /// delta + kDeltaSlack.
    /// BS subsets and echo indices are enumerated first; each bistatic pair is
    /// checked as soon as both of its echo ranges are fixed.
    std::vector<Mapping> enumerate_feasible(const RangeSet &ranges, int level, const AssociationConfig &config);

    struct FilterReport
    {
        std::size_t diverged = 0;
    };

    /// The set Gtilde^(l): candidates whose localization residual is <= beta(level).
    /// Candidates whose fit diverges are dropped and counted.
    std::vector<ScoredMapping> residual_filter(const std::vector<Mapping> &candidates, const RangeSet &ranges,
                                               const std::vector<Point2D> &bs_positions, int level,
                                               const AssociationConfig &config, const GnConfig &gn,
                                               FilterReport *report = nullptr);

    int anchor_for(const RangeSet &ranges, const AssociationConfig &config);

    /// Subset i holds the mappings with g_{a,a} = i for the anchor BS a,
    /// i = 0 .. N_{a,a}.
    std::vector<std::vector<ScoredMapping>> partition_by_anchor(const std::vector<ScoredMapping> &filtered,
                                                                const RangeSet &ranges, int anchor);

    struct LevelSolution
    {
        int level = 0;
        std::vector<ScoredMapping> mappings;
        double total_residual = 0.0;
        bool truncated = false;

        int count() const { return static_cast<int>(mappings.size()); }
    };

    /// Greedy maximisation over the anchor partition with a frontier of partial
    /// solutions. Mappings of subset 0 are visited one at a time, since targets
    /// invisible to the anchor need not conflict with each other. The frontier is
    /// capped at frontier_cap sets, lowest total residual first; among the final
    /// sets the lowest total residual wins, ties broken lexicographically.
    LevelSolution greedy_select(const std::vector<std::vector<ScoredMapping>> &partition, int level,
                                const AssociationConfig &config);

    struct LevelStats
    {
        int level = 0;
        double n_candidates = 0.0;   // |G^(l)|
        std::size_t n_feasible = 0;  // |Gbar^(l)|
        std::size_t n_filtered = 0;  // |Gtilde^(l)|
        std::size_t n_selected = 0;
        std::size_t diverged = 0;
        bool truncated = false;
    };

    LevelSolution solve_level(const RangeSet &ranges, int level, const std::vector<Point2D> &bs_positions,
                              const AssociationConfig &config, const GnConfig &gn, LevelStats *stats = nullptr);

    struct DetectedTarget
    {
        Point2D location;
        double residual = 0.0;
        int level = 0;
        Mapping mapping; // indices into the original range sets
    };

    struct SensingResult
    {
        std::vector<DetectedTarget> targets;
        std::vector<LevelStats> levels;

        int count() const { return static_cast<int>(targets.size()); }
    };

    /// Level-by-level solve from M down to min_detect. Ranges claimed at one level
    /// are removed before the next; reported mappings always index the original
    /// range sets.
    SensingResult solve_all(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                            const AssociationConfig &config, const GnConfig &gn);

    /// Ground-truth owners of each range entry: targets whose Type II path, or
    /// whose scattered path, falls in that entry's delay bin.
    struct RangeLabel
    {
        std::vector<int> los_targets;
        std::vector<int> nlos_targets;
    };

    struct RangeLabels
    {
        int n_bs = 0;
        std::vector<std::vector<RangeLabel>> entries; // [u * M + m][g - 1]

        const std::vector<RangeLabel> &at(int u, int m) const { return entries[u * n_bs + m]; }
        std::vector<RangeLabel> &at(int u, int m) { return entries[u * n_bs + m]; }
    };

    struct ErrorPropagationEvent
    {
        std::size_t target_index = 0; // into SensingResult::targets
        int level = 0;
        int max_shared_echoes = 0;
    };

    /// Accepted mappings above level 3 sharing at most two echo ranges with every
    /// true target.
    std::vector<ErrorPropagationEvent> detect_error_propagation(const SensingResult &result, const RangeLabels &labels,
                                                                int n_targets);
}
