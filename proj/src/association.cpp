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

#include "netsense/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace netsense
{
    Mapping::Mapping(int n_bs) : n_bs_(n_bs), entries_(static_cast<std::size_t>(n_bs) * n_bs, 0)
    {
        require(n_bs >= 1, "Mapping: n_bs must be positive");
    }

    std::vector<int> Mapping::detecting_bs() const
    {
        std::vector<int> out;
        for (int m = 0; m < n_bs_; ++m)
            if (at(m, m) > 0)
                out.push_back(m);
        return out;
    }

    int Mapping::level() const
    {
        int n = 0;
        for (int m = 0; m < n_bs_; ++m)
            n += at(m, m) > 0 ? 1 : 0;
        return n;
    }

    bool Mapping::consistent() const
    {
        for (int u = 0; u < n_bs_; ++u)
            for (int m = 0; m < n_bs_; ++m)
            {
                if (at(u, m) < 0)
                    return false;
                if (u == m)
                    continue;
                const bool both = at(u, u) > 0 && at(m, m) > 0;
                if (both != (at(u, m) > 0))
                    return false;
            }
        return true;
    }

    bool Mapping::conflicts_with(const Mapping &other) const
    {
        require(other.n_bs_ == n_bs_, "Mapping::conflicts_with: size mismatch");
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i] > 0 && entries_[i] == other.entries_[i])
                return true;
        return false;
    }

    AssociationConfig AssociationConfig::defaults_for(const GridConfig &grid)
    {
        validate(grid);
        const double dd = half_quantum(grid);
        AssociationConfig c;
        c.delta = 3.0 * dd;
        c.beta_per_level = (2.0 * dd) * (2.0 * dd);
        return c;
    }

    void validate(const AssociationConfig &config)
    {
        require(config.delta >= 0.0, "AssociationConfig: delta must be non-negative");
        require(config.beta_per_level >= 0.0 || std::isinf(config.beta_per_level),
                "AssociationConfig: beta must be non-negative");
        require(config.min_detect >= 3, "AssociationConfig: min_detect must be at least 3");
        require(config.anchor_bs >= 0, "AssociationConfig: anchor_bs must be non-negative");
        require(config.frontier_cap >= 1, "AssociationConfig: frontier_cap must be positive");
    }

    NlsProblem make_problem(const Mapping &mapping, const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                            bool include_monostatic)
    {
        const int n = ranges.n_bs();
        require(mapping.n_bs() == n, "make_problem: mapping and range set sizes differ");
        require(static_cast<int>(bs_positions.size()) == n, "make_problem: wrong number of BS positions");
        NlsProblem p;
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
            {
                const int g = mapping.at(u, m);
                if (g <= 0 || (u == m && !include_monostatic))
                    continue;
                p.terms.push_back({u, m, bs_positions[u], bs_positions[m], ranges.value(u, m, g)});
            }
        return p;
    }

    namespace
    {
        // Calls f(subset) for every ascending subset of {0..n-1} of size k.
        template <class F>
        void for_each_subset(int n, int k, F &&f)
        {
            if (k > n || k < 0)
                return;
            std::vector<int> idx(k);
            std::iota(idx.begin(), idx.end(), 0);
            while (true)
            {
                f(idx);
                int i = k - 1;
                while (i >= 0 && idx[i] == n - k + i)
                    --i;
                if (i < 0)
                    return;
                ++idx[i];
                for (int j = i + 1; j < k; ++j)
                    idx[j] = idx[j - 1] + 1;
            }
        }

        // 1-based indices of entries of `set` within [target - tol, target + tol].
        std::vector<int> entries_near(const std::vector<double> &set, double target, double tol)
        {
            std::vector<int> out;
            auto lo = std::lower_bound(set.begin(), set.end(), target - tol);
            for (auto it = lo; it != set.end() && *it <= target + tol; ++it)
                out.push_back(static_cast<int>(it - set.begin()) + 1);
            return out;
        }

        struct PairChoice
        {
            int u;
            int m;
            std::vector<int> options;
        };

        class FeasibleSearch
        {
        public:
            FeasibleSearch(const RangeSet &ranges, double delta, std::vector<Mapping> &out)
                : ranges_(ranges), delta_(delta), out_(out)
            {
            }

            void run(const std::vector<int> &subset)
            {
                subset_ = subset;
                echo_.assign(subset.size(), 0);
                pairs_.clear();
                descend(0);
            }

        private:
            void descend(std::size_t i)
            {
                if (i == subset_.size())
                {
                    emit();
                    return;
                }
                const int m = subset_[i];
                for (int g = 1; g <= ranges_.size(m, m); ++g)
                {
                    echo_[i] = g;
                    const std::size_t mark = pairs_.size();
                    bool ok = true;
                    for (std::size_t j = 0; j < i && ok; ++j)
                    {
                        const int u = subset_[j];
                        const double target = 0.5 * (ranges_.value(u, u, echo_[j]) + ranges_.value(m, m, g));
                        auto fwd = entries_near(ranges_.at(u, m), target, delta_);
                        auto rev = entries_near(ranges_.at(m, u), target, delta_);
                        if (fwd.empty() || rev.empty())
                            ok = false;
                        else
                        {
                            pairs_.push_back({u, m, std::move(fwd)});
                            pairs_.push_back({m, u, std::move(rev)});
                        }
                    }
                    if (ok)
                        descend(i + 1);
                    pairs_.resize(mark);
                }
                echo_[i] = 0;
            }

            void emit()
            {
                Mapping base(ranges_.n_bs());
                for (std::size_t i = 0; i < subset_.size(); ++i)
                    base.at(subset_[i], subset_[i]) = echo_[i];
                std::vector<std::size_t> pos(pairs_.size(), 0);
                while (true)
                {
                    Mapping g = base;
                    for (std::size_t k = 0; k < pairs_.size(); ++k)
                        g.at(pairs_[k].u, pairs_[k].m) = pairs_[k].options[pos[k]];
                    out_.push_back(std::move(g));
                    std::size_t k = pairs_.size();
                    while (k > 0)
                    {
                        --k;
                        if (++pos[k] < pairs_[k].options.size())
                            break;
                        pos[k] = 0;
                        if (k == 0)
                            return;
                    }
                    if (pairs_.empty())
                        return;
                }
            }

            const RangeSet &ranges_;
            double delta_;
            std::vector<Mapping> &out_;
            std::vector<int> subset_;
            std::vector<int> echo_;
            std::vector<PairChoice> pairs_;
        };

        double total_residual(const std::vector<const ScoredMapping *> &set)
        {
            double s = 0.0;
            for (const auto *m : set)
                s += m->fit.residual;
            return s;
        }

        std::vector<Mapping> sorted_key(const std::vector<const ScoredMapping *> &set)
        {
            std::vector<Mapping> key;
            key.reserve(set.size());
            for (const auto *m : set)
                key.push_back(m->mapping);
            std::sort(key.begin(), key.end());
            return key;
        }

        struct Partial
        {
            std::vector<const ScoredMapping *> members;
            double residual = 0.0;
        };

        bool partial_less(const Partial &a, const Partial &b)
        {
            if (a.residual != b.residual)
                return a.residual < b.residual;
            return sorted_key(a.members) < sorted_key(b.members);
        }
    }

    double count_candidate_mappings(const RangeSet &ranges, int level)
    {
        const int n = ranges.n_bs();
        require(level >= 1 && level <= n, "count_candidate_mappings: level out of range");
        double total = 0.0;
        for_each_subset(n, level, [&](const std::vector<int> &s) {
            double prod = 1.0;
            for (int u : s)
                for (int m : s)
                    prod *= ranges.size(u, m);
            total += prod;
        });
        return total;
    }

    std::vector<Mapping> enumerate_feasible(const RangeSet &ranges, int level, const AssociationConfig &config)
    {
        validate(config);
        const int n = ranges.n_bs();
        require(level >= 1 && level <= n, "enumerate_feasible: level out of range");
        std::vector<Mapping> out;
        FeasibleSearch search(ranges, config.delta + kDeltaSlack, out);
        for_each_subset(n, level, [&](const std::vector<int> &s) { search.run(s); });
        return out;
    }

    std::vector<ScoredMapping> residual_filter(const std::vector<Mapping> &candidates, const RangeSet &ranges,
                                               const std::vector<Point2D> &bs_positions, int level,
                                               const AssociationConfig &config, const GnConfig &gn,
                                               FilterReport *report)
    {
        validate(config);
        const double gate = config.beta(level);
        std::vector<ScoredMapping> out;
        std::size_t diverged = 0;
        for (const auto &g : candidates)
        {
            const NlsProblem problem = make_problem(g, ranges, bs_positions, config.include_monostatic_terms);
            LocalizationFit f = fit(problem, gn);
            if (!std::isfinite(f.residual))
            {
                ++diverged;
                continue;
            }
            if (f.residual <= gate)
                out.push_back({g, f, level});
        }
        if (report)
            report->diverged = diverged;
        return out;
    }

    int anchor_for(const RangeSet &ranges, const AssociationConfig &config)
    {
        const int n = ranges.n_bs();
        if (!config.anchor_largest_set)
        {
            require(config.anchor_bs < n, "anchor_for: anchor_bs out of range");
            return config.anchor_bs;
        }
        int best = 0;
        for (int m = 1; m < n; ++m)
            if (ranges.size(m, m) > ranges.size(best, best))
                best = m;
        return best;
    }

    std::vector<std::vector<ScoredMapping>> partition_by_anchor(const std::vector<ScoredMapping> &filtered,
                                                                const RangeSet &ranges, int anchor)
    {
        require(anchor >= 0 && anchor < ranges.n_bs(), "partition_by_anchor: anchor out of range");
        std::vector<std::vector<ScoredMapping>> parts(static_cast<std::size_t>(ranges.size(anchor, anchor)) + 1);
        for (const auto &s : filtered)
        {
            const int g = s.mapping.at(anchor, anchor);
            if (g < 0 || g > ranges.size(anchor, anchor))
                throw InvariantError("partition_by_anchor: anchor index out of range");
            parts[g].push_back(s);
        }
        return parts;
    }

    LevelSolution greedy_select(const std::vector<std::vector<ScoredMapping>> &partition, int level,
                                const AssociationConfig &config)
    {
        validate(config);
        std::vector<std::vector<const ScoredMapping *>> steps;
        if (!partition.empty())
            for (const auto &s : partition[0])
                steps.push_back({&s});
        for (std::size_t i = 1; i < partition.size(); ++i)
        {
            std::vector<const ScoredMapping *> group;
            for (const auto &s : partition[i])
                group.push_back(&s);
            if (!group.empty())
                steps.push_back(std::move(group));
        }

        LevelSolution sol;
        sol.level = level;
        std::vector<Partial> frontier(1);
        for (const auto &group : steps)
        {
            std::vector<Partial> next;
            for (const auto &part : frontier)
                for (const auto *cand : group)
                {
                    const bool clash = std::any_of(part.members.begin(), part.members.end(), [&](const auto *m) {
                        return m->mapping.conflicts_with(cand->mapping);
                    });
                    if (clash)
                        continue;
                    Partial ext = part;
                    ext.members.push_back(cand);
                    ext.residual += cand->fit.residual;
                    next.push_back(std::move(ext));
                }
            if (next.empty())
                continue;
            if (next.size() > config.frontier_cap)
            {
                std::sort(next.begin(), next.end(), partial_less);
                next.resize(config.frontier_cap);
                sol.truncated = true;
            }
            frontier = std::move(next);
        }

        const Partial &best = *std::min_element(frontier.begin(), frontier.end(), partial_less);
        for (const auto *m : best.members)
            sol.mappings.push_back(*m);
        sol.total_residual = total_residual(best.members);
        return sol;
    }

    LevelSolution solve_level(const RangeSet &ranges, int level, const std::vector<Point2D> &bs_positions,
                              const AssociationConfig &config, const GnConfig &gn, LevelStats *stats)
    {
        FilterReport report;
        const auto feasible = enumerate_feasible(ranges, level, config);
        const auto filtered = residual_filter(feasible, ranges, bs_positions, level, config, gn, &report);
        const auto parts = partition_by_anchor(filtered, ranges, anchor_for(ranges, config));
        LevelSolution sol = greedy_select(parts, level, config);
        if (stats)
        {
            stats->level = level;
            stats->n_candidates = count_candidate_mappings(ranges, level);
            stats->n_feasible = feasible.size();
            stats->n_filtered = filtered.size();
            stats->n_selected = sol.mappings.size();
            stats->diverged = report.diverged;
            stats->truncated = sol.truncated;
        }
        return sol;
    }

    SensingResult solve_all(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                            const AssociationConfig &config, const GnConfig &gn)
    {
        validate(config);
        const int n = ranges.n_bs();
        require(n >= config.min_detect, "solve_all: fewer BSs than min_detect");
        require(static_cast<int>(bs_positions.size()) == n, "solve_all: wrong number of BS positions");

        RangeSet working = ranges;
        // index_map[u*n+m][g-1] = original 1-based index of working entry g.
        std::vector<std::vector<int>> index_map(static_cast<std::size_t>(n) * n);
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
            {
                auto &map = index_map[u * n + m];
                map.resize(ranges.size(u, m));
                std::iota(map.begin(), map.end(), 1);
            }

        std::vector<std::vector<char>> claimed(static_cast<std::size_t>(n) * n);
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
                claimed[u * n + m].assign(ranges.size(u, m), 0);

        SensingResult result;
        for (int level = n; level >= config.min_detect; --level)
        {
            LevelStats stats;
            LevelSolution sol = solve_level(working, level, bs_positions, config, gn, &stats);
            result.levels.push_back(stats);
            if (sol.mappings.empty())
                continue;

            std::vector<std::vector<char>> drop(static_cast<std::size_t>(n) * n);
            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                    drop[u * n + m].assign(working.size(u, m), 0);

            for (const auto &s : sol.mappings)
            {
                DetectedTarget t;
                t.location = s.fit.location;
                t.residual = s.fit.residual;
                t.level = level;
                t.mapping = Mapping(n);
                for (int u = 0; u < n; ++u)
                    for (int m = 0; m < n; ++m)
                    {
                        const int g = s.mapping.at(u, m);
                        if (g == 0)
                            continue;
                        const int orig = index_map[u * n + m][g - 1];
                        auto &c = claimed[u * n + m][orig - 1];
                        if (c)
                            throw InvariantError("solve_all: range entry claimed twice");
                        c = 1;
                        drop[u * n + m][g - 1] = 1;
                        t.mapping.at(u, m) = orig;
                    }
                result.targets.push_back(std::move(t));
            }

            RangeSet next(n);
            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                {
                    std::vector<double> keep;
                    std::vector<int> keep_map;
                    const auto &vals = working.at(u, m);
                    for (std::size_t i = 0; i < vals.size(); ++i)
                        if (!drop[u * n + m][i])
                        {
                            keep.push_back(vals[i]);
                            keep_map.push_back(index_map[u * n + m][i]);
                        }
                    next.assign(u, m, std::move(keep));
                    index_map[u * n + m] = std::move(keep_map);
                }
            working = std::move(next);
        }
        return result;
    }

    std::vector<ErrorPropagationEvent> detect_error_propagation(const SensingResult &result, const RangeLabels &labels,
                                                                int n_targets)
    {
        std::vector<ErrorPropagationEvent> events;
        for (std::size_t i = 0; i < result.targets.size(); ++i)
        {
            const auto &t = result.targets[i];
            if (t.level <= 3)
                continue;
            require(t.mapping.n_bs() == labels.n_bs, "detect_error_propagation: size mismatch");
            std::vector<int> shared(static_cast<std::size_t>(std::max(n_targets, 0)), 0);
            for (int m = 0; m < labels.n_bs; ++m)
            {
                const int g = t.mapping.at(m, m);
                if (g <= 0)
                    continue;
                const auto &entry = labels.at(m, m);
                if (g > static_cast<int>(entry.size()))
                    throw InvariantError("detect_error_propagation: label table too small");
                std::set<int> owners(entry[g - 1].los_targets.begin(), entry[g - 1].los_targets.end());
                for (int k : owners)
                    if (k >= 0 && k < n_targets)
                        ++shared[k];
            }
            const int best = shared.empty() ? 0 : *std::max_element(shared.begin(), shared.end());
            if (best <= 2)
                events.push_back({i, t.level, best});
        }
        return events;
    }
}
