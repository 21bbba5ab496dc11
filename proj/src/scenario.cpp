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

#include "netsense/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netsense
{
    namespace
    {
        double pair_distance(const std::vector<Point2D> &bs, int u, int m)
        {
            return direct_distance(bs[u], bs[m]);
        }

        // Whether a target at p, seen by the BSs flagged in `los`, keeps every
        // Type II path resolvable from the Type I path, from the Type II paths
        // of the already placed targets, and inside the L-tap window.
        // placed_los[j] is the LOS row of placed[j]; extra rows are ignored.
        bool placement_ok(const Point2D &p, const std::vector<Point2D> &bs, const std::vector<bool> &los,
                          const std::vector<Point2D> &placed, const std::vector<std::vector<bool>> &placed_los,
                          const GridConfig &grid, int max_taps)
        {
            const double min_gap = 2.0 * half_quantum(grid);
            const int n = static_cast<int>(bs.size());
            for (int u = 0; u < n; ++u)
            {
                if (!los[u])
                    continue;
                for (int m = u; m < n; ++m)
                {
                    if (!los[m])
                        continue;
                    const double d = sum_distance(bs[u], bs[m], p);
                    if (delay_in_samples(d, grid) > max_taps - 1)
                        return false;
                    if (u != m && d - pair_distance(bs, u, m) <= min_gap)
                        return false;
                    for (std::size_t j = 0; j < placed.size(); ++j)
                    {
                        if (!placed_los[j][u] || !placed_los[j][m])
                            continue;
                        if (std::abs(d - sum_distance(bs[u], bs[m], placed[j])) <= min_gap)
                            return false;
                    }
                }
            }
            return true;
        }

        std::string describe(int u, int m, int k)
        {
            std::ostringstream os;
            os << "(u=" << u << ", m=" << m << ", k=" << k << ")";
            return os.str();
        }
    }

    std::vector<int> Scenario::detecting_bs(int k) const
    {
        std::vector<int> out;
        for (int m = 0; m < n_bs(); ++m)
            if (los(m, k))
                out.push_back(m);
        return out;
    }

    void validate(const ScenarioConfig &config, const GridConfig &grid)
    {
        validate(grid);
        require(config.n_bs >= 3, "scenario: at least three BSs are required");
        require(config.n_targets >= 0, "scenario: n_targets must be >= 0");
        require(config.area_side > 0.0, "scenario: area_side must be > 0");
        require(config.blockage_prob >= 0.0 && config.blockage_prob <= 1.0, "scenario: blockage_prob outside [0,1]");
        require(config.nlos_prob >= 0.0 && config.nlos_prob <= 1.0, "scenario: nlos_prob outside [0,1]");
        require(config.max_sto >= 0, "scenario: max_sto must be >= 0");
        require(config.max_taps >= 1, "scenario: max_taps must be >= 1");
        require(config.max_attempts >= 1, "scenario: max_attempts must be >= 1");
        require(config.min_bs_separation >= 0.0, "scenario: min_bs_separation must be >= 0");
        require(delay_in_samples(config.min_bs_separation, grid) >= config.max_sto,
                "scenario: min_bs_separation too small; shifted Type I delays could become negative");
    }

    std::optional<double> nlos_range_draw(double d_los, const GridConfig &grid, int max_taps, Rng &rng)
    {
        require(d_los > 0.0, "nlos_range_draw: d_los must be > 0");
        const double lo = d_los + 2.0 * half_quantum(grid);
        const double hi = (max_taps - 1) * range_quantum(grid);
        if (!(lo < hi))
            return std::nullopt;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        // hi - U*(hi-lo) with U in [0,1) lands in (lo, hi]
        return hi - unit(rng) * (hi - lo);
    }

    Scenario generate(const ScenarioConfig &config, const GridConfig &grid)
    {
        validate(config, grid);

        Rng rng(config.rng_seed);
        std::uniform_real_distribution<double> coord(0.0, config.area_side);
        std::bernoulli_distribution blocked(config.blockage_prob);
        std::bernoulli_distribution scattered(config.nlos_prob);
        std::uniform_int_distribution<int> offset(-config.max_sto, config.max_sto);

        const int n_bs = config.n_bs;
        const int n_targets = config.n_targets;
        Scenario scene;

        bool placed = false;
        for (int attempt = 0; attempt < config.max_attempts && !placed; ++attempt)
        {
            scene.bs_positions.clear();
            for (int m = 0; m < n_bs; ++m)
                scene.bs_positions.push_back({coord(rng), coord(rng)});
            placed = true;
            for (int u = 0; u < n_bs && placed; ++u)
                for (int m = u + 1; m < n_bs && placed; ++m)
                    placed = pair_distance(scene.bs_positions, u, m) >= config.min_bs_separation;
        }
        if (!placed)
            throw ScenarioError("generate: could not place BSs with the requested minimum separation");

        scene.sto = IntMatrix::Zero(n_bs, n_bs);
        for (int u = 0; u < n_bs; ++u)
            for (int m = u + 1; m < n_bs; ++m)
            {
                const int tau = offset(rng);
                scene.sto(u, m) = tau;
                scene.sto(m, u) = -tau;
            }

        // Blockage rows: a row leaving fewer than three LOS links is redrawn.
        std::vector<std::vector<bool>> rows(n_targets, std::vector<bool>(n_bs, true));
        for (int k = 0; k < n_targets; ++k)
        {
            bool ok = false;
            for (int attempt = 0; attempt < config.max_attempts && !ok; ++attempt)
            {
                int visible = 0;
                for (int m = 0; m < n_bs; ++m)
                {
                    rows[k][m] = !blocked(rng);
                    visible += rows[k][m] ? 1 : 0;
                }
                ok = visible >= 3;
            }
            if (!ok)
                throw ScenarioError("generate: blockage row repair did not converge for target " + std::to_string(k));
        }

        for (int k = 0; k < n_targets; ++k)
        {
            bool ok = false;
            Point2D p;
            for (int attempt = 0; attempt < config.max_attempts && !ok; ++attempt)
            {
                p = {coord(rng), coord(rng)};
                ok = placement_ok(p, scene.bs_positions, rows[k], scene.target_positions, rows, grid,
                                  config.max_taps);
            }
            if (!ok)
                throw ScenarioError("generate: rejection sampling of target " + std::to_string(k) +
                                    " exhausted its attempt budget");
            scene.target_positions.push_back(p);
        }

        scene.los_mask.assign(n_bs, std::vector<bool>(n_targets, true));
        for (int k = 0; k < n_targets; ++k)
            for (int m = 0; m < n_bs; ++m)
                scene.los_mask[m][k] = rows[k][m];

        auto add_scattered = [&](int u, int m, int k, bool mirror)
        {
            const double d = sum_distance(scene.bs_positions[u], scene.bs_positions[m], scene.target_positions[k]);
            const auto range = nlos_range_draw(d, grid, config.max_taps, rng);
            if (!range)
            {
                scene.warnings.push_back("scattered path " + describe(u, m, k) + " not resolvable; dropped");
                return;
            }
            scene.nlos_paths.push_back({u, m, k, *range});
            if (mirror)
                scene.nlos_paths.push_back({m, u, k, *range});
        };

        for (int u = 0; u < n_bs; ++u)
            for (int m = config.reciprocal_nlos ? u : 0; m < n_bs; ++m)
                for (int k = 0; k < n_targets; ++k)
                    if (scattered(rng))
                        add_scattered(u, m, k, config.reciprocal_nlos && u != m);

        return scene;
    }

    void validate(const Scenario &scene, const ScenarioConfig &config, const GridConfig &grid)
    {
        const int n_bs = scene.n_bs();
        const int n_targets = scene.n_targets();
        const double min_gap = 2.0 * half_quantum(grid);
        auto fail = [](const std::string &what) { throw ScenarioError("scenario invariant: " + what); };

        if (static_cast<int>(scene.los_mask.size()) != n_bs)
            fail("los_mask row count differs from BS count");
        for (const auto &row : scene.los_mask)
            if (static_cast<int>(row.size()) != n_targets)
                fail("los_mask column count differs from target count");
        if (scene.sto.rows() != n_bs || scene.sto.cols() != n_bs)
            fail("STO matrix has wrong shape");

        for (int k = 0; k < n_targets; ++k)
            if (scene.detecting_bs(k).size() < 3)
                fail("target " + std::to_string(k) + " has fewer than three LOS BSs");

        for (int u = 0; u < n_bs; ++u)
        {
            if (scene.sto(u, u) != 0)
                fail("non-zero diagonal STO");
            for (int m = 0; m < n_bs; ++m)
            {
                if (scene.sto(u, m) != -scene.sto(m, u))
                    fail("STO matrix not antisymmetric at " + describe(u, m, -1));
                if (std::abs(scene.sto(u, m)) > config.max_sto)
                    fail("STO exceeds max_sto at " + describe(u, m, -1));
                if (u != m &&
                    delay_in_samples(pair_distance(scene.bs_positions, u, m), grid) + scene.sto(u, m) < 0)
                    fail("negative shifted Type I delay at " + describe(u, m, -1));
            }
        }

        for (int u = 0; u < n_bs; ++u)
            for (int m = u; m < n_bs; ++m)
                for (int k = 0; k < n_targets; ++k)
                {
                    if (!scene.los(u, k) || !scene.los(m, k))
                        continue;
                    const double d = sum_distance(scene.bs_positions[u], scene.bs_positions[m],
                                                  scene.target_positions[k]);
                    if (delay_in_samples(d, grid) > config.max_taps - 1)
                        fail("Type II delay beyond L at " + describe(u, m, k));
                    if (u != m && d - pair_distance(scene.bs_positions, u, m) <= min_gap)
                        fail("Type II path unresolvable from Type I at " + describe(u, m, k));
                    for (int j = k + 1; j < n_targets; ++j)
                    {
                        if (!scene.los(u, j) || !scene.los(m, j))
                            continue;
                        const double dj = sum_distance(scene.bs_positions[u], scene.bs_positions[m],
                                                       scene.target_positions[j]);
                        if (std::abs(d - dj) <= min_gap)
                            fail("Type II paths of targets " + std::to_string(k) + " and " + std::to_string(j) +
                                 " unresolvable at " + describe(u, m, k));
                    }
                }

        for (const auto &path : scene.nlos_paths)
        {
            if (path.u < 0 || path.u >= n_bs || path.m < 0 || path.m >= n_bs || path.k < 0 || path.k >= n_targets)
                fail("scattered path indexes out of range");
            const double d = sum_distance(scene.bs_positions[path.u], scene.bs_positions[path.m],
                                          scene.target_positions[path.k]);
            if (!(path.range > d))
                fail("scattered path without positive bias at " + describe(path.u, path.m, path.k));
        }
    }

    TruePathTable::TruePathTable(int n_bs, int max_taps)
        : n_bs_(n_bs), max_taps_(max_taps), paths_(static_cast<std::size_t>(n_bs) * n_bs)
    {
    }

    std::vector<int> TruePathTable::delay_set(int u, int m) const
    {
        std::vector<int> delays;
        for (const auto &path : at(u, m))
            delays.push_back(path.delay);
        std::sort(delays.begin(), delays.end());
        delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
        return delays;
    }

    Eigen::VectorXcd TruePathTable::taps(int u, int m) const
    {
        Eigen::VectorXcd h = Eigen::VectorXcd::Zero(max_taps_);
        for (const auto &path : at(u, m))
            h[path.delay] += path.gain;
        return h;
    }

    TruePathTable build_true_channels(const Scenario &scene, const GridConfig &grid, int max_taps,
                                      const GainModel &gain_model, Rng &rng)
    {
        const int n_bs = scene.n_bs();
        TruePathTable table(n_bs, max_taps);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

        auto push = [&](int u, int m, double length, PathType type, std::optional<int> target)
        {
            const long delay = delay_in_samples(length, grid);
            if (delay >= max_taps)
            {
                const char *name = type == PathType::TypeI ? "Type I" : type == PathType::TypeII ? "Type II" : "Type III";
                throw ChannelError(std::string("build_true_channels: ") + name + " path " +
                                   describe(u, m, target.value_or(-1)) + " has delay " + std::to_string(delay) +
                                   " >= L = " + std::to_string(max_taps));
            }
            double magnitude = 1.0;
            if (gain_model.free_space_loss && length > 0.0)
                magnitude = 1.0 / length;
            table.at(u, m).push_back({static_cast<int>(delay), type, target, std::polar(magnitude, phase(rng))});
        };

        for (int u = 0; u < n_bs; ++u)
            for (int m = 0; m < n_bs; ++m)
            {
                if (u != m)
                    push(u, m, pair_distance(scene.bs_positions, u, m), PathType::TypeI, std::nullopt);
                for (int k = 0; k < scene.n_targets(); ++k)
                    if (scene.los(u, k) && scene.los(m, k))
                        push(u, m, sum_distance(scene.bs_positions[u], scene.bs_positions[m], scene.target_positions[k]),
                             PathType::TypeII, k);
                for (const auto &path : scene.nlos_paths)
                    if (path.u == u && path.m == m)
                        push(u, m, path.range, PathType::TypeIII, path.k);
            }
        return table;
    }
}
