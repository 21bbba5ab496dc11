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

#include "netsense/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace netsense
{
    std::string to_string(Method method)
    {
        switch (method)
        {
        case Method::Proposed:
            return "proposed";
        case Method::Benchmark1:
            return "bench1";
        case Method::Benchmark2:
            return "bench2";
        }
        return "unknown";
    }

    Method method_from_string(const std::string &name)
    {
        if (name == "proposed")
            return Method::Proposed;
        if (name == "bench1")
            return Method::Benchmark1;
        if (name == "bench2")
            return Method::Benchmark2;
        throw PreconditionError("unknown method '" + name + "' (expected proposed, bench1 or bench2)");
    }

    AssociationConfig ExperimentConfig::association() const
    {
        AssociationConfig out = assoc;
        const AssociationConfig derived = AssociationConfig::defaults_for(grid());
        out.delta = delta.value_or(derived.delta);
        out.beta_per_level = beta_per_level.value_or(derived.beta_per_level);
        return out;
    }

    void validate(const ExperimentConfig &config)
    {
        require(config.trials >= 1, "experiment: trials must be >= 1");
        require(config.success_radius > 0.0, "experiment: success_radius must be > 0");
        require(config.parallelism >= 1, "experiment: parallelism must be >= 1");
        require(config.penalty_scale >= 0.0, "experiment: penalty_scale must be >= 0");
        require(config.ofdm.n_subcarriers >= 1, "experiment: n_subcarriers must be >= 1");
        validate(config.grid());
        validate(config.scenario, config.grid());
        validate(config.ofdm, config.scenario.max_taps, config.scenario.max_sto);
        validate(config.lasso);
        validate(config.association());
        require(config.gn.max_iterations >= 1, "experiment: gn.max_iterations must be >= 1");
        require(config.gn.multistart >= 1, "experiment: gn.multistart must be >= 1");
    }

    bool phase1_error_metric(const SupportSets &support, const StoEstimate &sto, const TruePathTable &paths)
    {
        if (!sto.ok())
            return true;
        const int n = support.n_bs;
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
            {
                std::vector<int> got = corrected_delays(support, sto, u, m);
                std::sort(got.begin(), got.end());
                if (got != paths.delay_set(u, m))
                    return true;
            }
        return false;
    }

    RangeLabels label_ranges(const RangeSet &ranges, const TruePathTable &paths, const GridConfig &grid)
    {
        const int n = ranges.n_bs();
        const double q = range_quantum(grid);
        RangeLabels labels;
        labels.n_bs = n;
        labels.entries.resize(static_cast<std::size_t>(n) * n);
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
            {
                auto &row = labels.at(u, m);
                for (double r : ranges.at(u, m))
                {
                    const long bin = std::lround(r / q - 0.5);
                    RangeLabel label;
                    for (const auto &path : paths.at(u, m))
                    {
                        if (path.delay != bin || !path.target)
                            continue;
                        if (path.type == PathType::TypeII)
                            label.los_targets.push_back(*path.target);
                        else if (path.type == PathType::TypeIII)
                            label.nlos_targets.push_back(*path.target);
                    }
                    row.push_back(std::move(label));
                }
            }
        return labels;
    }

    PhaseOneResult run_phase_one(const ExperimentConfig &config, std::size_t trial_index)
    {
        const GridConfig grid = config.grid();
        Rng rng(mix_seed(config.seed, trial_index));

        PhaseOneResult out;
        ScenarioConfig sc = config.scenario;
        sc.rng_seed = rng();
        out.scene = generate(sc, grid);
        out.warnings = out.scene.warnings;

        out.paths = build_true_channels(out.scene, grid, sc.max_taps, config.gain, rng);
        const int span = config.tap_span();
        const VirtualChannels channels = virtual_shift(out.paths, out.scene.sto, span);
        const PilotMatrix pilots = PilotMatrix::random_qpsk(sc.n_bs, config.ofdm.n_subcarriers, rng);
        const auto measurements = synthesize(pilots, channels, config.ofdm, rng);

        const OfdmSensingOperator op(pilots, span, config.ofdm.tx_power);
        LassoConfig lasso = config.lasso;
        if (config.ofdm.noise_variance > 0.0)
            lasso.penalty = std::max(lasso.penalty,
                                     universal_penalty(config.penalty_scale, config.ofdm.noise_variance,
                                                       config.ofdm.tx_power, config.ofdm.n_subcarriers, op.cols()));
        const RecoveredChannels recovered = recover_channels(op, measurements, lasso);
        out.lasso_converged = recovered.all_converged();

        out.support = extract_support(recovered, lasso.support_threshold);
        out.sto = estimate_sto(out.support, out.scene.bs_positions, grid);
        out.error = phase1_error_metric(out.support, out.sto, out.paths);
        out.ranges = ranges_from_support(out.support, out.sto, grid, &out.warnings);
        out.labels = label_ranges(out.ranges, out.paths, grid);
        return out;
    }

    namespace
    {
        double distance(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

        template <class F>
        void for_each_subset(const std::vector<int> &pool, int k, F &&f)
        {
            const int n = static_cast<int>(pool.size());
            if (k > n || k <= 0)
                return;
            std::vector<int> idx(k);
            for (int i = 0; i < k; ++i)
                idx[i] = i;
            std::vector<int> subset(k);
            while (true)
            {
                for (int i = 0; i < k; ++i)
                    subset[i] = pool[idx[i]];
                f(subset);
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

        bool owned_by(const RangeLabel &label, int k)
        {
            return std::find(label.los_targets.begin(), label.los_targets.end(), k) != label.los_targets.end() ||
                   std::find(label.nlos_targets.begin(), label.nlos_targets.end(), k) != label.nlos_targets.end();
        }
    }

    SensingResult benchmark1(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                             const AssociationConfig &config, const GnConfig &gn, double merge_radius)
    {
        validate(config);
        const int n = ranges.n_bs();
        require(n >= config.min_detect, "benchmark1: fewer BSs than min_detect");
        SensingResult result;
        std::vector<DetectedTarget> all;
        for (int level = n; level >= config.min_detect; --level)
        {
            FilterReport report;
            const auto feasible = enumerate_feasible(ranges, level, config);
            auto filtered = residual_filter(feasible, ranges, bs_positions, level, config, gn, &report);
            LevelStats stats;
            stats.level = level;
            stats.n_candidates = count_candidate_mappings(ranges, level);
            stats.n_feasible = feasible.size();
            stats.n_filtered = filtered.size();
            stats.diverged = report.diverged;
            std::stable_sort(filtered.begin(), filtered.end(),
                             [](const ScoredMapping &a, const ScoredMapping &b) { return a.fit.residual < b.fit.residual; });
            for (auto &s : filtered)
                all.push_back({s.fit.location, s.fit.residual, level, std::move(s.mapping)});
            result.levels.push_back(stats);
        }
        for (auto &t : all)
        {
            const bool duplicate = std::any_of(result.targets.begin(), result.targets.end(), [&](const DetectedTarget &d) {
                return distance(d.location, t.location) <= merge_radius;
            });
            if (!duplicate)
                result.targets.push_back(std::move(t));
        }
        for (auto &stats : result.levels)
            stats.n_selected = static_cast<std::size_t>(std::count_if(
                result.targets.begin(), result.targets.end(), [&](const DetectedTarget &d) { return d.level == stats.level; }));
        return result;
    }

    SensingResult benchmark2(const RangeSet &ranges, const RangeLabels &labels, int n_targets,
                             const std::vector<Point2D> &bs_positions, const AssociationConfig &config,
                             const GnConfig &gn)
    {
        validate(config);
        const int n = ranges.n_bs();
        require(labels.n_bs == n, "benchmark2: label table size mismatch");
        require(static_cast<int>(bs_positions.size()) == n, "benchmark2: wrong number of BS positions");
        SensingResult result;
        for (int k = 0; k < n_targets; ++k)
        {
            // Smallest index per pair attributed to k; 0 when none.
            Mapping own(n);
            for (int u = 0; u < n; ++u)
                for (int m = 0; m < n; ++m)
                {
                    const auto &row = labels.at(u, m);
                    for (std::size_t g = 0; g < row.size(); ++g)
                        if (owned_by(row[g], k))
                        {
                            own.at(u, m) = static_cast<int>(g) + 1;
                            break;
                        }
                }
            std::vector<int> pool;
            for (int m = 0; m < n; ++m)
                if (own.at(m, m) > 0)
                    pool.push_back(m);

            std::optional<DetectedTarget> best;
            for (int size = static_cast<int>(pool.size()); size >= config.min_detect && !best; --size)
                for_each_subset(pool, size, [&](const std::vector<int> &subset) {
                    Mapping g(n);
                    for (int u : subset)
                        for (int m : subset)
                        {
                            if (own.at(u, m) == 0)
                                return;
                            g.at(u, m) = own.at(u, m);
                        }
                    const LocalizationFit f =
                        fit(make_problem(g, ranges, bs_positions, config.include_monostatic_terms), gn);
                    if (!std::isfinite(f.residual) || f.residual > config.beta(size))
                        return;
                    if (!best || f.residual < best->residual)
                        best = DetectedTarget{f.location, f.residual, size, g};
                });
            if (best)
                result.targets.push_back(std::move(*best));
        }
        return result;
    }

    int count_correct(const std::vector<Point2D> &estimates, const std::vector<Point2D> &truth, double radius)
    {
        struct Pair
        {
            double d;
            std::size_t i;
            std::size_t j;
        };
        std::vector<Pair> pairs;
        for (std::size_t i = 0; i < estimates.size(); ++i)
            for (std::size_t j = 0; j < truth.size(); ++j)
            {
                const double d = distance(estimates[i], truth[j]);
                if (d <= radius)
                    pairs.push_back({d, i, j});
            }
        std::sort(pairs.begin(), pairs.end(), [](const Pair &a, const Pair &b) {
            return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
        });
        std::vector<char> used_est(estimates.size(), 0), used_truth(truth.size(), 0);
        int matched = 0;
        for (const auto &p : pairs)
            if (!used_est[p.i] && !used_truth[p.j])
            {
                used_est[p.i] = used_truth[p.j] = 1;
                ++matched;
            }
        return matched;
    }

    std::vector<TrialOutcome> run_trial(const ExperimentConfig &config, std::size_t trial_index,
                                        const std::vector<Method> &methods)
    {
        std::vector<TrialOutcome> outcomes(methods.size());
        for (auto &o : outcomes)
        {
            o.trial_index = trial_index;
            o.true_count = config.scenario.n_targets;
        }
        PhaseOneResult p1;
        try
        {
            p1 = run_phase_one(config, trial_index);
        }
        catch (const Error &e)
        {
            for (auto &o : outcomes)
            {
                o.failed = true;
                o.phase1_error = true;
                o.diagnostic = std::string("phase I: ") + e.what();
            }
            return outcomes;
        }

        const AssociationConfig assoc = config.association();
        for (std::size_t i = 0; i < methods.size(); ++i)
        {
            auto &o = outcomes[i];
            o.true_count = p1.scene.n_targets();
            o.phase1_error = p1.error;
            try
            {
                const auto start = std::chrono::steady_clock::now();
                SensingResult result;
                switch (methods[i])
                {
                case Method::Proposed:
                    result = solve_all(p1.ranges, p1.scene.bs_positions, assoc, config.gn);
                    break;
                case Method::Benchmark1:
                    result = benchmark1(p1.ranges, p1.scene.bs_positions, assoc, config.gn, config.success_radius);
                    break;
                case Method::Benchmark2:
                    result = benchmark2(p1.ranges, p1.labels, p1.scene.n_targets(), p1.scene.bs_positions, assoc,
                                        config.gn);
                    break;
                }
                o.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                std::vector<Point2D> located;
                for (const auto &t : result.targets)
                    located.push_back(t.location);
                o.detected_count = result.count();
                o.correct_count = count_correct(located, p1.scene.target_positions, config.success_radius);
                o.levels = result.levels;
                if (methods[i] == Method::Proposed)
                    o.error_propagation_events = static_cast<int>(
                        detect_error_propagation(result, p1.labels, p1.scene.n_targets()).size());
            }
            catch (const Error &e)
            {
                o.failed = true;
                o.detected_count = 0;
                o.correct_count = 0;
                o.diagnostic = std::string("phase II: ") + e.what();
            }
        }
        return outcomes;
    }

    TrialOutcome run_trial(const ExperimentConfig &config, std::size_t trial_index)
    {
        return run_trial(config, trial_index, {config.method}).front();
    }

    MetricsReport summarize(const std::vector<TrialOutcome> &outcomes, Method method)
    {
        MetricsReport r;
        r.method = method;
        r.trials = outcomes.size();
        double sum_k = 0.0, missed = 0.0, false_alarms = 0.0, runtime = 0.0, phase1 = 0.0;
        std::map<int, LevelCardinality> levels;
        for (const auto &o : outcomes)
        {
            sum_k += o.true_count;
            missed += o.true_count - o.correct_count;
            false_alarms += o.detected_count - o.correct_count;
            runtime += o.wall_time;
            phase1 += o.phase1_error ? 1.0 : 0.0;
            r.failed_trials += o.failed ? 1 : 0;
            r.error_propagation_events += static_cast<std::size_t>(o.error_propagation_events);
            for (const auto &s : o.levels)
            {
                auto &c = levels[s.level];
                c.level = s.level;
                c.mean_candidates += s.n_candidates;
                c.mean_feasible += static_cast<double>(s.n_feasible);
                c.mean_filtered += static_cast<double>(s.n_filtered);
                ++c.samples;
            }
        }
        if (sum_k > 0.0)
        {
            r.p_md = missed / sum_k;
            r.p_fa = false_alarms / sum_k;
        }
        if (!outcomes.empty())
        {
            r.phase1_error_rate = phase1 / static_cast<double>(outcomes.size());
            r.mean_runtime = runtime / static_cast<double>(outcomes.size());
        }
        for (auto it = levels.rbegin(); it != levels.rend(); ++it)
        {
            auto c = it->second;
            const double n = static_cast<double>(c.samples);
            c.mean_candidates /= n;
            c.mean_feasible /= n;
            c.mean_filtered /= n;
            r.cardinality.push_back(c);
        }
        return r;
    }

    std::vector<ExperimentResult> run_experiment(const ExperimentConfig &config, const std::vector<Method> &methods)
    {
        validate(config);
        require(!methods.empty(), "run_experiment: no method given");
        const std::size_t n = static_cast<std::size_t>(config.trials);
        std::vector<std::vector<TrialOutcome>> per_trial(n);

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t t = next++; t < n; t = next++)
                per_trial[t] = run_trial(config, t, methods);
        };
        const int threads = std::min<int>(config.parallelism, static_cast<int>(n));
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        std::vector<ExperimentResult> results(methods.size());
        for (std::size_t i = 0; i < methods.size(); ++i)
        {
            results[i].outcomes.reserve(n);
            for (std::size_t t = 0; t < n; ++t)
                results[i].outcomes.push_back(per_trial[t][i]);
            results[i].report = summarize(results[i].outcomes, methods[i]);
        }
        return results;
    }

    ExperimentResult run_experiment(const ExperimentConfig &config)
    {
        return std::move(run_experiment(config, {config.method}).front());
    }

    std::string trials_csv(const std::vector<TrialOutcome> &outcomes, bool with_time)
    {
        std::ostringstream os;
        os << "trial,K,K_i,N_i,phase1_err,time_s,errprop\n";
        for (const auto &o : outcomes)
        {
            os << o.trial_index << ',' << o.true_count << ',' << o.detected_count << ',' << o.correct_count << ','
               << (o.phase1_error ? 1 : 0) << ',';
            if (with_time)
                os << std::setprecision(6) << o.wall_time;
            os << ',' << o.error_propagation_events << '\n';
        }
        return os.str();
    }

    std::string cardinality_csv(const MetricsReport &report)
    {
        std::ostringstream os;
        os << "level,mean_G,mean_Gbar,mean_Gtilde,samples\n";
        os << std::setprecision(10);
        for (const auto &c : report.cardinality)
            os << c.level << ',' << c.mean_candidates << ',' << c.mean_feasible << ',' << c.mean_filtered << ','
               << c.samples << '\n';
        return os.str();
    }
}
