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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netsense/association.hpp"
#include "netsense/localizer.hpp"
#include "netsense/ofdm.hpp"
#include "netsense/ranging.hpp"
#include "netsense/scenario.hpp"
#include "netsense/sparse.hpp"

namespace netsense
{
    enum class Method
    {
        Proposed,
        Benchmark1, // every residual-gated mapping of every level, no exclusivity
        Benchmark2, // true association given, LOS subset picked by residual test
    };

    std::string to_string(Method method);
    /// Accepts "proposed", "bench1", "bench2"; throws PreconditionError otherwise.
    Method method_from_string(const std::string &name);

    struct ExperimentConfig
    {
        int trials = 200;
        std::uint64_t seed = 1;
        Method method = Method::Proposed;
        int parallelism = 1;
        double success_radius = 0.5; // r, m
        double speed_of_light = kSpeedOfLight;
        bool record_timing = false;  // fill time_s in trials.csv (breaks byte equality)

        ScenarioConfig scenario;
        OfdmConfig ofdm;
        LassoConfig lasso;
        double penalty_scale = 1.0;  // c of the universal penalty, used when sigma_z^2 > 0
        GainModel gain;
        AssociationConfig assoc;
        std::optional<double> delta;          // unset: 3 dd of the grid
        std::optional<double> beta_per_level; // unset: (2 dd)^2 of the grid
        GnConfig gn;

        GridConfig grid() const { return ofdm.grid(speed_of_light); }
        int tap_span() const { return scenario.max_taps + scenario.max_sto; }

        /// assoc with delta and beta filled in from the grid unless overridden.
        AssociationConfig association() const;
    };

    void validate(const ExperimentConfig &config);

    /// Everything Phase I produces for one trial, plus the truth needed to score it.
    struct PhaseOneResult
    {
        Scenario scene;
        TruePathTable paths{0, 0};
        SupportSets support;
        StoEstimate sto;
        RangeSet ranges;
        RangeLabels labels;
        bool error = false;
        bool lasso_converged = true;
        std::vector<std::string> warnings;
    };

    PhaseOneResult run_phase_one(const ExperimentConfig &config, std::size_t trial_index);

    /// True when some pair's STO-corrected support differs from its true delay set
    /// (every path type counted), or when an STO could not be estimated.
    bool phase1_error_metric(const SupportSets &support, const StoEstimate &sto, const TruePathTable &paths);

    /// Owners of every range entry, found by matching the entry's delay bin
    /// against the true paths of the pair.
    RangeLabels label_ranges(const RangeSet &ranges, const TruePathTable &paths, const GridConfig &grid);

    /// All residual-gated mappings of every level on the full range sets become
    /// detections. Detections are taken by level (highest first) then residual;
    /// one lying within merge_radius of an earlier one is dropped.
    SensingResult benchmark1(const RangeSet &ranges, const std::vector<Point2D> &bs_positions,
                             const AssociationConfig &config, const GnConfig &gn, double merge_radius);

    /// Per true target, the smallest range of each pair attributed to it (LOS or
    /// scattered) is used; the largest BS subset whose fit passes beta(|S|)
    /// localizes it, ties by residual. Targets with no passing subset are missed.
    SensingResult benchmark2(const RangeSet &ranges, const RangeLabels &labels, int n_targets,
                             const std::vector<Point2D> &bs_positions, const AssociationConfig &config,
                             const GnConfig &gn);

    /// Greedy nearest-pair matching within `radius`; each estimate and each truth
    /// is used at most once. Returns the number of matched pairs.
    int count_correct(const std::vector<Point2D> &estimates, const std::vector<Point2D> &truth, double radius);

    struct TrialOutcome
    {
        std::size_t trial_index = 0;
        int true_count = 0;      // K
        int detected_count = 0;  // K_i
        int correct_count = 0;   // N_i
        bool phase1_error = false;
        double wall_time = 0.0;  // Phase II seconds
        int error_propagation_events = 0;
        bool failed = false;
        std::string diagnostic;
        std::vector<LevelStats> levels;
    };

    /// Phase I once, then Phase II for each method in `methods`, in order.
    std::vector<TrialOutcome> run_trial(const ExperimentConfig &config, std::size_t trial_index,
                                        const std::vector<Method> &methods);
    TrialOutcome run_trial(const ExperimentConfig &config, std::size_t trial_index);

    struct LevelCardinality
    {
        int level = 0;
        double mean_candidates = 0.0; // |G^(l)|
        double mean_feasible = 0.0;   // |Gbar^(l)|
        double mean_filtered = 0.0;   // |Gtilde^(l)|
        std::size_t samples = 0;
    };

    struct MetricsReport
    {
        Method method = Method::Proposed;
        std::size_t trials = 0;
        std::size_t failed_trials = 0;
        double p_md = 0.0;
        double p_fa = 0.0;
        double phase1_error_rate = 0.0;
        double mean_runtime = 0.0;
        std::size_t error_propagation_events = 0;
        std::vector<LevelCardinality> cardinality;
    };

    /// P_MD = sum(K - N_i) / sum K and P_FA = sum(K_i - N_i) / sum K; both are 0
    /// when sum K = 0.
    MetricsReport summarize(const std::vector<TrialOutcome> &outcomes, Method method);

    struct ExperimentResult
    {
        MetricsReport report;
        std::vector<TrialOutcome> outcomes; // sorted by trial index
    };

    /// Runs config.trials trials on config.parallelism threads. Each trial draws
    /// from its own stream seeded by (seed, trial index), so outcomes do not
    /// depend on scheduling. One result per method.
    std::vector<ExperimentResult> run_experiment(const ExperimentConfig &config, const std::vector<Method> &methods);
    ExperimentResult run_experiment(const ExperimentConfig &config);

    /// trials.csv: trial,K,K_i,N_i,phase1_err,time_s,errprop.
    std::string trials_csv(const std::vector<TrialOutcome> &outcomes, bool with_time);

    /// cardinality.csv: level,mean_G,mean_Gbar,mean_Gtilde,samples.
    std::string cardinality_csv(const MetricsReport &report);
}
