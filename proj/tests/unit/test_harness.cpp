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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "netsense/harness.hpp"
#include "oracles.hpp"

using namespace netsense;

namespace
{
    const GridConfig full_grid{3300, 120e3, 3e8};
    const std::vector<Point2D> square{{0, 0}, {80, 0}, {0, 80}, {80, 80}};

    ExperimentConfig fast(int k, int trials)
    {
        ExperimentConfig c;
        c.trials = trials;
        c.speed_of_light = 3e8;
        c.ofdm.n_subcarriers = 512;
        c.ofdm.subcarrier_spacing = 396e6 / 512;
        c.scenario.n_targets = k;
        return c;
    }

    TrialOutcome outcome(int k, int ki, int ni)
    {
        TrialOutcome o;
        o.true_count = k;
        o.detected_count = ki;
        o.correct_count = ni;
        return o;
    }

    std::size_t count_lines(const std::string &s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }
}

TEST_CASE("method names round-trip", "[harness]")
{
    for (Method m : {Method::Proposed, Method::Benchmark1, Method::Benchmark2})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("oracle"), PreconditionError);
}

TEST_CASE("summarize computes the miss and false-alarm rates", "[harness]")
{
    SECTION("one miss out of two")
    {
        const auto r = summarize({outcome(2, 1, 1)}, Method::Proposed);
        CHECK(r.p_md == 0.5);
        CHECK(r.p_fa == 0.0);
    }
    SECTION("pooled over trials")
    {
        const auto r = summarize({outcome(3, 4, 2), outcome(1, 1, 1)}, Method::Proposed);
        CHECK(r.p_md == Catch::Approx(0.25));
        CHECK(r.p_fa == Catch::Approx(0.5));
        CHECK(r.trials == 2);
    }
    SECTION("no targets at all")
    {
        const auto r = summarize({outcome(0, 2, 0)}, Method::Proposed);
        CHECK(r.p_md == 0.0);
        CHECK(r.p_fa == 0.0);
    }
    SECTION("phase-one errors and failures are counted")
    {
        auto a = outcome(2, 2, 2);
        a.phase1_error = true;
        auto b = outcome(2, 0, 0);
        b.failed = true;
        const auto r = summarize({a, b, outcome(2, 2, 2)}, Method::Proposed);
        CHECK(r.phase1_error_rate == Catch::Approx(1.0 / 3.0));
        CHECK(r.failed_trials == 1);
    }
}

TEST_CASE("count_correct pairs nearest estimates once", "[harness]")
{
    CHECK(count_correct({}, {{0, 0}}, 0.5) == 0);
    CHECK(count_correct({{0.1, 0}}, {{0, 0}}, 0.5) == 1);
    CHECK(count_correct({{0.6, 0}}, {{0, 0}}, 0.5) == 0);
    CHECK(count_correct({{0.1, 0}, {0.2, 0}}, {{0, 0}}, 0.5) == 1);
    CHECK(count_correct({{0.3, 0}}, {{0, 0}, {0.5, 0}}, 0.5) == 1);
    CHECK(count_correct({{0.0, 0}, {0.45, 0}}, {{0.05, 0}, {0.5, 0}}, 0.5) == 2);
}

TEST_CASE("phase1 metric examples", "[harness]")
{
    TruePathTable paths(2, 200);
    paths.at(0, 1) = {{132, PathType::TypeI, std::nullopt}, {140, PathType::TypeII, 0}};
    paths.at(1, 0) = {{132, PathType::TypeI, std::nullopt}, {140, PathType::TypeII, 0}};
    paths.at(0, 0) = {{106, PathType::TypeII, 0}};
    paths.at(1, 1) = {{174, PathType::TypeII, 0}};

    SupportSets sup;
    sup.n_bs = 2;
    sup.sets.resize(4);
    sup.at(0, 1) = {142, 150};
    sup.at(1, 0) = {122, 130};
    sup.at(0, 0) = {106};
    sup.at(1, 1) = {174};
    StoEstimate sto;
    sto.tau = IntMatrix::Zero(2, 2);
    sto.tau(0, 1) = 10;
    sto.tau(1, 0) = -10;
    CHECK_FALSE(phase1_error_metric(sup, sto, paths));

    auto missing = sup;
    missing.at(1, 1) = {};
    CHECK(phase1_error_metric(missing, sto, paths));

    auto spurious = sup;
    spurious.at(0, 0) = {106, 120};
    CHECK(phase1_error_metric(spurious, sto, paths));

    auto bad_sto = sto;
    bad_sto.tau(0, 1) = 9;
    CHECK(phase1_error_metric(sup, bad_sto, paths));

    auto failed = sto;
    failed.failed_pairs.emplace_back(0, 1);
    CHECK(phase1_error_metric(sup, failed, paths));
}

TEST_CASE("label_ranges attributes entries by delay bin", "[harness]")
{
    TruePathTable paths(2, 200);
    paths.at(0, 0) = {{106, PathType::TypeII, 0}, {106, PathType::TypeIII, 1}, {150, PathType::TypeIII, 1}};
    const double q = range_quantum(full_grid);
    RangeSet r(2);
    r.assign(0, 0, {106.5 * q, 150.5 * q, 170.5 * q});
    const auto labels = label_ranges(r, paths, full_grid);
    const auto &row = labels.at(0, 0);
    REQUIRE(row.size() == 3);
    CHECK(row[0].los_targets == std::vector<int>{0});
    CHECK(row[0].nlos_targets == std::vector<int>{1});
    CHECK(row[1].los_targets.empty());
    CHECK(row[1].nlos_targets == std::vector<int>{1});
    CHECK(row[2].los_targets.empty());
    CHECK(row[2].nlos_targets.empty());
}

TEST_CASE("benchmark1 reports every gated mapping without exclusivity", "[harness]")
{
    const double q = range_quantum(full_grid);
    const auto cfg = AssociationConfig::defaults_for(full_grid);
    oracle::Truth t{square, {{30, 40}}, {}};
    t.visible.assign(4, std::vector<bool>(1, true));
    const RangeSet r = oracle::ranges_from_truth(t, q);
    const auto merged = benchmark1(r, square, cfg, GnConfig{}, 0.5);
    REQUIRE(merged.count() == 1);
    CHECK(merged.targets[0].level == 4);
    CHECK(oracle::dist(merged.targets[0].location, t.targets[0]) < 0.5);
    // Without merging the four level-3 sub-mappings appear as well.
    CHECK(benchmark1(r, square, cfg, GnConfig{}, 0.0).count() == 5);
}

TEST_CASE("benchmark2 uses the given association", "[harness]")
{
    const double q = range_quantum(full_grid);
    const auto cfg = AssociationConfig::defaults_for(full_grid);
    oracle::Truth t{square, {{30, 40}, {60, 20}}, {}};
    t.visible.assign(4, std::vector<bool>(2, true));
    t.visible[3][1] = false;
    t.visible[2][1] = false;
    const RangeSet r = oracle::ranges_from_truth(t, q);
    RangeLabels labels;
    labels.n_bs = 4;
    labels.entries.resize(16);
    for (int u = 0; u < 4; ++u)
        for (int m = 0; m < 4; ++m)
            for (double v : r.at(u, m))
            {
                RangeLabel l;
                for (int k = 0; k < 2; ++k)
                    if (t.visible[u][k] && t.visible[m][k] &&
                        std::abs(oracle::quantize(oracle::dist(t.bs[u], t.targets[k]) + oracle::dist(t.bs[m], t.targets[k]), q) - v) < 1e-9)
                        l.los_targets.push_back(k);
                labels.at(u, m).push_back(l);
            }
    const auto res = benchmark2(r, labels, 2, square, cfg, GnConfig{});
    REQUIRE(res.count() == 1);
    CHECK(res.targets[0].level == 4);
    CHECK(oracle::dist(res.targets[0].location, t.targets[0]) < 0.5);
}

TEST_CASE("noiseless unobstructed trials detect every target", "[harness]")
{
    auto c = fast(3, 5);
    c.scenario.blockage_prob = 0.0;
    c.scenario.nlos_prob = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
    {
        const auto o = run_trial(c, i);
        CHECK_FALSE(o.failed);
        CHECK(o.true_count == 3);
        if (!o.phase1_error)
        {
            CHECK(o.detected_count == 3);
            CHECK(o.correct_count == 3);
        }
    }
}

TEST_CASE("an empty scene yields no detections", "[harness]")
{
    const auto o = run_trial(fast(0, 1), 0);
    CHECK_FALSE(o.failed);
    CHECK(o.true_count == 0);
    CHECK(o.detected_count == 0);
    CHECK_FALSE(o.phase1_error);
}

TEST_CASE("trials are reproducible and independent of thread count", "[harness]")
{
    auto c = fast(3, 6);
    c.ofdm.noise_variance = 155.0;
    c.penalty_scale = 1.5;
    const auto serial = run_experiment(c, {Method::Proposed, Method::Benchmark1});
    c.parallelism = 3;
    const auto parallel = run_experiment(c, {Method::Proposed, Method::Benchmark1});
    REQUIRE(serial.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(trials_csv(serial[i].outcomes, false) == trials_csv(parallel[i].outcomes, false));
        CHECK(serial[i].report.p_md == parallel[i].report.p_md);
    }
    CHECK(run_trial(c, 2).detected_count == serial[0].outcomes[2].detected_count);
}

TEST_CASE("CSV layouts", "[harness]")
{
    auto a = outcome(2, 2, 1);
    a.trial_index = 7;
    a.phase1_error = true;
    a.wall_time = 0.25;
    const std::string plain = trials_csv({a}, false);
    CHECK(plain == "trial,K,K_i,N_i,phase1_err,time_s,errprop\n7,2,2,1,1,,0\n");
    const std::string timed = trials_csv({a}, true);
    CHECK(timed.find("7,2,2,1,1,0.25") != std::string::npos);

    MetricsReport r;
    r.cardinality.push_back({4, 100.0, 10.0, 2.0, 3});
    const std::string card = cardinality_csv(r);
    CHECK(card.rfind("level,mean_G,mean_Gbar,mean_Gtilde,samples\n", 0) == 0);
    CHECK(count_lines(card) == 2);
}

TEST_CASE("experiment config validation", "[harness]")
{
    ExperimentConfig c;
    CHECK_NOTHROW(validate(c));
    c.trials = -1;
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = ExperimentConfig{};
    c.success_radius = 0.0;
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = ExperimentConfig{};
    c.parallelism = 0;
    CHECK_THROWS_AS(validate(c), PreconditionError);
    c = ExperimentConfig{};
    c.delta = 2.0;
    CHECK(c.association().delta == 2.0);
}
