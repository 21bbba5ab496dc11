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

#include "netsense/io.hpp"

#include <fstream>
#include <set>

namespace netsense
{
    namespace
    {
        Json point(Point2D p) { return Json::array({p.x, p.y}); }

        Point2D point_from(const Json &j)
        {
            require(j.is_array() && j.size() == 2, "json: a point must be [x, y]");
            return {j.at(0).get<double>(), j.at(1).get<double>()};
        }

        Json points(const std::vector<Point2D> &ps)
        {
            Json out = Json::array();
            for (const auto &p : ps)
                out.push_back(point(p));
            return out;
        }

        std::vector<Point2D> points_from(const Json &j)
        {
            std::vector<Point2D> out;
            for (const auto &e : j)
                out.push_back(point_from(e));
            return out;
        }

        Json grid_json(const GridConfig &g)
        {
            return {{"n_subcarriers", g.n_subcarriers},
                    {"subcarrier_spacing", g.subcarrier_spacing},
                    {"speed_of_light", g.speed_of_light}};
        }

        GridConfig grid_from(const Json &j)
        {
            GridConfig g;
            g.n_subcarriers = j.at("n_subcarriers").get<int>();
            g.subcarrier_spacing = j.at("subcarrier_spacing").get<double>();
            g.speed_of_light = j.value("speed_of_light", kSpeedOfLight);
            return g;
        }

        Json mapping_json(const Mapping &g)
        {
            Json rows = Json::array();
            for (int u = 0; u < g.n_bs(); ++u)
            {
                Json row = Json::array();
                for (int m = 0; m < g.n_bs(); ++m)
                    row.push_back(g.at(u, m));
                rows.push_back(row);
            }
            return rows;
        }

        void check_keys(const Json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            require(j.is_object(), "config: '" + where + "' must be an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                require(allowed.count(it.key()) > 0, "config: unknown key '" + it.key() + "' in " + where);
        }

        template <class T>
        void take(const Json &j, const char *key, T &field)
        {
            if (j.contains(key))
                field = j.at(key).get<T>();
        }
    }

    Json to_json(const Scenario &scene)
    {
        Json mask = Json::array();
        for (const auto &row : scene.los_mask)
        {
            Json r = Json::array();
            for (bool b : row)
                r.push_back(b);
            mask.push_back(r);
        }
        Json nlos = Json::array();
        for (const auto &p : scene.nlos_paths)
            nlos.push_back({{"u", p.u}, {"m", p.m}, {"k", p.k}, {"range", p.range}});
        Json sto = Json::array();
        for (int u = 0; u < scene.sto.rows(); ++u)
        {
            Json r = Json::array();
            for (int m = 0; m < scene.sto.cols(); ++m)
                r.push_back(scene.sto(u, m));
            sto.push_back(r);
        }
        return {{"bs_positions", points(scene.bs_positions)},
                {"target_positions", points(scene.target_positions)},
                {"los_mask", mask},
                {"nlos_paths", nlos},
                {"sto", sto},
                {"warnings", scene.warnings}};
    }

    Scenario scenario_from_json(const Json &j)
    {
        Scenario s;
        s.bs_positions = points_from(j.at("bs_positions"));
        s.target_positions = points_from(j.at("target_positions"));
        for (const auto &row : j.at("los_mask"))
            s.los_mask.push_back(row.get<std::vector<bool>>());
        for (const auto &p : j.at("nlos_paths"))
            s.nlos_paths.push_back({p.at("u").get<int>(), p.at("m").get<int>(), p.at("k").get<int>(),
                                    p.at("range").get<double>()});
        const auto &sto = j.at("sto");
        const int n = static_cast<int>(sto.size());
        s.sto = IntMatrix::Zero(n, n);
        for (int u = 0; u < n; ++u)
        {
            require(static_cast<int>(sto.at(u).size()) == n, "json: sto must be square");
            for (int m = 0; m < n; ++m)
                s.sto(u, m) = sto.at(u).at(m).get<int>();
        }
        if (j.contains("warnings"))
            s.warnings = j.at("warnings").get<std::vector<std::string>>();
        require(static_cast<int>(s.los_mask.size()) == s.n_bs(), "json: los_mask needs one row per BS");
        return s;
    }

    Json to_json(const RangeHandoff &handoff)
    {
        const int n = handoff.ranges.n_bs();
        Json sets = Json::array();
        for (int u = 0; u < n; ++u)
        {
            Json row = Json::array();
            for (int m = 0; m < n; ++m)
                row.push_back(handoff.ranges.at(u, m));
            sets.push_back(row);
        }
        return {{"bs_positions", points(handoff.bs_positions)}, {"grid", grid_json(handoff.grid)}, {"ranges", sets}};
    }

    RangeHandoff handoff_from_json(const Json &j)
    {
        RangeHandoff h;
        h.bs_positions = points_from(j.at("bs_positions"));
        h.grid = grid_from(j.at("grid"));
        const auto &sets = j.at("ranges");
        const int n = static_cast<int>(h.bs_positions.size());
        require(static_cast<int>(sets.size()) == n, "json: ranges needs one row per BS");
        h.ranges = RangeSet(n);
        for (int u = 0; u < n; ++u)
        {
            require(static_cast<int>(sets.at(u).size()) == n, "json: ranges must be M x M");
            for (int m = 0; m < n; ++m)
                h.ranges.assign(u, m, sets.at(u).at(m).get<std::vector<double>>());
        }
        return h;
    }

    Json to_json(const SensingResult &result)
    {
        Json targets = Json::array();
        for (const auto &t : result.targets)
            targets.push_back({{"location", point(t.location)},
                               {"residual", t.residual},
                               {"level", t.level},
                               {"mapping", mapping_json(t.mapping)}});
        Json levels = Json::array();
        for (const auto &s : result.levels)
            levels.push_back({{"level", s.level},
                              {"candidates", s.n_candidates},
                              {"feasible", s.n_feasible},
                              {"filtered", s.n_filtered},
                              {"selected", s.n_selected},
                              {"diverged", s.diverged},
                              {"truncated", s.truncated}});
        return {{"count", result.count()}, {"targets", targets}, {"levels", levels}};
    }

    Json to_json(const MetricsReport &r)
    {
        Json card = Json::array();
        for (const auto &c : r.cardinality)
            card.push_back({{"level", c.level},
                            {"mean_G", c.mean_candidates},
                            {"mean_Gbar", c.mean_feasible},
                            {"mean_Gtilde", c.mean_filtered},
                            {"samples", c.samples}});
        return {{"method", to_string(r.method)},
                {"trials", r.trials},
                {"failed_trials", r.failed_trials},
                {"p_md", r.p_md},
                {"p_fa", r.p_fa},
                {"phase1_error_rate", r.phase1_error_rate},
                {"mean_runtime", r.mean_runtime},
                {"error_propagation_events", r.error_propagation_events},
                {"cardinality", card}};
    }

    Json to_json(const ExperimentConfig &c)
    {
        Json j = {
            {"trials", c.trials},
            {"seed", c.seed},
            {"method", to_string(c.method)},
            {"parallelism", c.parallelism},
            {"success_radius", c.success_radius},
            {"speed_of_light", c.speed_of_light},
            {"record_timing", c.record_timing},
            {"scenario",
             {{"n_bs", c.scenario.n_bs},
              {"n_targets", c.scenario.n_targets},
              {"area_side", c.scenario.area_side},
              {"blockage_prob", c.scenario.blockage_prob},
              {"nlos_prob", c.scenario.nlos_prob},
              {"max_sto", c.scenario.max_sto},
              {"max_taps", c.scenario.max_taps},
              {"min_bs_separation", c.scenario.min_bs_separation},
              {"reciprocal_nlos", c.scenario.reciprocal_nlos},
              {"max_attempts", c.scenario.max_attempts}}},
            {"ofdm",
             {{"n_subcarriers", c.ofdm.n_subcarriers},
              {"subcarrier_spacing", c.ofdm.subcarrier_spacing},
              {"cp_length", c.ofdm.cp_length},
              {"tx_power", c.ofdm.tx_power},
              {"noise_variance", c.ofdm.noise_variance}}},
            {"lasso",
             {{"penalty", c.lasso.penalty},
              {"relative_penalty", c.lasso.relative_penalty},
              {"penalty_scale", c.penalty_scale},
              {"max_iterations", c.lasso.max_iterations},
              {"convergence_tol", c.lasso.convergence_tol},
              {"support_threshold", c.lasso.support_threshold}}},
            {"gain", {{"free_space_loss", c.gain.free_space_loss}}},
            {"gn",
             {{"max_iterations", c.gn.max_iterations},
              {"step_tol", c.gn.step_tol},
              {"damping", c.gn.damping},
              {"multistart", c.gn.multistart}}},
        };
        const AssociationConfig a = c.association();
        j["association"] = {{"delta", a.delta},
                            {"beta_per_level", a.beta_per_level},
                            {"min_detect", a.min_detect},
                            {"anchor_bs", a.anchor_bs},
                            {"anchor_largest_set", a.anchor_largest_set},
                            {"frontier_cap", a.frontier_cap},
                            {"include_monostatic_terms", a.include_monostatic_terms}};
        return j;
    }

    ExperimentConfig experiment_from_json(const Json &j)
    {
        ExperimentConfig c;
        check_keys(j,
                   {"trials", "seed", "method", "parallelism", "success_radius", "speed_of_light", "record_timing",
                    "scenario", "ofdm", "lasso", "gain", "gn", "association", "description"},
                   "experiment");
        take(j, "trials", c.trials);
        take(j, "seed", c.seed);
        if (j.contains("method"))
            c.method = method_from_string(j.at("method").get<std::string>());
        take(j, "parallelism", c.parallelism);
        take(j, "success_radius", c.success_radius);
        take(j, "speed_of_light", c.speed_of_light);
        take(j, "record_timing", c.record_timing);

        if (j.contains("scenario"))
        {
            const auto &s = j.at("scenario");
            check_keys(s,
                       {"n_bs", "n_targets", "area_side", "blockage_prob", "nlos_prob", "max_sto", "max_taps",
                        "min_bs_separation", "reciprocal_nlos", "max_attempts"},
                       "scenario");
            take(s, "n_bs", c.scenario.n_bs);
            take(s, "n_targets", c.scenario.n_targets);
            take(s, "area_side", c.scenario.area_side);
            take(s, "blockage_prob", c.scenario.blockage_prob);
            take(s, "nlos_prob", c.scenario.nlos_prob);
            take(s, "max_sto", c.scenario.max_sto);
            take(s, "max_taps", c.scenario.max_taps);
            take(s, "min_bs_separation", c.scenario.min_bs_separation);
            take(s, "reciprocal_nlos", c.scenario.reciprocal_nlos);
            take(s, "max_attempts", c.scenario.max_attempts);
        }
        if (j.contains("ofdm"))
        {
            const auto &o = j.at("ofdm");
            check_keys(o, {"n_subcarriers", "subcarrier_spacing", "cp_length", "tx_power", "noise_variance"}, "ofdm");
            take(o, "n_subcarriers", c.ofdm.n_subcarriers);
            take(o, "subcarrier_spacing", c.ofdm.subcarrier_spacing);
            take(o, "cp_length", c.ofdm.cp_length);
            take(o, "tx_power", c.ofdm.tx_power);
            take(o, "noise_variance", c.ofdm.noise_variance);
        }
        if (j.contains("lasso"))
        {
            const auto &l = j.at("lasso");
            check_keys(l,
                       {"penalty", "relative_penalty", "penalty_scale", "max_iterations", "convergence_tol",
                        "support_threshold"},
                       "lasso");
            take(l, "penalty", c.lasso.penalty);
            take(l, "relative_penalty", c.lasso.relative_penalty);
            take(l, "penalty_scale", c.penalty_scale);
            take(l, "max_iterations", c.lasso.max_iterations);
            take(l, "convergence_tol", c.lasso.convergence_tol);
            take(l, "support_threshold", c.lasso.support_threshold);
        }
        if (j.contains("gain"))
        {
            check_keys(j.at("gain"), {"free_space_loss"}, "gain");
            take(j.at("gain"), "free_space_loss", c.gain.free_space_loss);
        }
        if (j.contains("gn"))
        {
            const auto &g = j.at("gn");
            check_keys(g, {"max_iterations", "step_tol", "damping", "multistart"}, "gn");
            take(g, "max_iterations", c.gn.max_iterations);
            take(g, "step_tol", c.gn.step_tol);
            take(g, "damping", c.gn.damping);
            take(g, "multistart", c.gn.multistart);
        }
        if (j.contains("association"))
        {
            const auto &a = j.at("association");
            check_keys(a,
                       {"delta", "beta_per_level", "min_detect", "anchor_bs", "anchor_largest_set", "frontier_cap",
                        "include_monostatic_terms"},
                       "association");
            if (a.contains("delta"))
                c.delta = a.at("delta").get<double>();
            if (a.contains("beta_per_level"))
                c.beta_per_level = a.at("beta_per_level").get<double>();
            take(a, "min_detect", c.assoc.min_detect);
            take(a, "anchor_bs", c.assoc.anchor_bs);
            take(a, "anchor_largest_set", c.assoc.anchor_largest_set);
            take(a, "frontier_cap", c.assoc.frontier_cap);
            take(a, "include_monostatic_terms", c.assoc.include_monostatic_terms);
        }
        return c;
    }

    Json read_json_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw PreconditionError("cannot open '" + path + "'");
        try
        {
            return Json::parse(in);
        }
        catch (const Json::parse_error &e)
        {
            throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
        }
    }

    void write_text_file(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw PreconditionError("cannot write '" + path + "'");
        out << text;
    }
}
