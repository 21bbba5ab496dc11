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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netsense/audit.hpp"
#include "netsense/harness.hpp"
#include "netsense/io.hpp"

namespace fs = std::filesystem;
using namespace netsense;

namespace
{
    struct CommonOptions
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<std::string> method;
        std::optional<int> jobs;
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config_path, "Experiment config (JSON)");
        cmd->add_option("--seed", o.seed, "Master seed");
        cmd->add_option("--trials", o.trials, "Number of trials");
        cmd->add_option("--method", o.method, "proposed | bench1 | bench2");
        cmd->add_option("--jobs", o.jobs, "Worker threads (NETSENSE_JOBS overrides)");
    }

    ExperimentConfig load_config(const CommonOptions &o)
    {
        ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : experiment_from_json(read_json_file(o.config_path));
        if (o.seed)
            c.seed = *o.seed;
        if (o.trials)
            c.trials = *o.trials;
        if (o.method)
            c.method = method_from_string(*o.method);
        if (o.jobs)
            c.parallelism = *o.jobs;
        if (const char *env = std::getenv("NETSENSE_JOBS"); env && *env)
        {
            const int jobs = std::atoi(env);
            require(jobs >= 1, "NETSENSE_JOBS must be a positive integer");
            c.parallelism = jobs;
        }
        return c;
    }

    std::vector<Method> parse_methods(const std::vector<std::string> &names, Method fallback)
    {
        std::vector<Method> out;
        for (const auto &n : names)
            out.push_back(method_from_string(n));
        if (out.empty())
            out.push_back(fallback);
        return out;
    }

    void print_report(const MetricsReport &r)
    {
        std::cout << to_string(r.method) << ": trials=" << r.trials << " failed=" << r.failed_trials
                  << " P_MD=" << r.p_md << " P_FA=" << r.p_fa << " phase1_err=" << r.phase1_error_rate
                  << " errprop=" << r.error_propagation_events << " mean_phase2_s=" << r.mean_runtime << '\n';
    }

    int cmd_simulate(const CommonOptions &o, const std::string &out_dir, const std::vector<std::string> &methods,
                     bool timing)
    {
        ExperimentConfig c = load_config(o);
        c.record_timing = c.record_timing || timing;
        const auto results = run_experiment(c, parse_methods(methods, c.method));
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / "config.json").string(), to_json(c).dump(2) + "\n");
        Json summary = Json::array();
        for (const auto &res : results)
        {
            const std::string suffix = results.size() > 1 ? "_" + to_string(res.report.method) : "";
            write_text_file((fs::path(out_dir) / ("trials" + suffix + ".csv")).string(),
                            trials_csv(res.outcomes, c.record_timing));
            write_text_file((fs::path(out_dir) / ("cardinality" + suffix + ".csv")).string(),
                            cardinality_csv(res.report));
            Json j = to_json(res.report);
            Json failures = Json::array();
            for (const auto &t : res.outcomes)
                if (t.failed)
                    failures.push_back({{"trial", t.trial_index}, {"diagnostic", t.diagnostic}});
            j["failures"] = failures;
            summary.push_back(j);
            print_report(res.report);
        }
        write_text_file((fs::path(out_dir) / "summary.json").string(),
                        (results.size() == 1 ? summary.at(0) : summary).dump(2) + "\n");
        return 0;
    }

    int cmd_phase1(const CommonOptions &o, std::size_t trial, const std::string &out, const std::string &scene_out)
    {
        const ExperimentConfig c = load_config(o);
        validate(c);
        const PhaseOneResult p1 = run_phase_one(c, trial);
        RangeHandoff h{p1.scene.bs_positions, c.grid(), p1.ranges};
        const std::string text = to_json(h).dump(2) + "\n";
        if (out.empty())
            std::cout << text;
        else
            write_text_file(out, text);
        if (!scene_out.empty())
            write_text_file(scene_out, to_json(p1.scene).dump(2) + "\n");
        for (const auto &w : p1.warnings)
            std::cerr << "warning: " << w << '\n';
        std::cerr << "phase I " << (p1.error ? "in error" : "exact") << ", " << p1.ranges.total_size() << " ranges\n";
        return 0;
    }

    int cmd_phase2(const CommonOptions &o, const std::string &input, const std::string &out)
    {
        ExperimentConfig c = load_config(o);
        const RangeHandoff h = handoff_from_json(read_json_file(input));
        c.ofdm.n_subcarriers = h.grid.n_subcarriers;
        c.ofdm.subcarrier_spacing = h.grid.subcarrier_spacing;
        c.speed_of_light = h.grid.speed_of_light;
        const AssociationConfig assoc = c.association();
        SensingResult result;
        switch (c.method)
        {
        case Method::Proposed:
            result = solve_all(h.ranges, h.bs_positions, assoc, c.gn);
            break;
        case Method::Benchmark1:
            result = benchmark1(h.ranges, h.bs_positions, assoc, c.gn, c.success_radius);
            break;
        case Method::Benchmark2:
            throw PreconditionError("phase2: bench2 needs ground-truth association; use simulate");
        }
        const std::string text = to_json(result).dump(2) + "\n";
        if (out.empty())
            std::cout << text;
        else
            write_text_file(out, text);
        return 0;
    }

    void apply_sweep_value(ExperimentConfig &c, const std::string &param, double v)
    {
        if (param == "K")
            c.scenario.n_targets = static_cast<int>(v);
        else if (param == "P_b")
            c.scenario.blockage_prob = v;
        else if (param == "P_nl")
            c.scenario.nlos_prob = v;
        else if (param == "B")
            c.ofdm.subcarrier_spacing = v / c.ofdm.n_subcarriers;
        else if (param == "power")
            c.ofdm.tx_power = v;
        else if (param == "r")
            c.success_radius = v;
        else
            throw PreconditionError("sweep: unknown parameter '" + param + "' (K, P_b, P_nl, B, power, r)");
    }

    int cmd_sweep(const CommonOptions &o, const std::string &param, const std::vector<double> &values,
                  const std::vector<std::string> &methods, const std::string &out_dir)
    {
        const ExperimentConfig base = load_config(o);
        const auto ms = parse_methods(methods, base.method);
        std::ostringstream csv;
        csv << "param,value,method,trials,p_md,p_fa,phase1_error_rate,errprop,failed\n";
        for (double v : values)
        {
            ExperimentConfig c = base;
            apply_sweep_value(c, param, v);
            for (const auto &res : run_experiment(c, ms))
            {
                const auto &r = res.report;
                csv << param << ',' << v << ',' << to_string(r.method) << ',' << r.trials << ',' << r.p_md << ','
                    << r.p_fa << ',' << r.phase1_error_rate << ',' << r.error_propagation_events << ','
                    << r.failed_trials << '\n';
                std::cout << param << '=' << v << ' ';
                print_report(r);
            }
        }
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / "sweep.csv").string(), csv.str());
        return 0;
    }

    int cmd_validate(const CommonOptions &o)
    {
        ExperimentConfig c = load_config(o);
        validate(c);
        const AssociationConfig assoc = c.association();
        const AuditLimits limits{assoc.delta, assoc.beta_per_level};
        int scene_failures = 0, audit_failures = 0, claim_failures = 0;
        for (int t = 0; t < c.trials; ++t)
        {
            const PhaseOneResult p1 = run_phase_one(c, static_cast<std::size_t>(t));
            ScenarioConfig sc = c.scenario;
            try
            {
                validate(p1.scene, sc, c.grid());
            }
            catch (const ScenarioError &e)
            {
                ++scene_failures;
                std::cerr << "trial " << t << ": " << e.what() << '\n';
            }
            const SensingResult result = solve_all(p1.ranges, p1.scene.bs_positions, assoc, c.gn);
            const auto issues = audit_mappings(p1.ranges, p1.scene.bs_positions, result.targets, limits);
            if (!issues.empty())
            {
                ++audit_failures;
                for (const auto &i : issues)
                    std::cerr << "trial " << t << ": " << i << '\n';
            }
            for (const auto &tgt : result.targets)
                if (tgt.level < assoc.min_detect)
                    ++claim_failures;
        }
        std::cout << "scenario invariants: " << (scene_failures ? "FAIL" : "ok") << " (" << scene_failures << "/"
                  << c.trials << ")\n";
        std::cout << "mapping constraints: " << (audit_failures ? "FAIL" : "ok") << " (" << audit_failures << "/"
                  << c.trials << ")\n";
        std::cout << "detection levels:    " << (claim_failures ? "FAIL" : "ok") << '\n';
        return scene_failures || audit_failures || claim_failures ? 1 : 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"netsense: networked device-free sensing simulator"};
    app.require_subcommand(1);

    CommonOptions sim_opts, p1_opts, p2_opts, sweep_opts, val_opts;
    std::string sim_out = "out", p1_out, p1_scene, p2_in, p2_out, sweep_out = "out", sweep_param = "K";
    std::vector<std::string> sim_methods, sweep_methods;
    std::vector<double> sweep_values;
    std::size_t p1_trial = 0;
    bool timing = false;

    auto *sim = app.add_subcommand("simulate", "Run the full pipeline over many trials");
    add_common(sim, sim_opts);
    sim->add_option("--out", sim_out, "Output directory")->capture_default_str();
    sim->add_option("--methods", sim_methods, "Several methods sharing Phase I");
    sim->add_flag("--timing", timing, "Record Phase II wall time in trials.csv");

    auto *p1 = app.add_subcommand("phase1", "Emit the range sets of one trial as JSON");
    add_common(p1, p1_opts);
    p1->add_option("--trial", p1_trial, "Trial index")->capture_default_str();
    p1->add_option("--out", p1_out, "Output file (stdout if omitted)");
    p1->add_option("--scenario-out", p1_scene, "Also write the ground-truth scene");

    auto *p2 = app.add_subcommand("phase2", "Associate and localize from range-set JSON");
    add_common(p2, p2_opts);
    p2->add_option("--input", p2_in, "Range-set JSON")->required();
    p2->add_option("--out", p2_out, "Output file (stdout if omitted)");

    auto *sweep = app.add_subcommand("sweep", "Grid over one parameter");
    add_common(sweep, sweep_opts);
    sweep->add_option("--param", sweep_param, "K | P_b | P_nl | B | power | r")->capture_default_str();
    sweep->add_option("--values", sweep_values, "Values of the swept parameter")->required();
    sweep->add_option("--methods", sweep_methods, "Methods to compare");
    sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();

    auto *val = app.add_subcommand("validate", "Check scene invariants and mapping constraints");
    add_common(val, val_opts);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
            return cmd_simulate(sim_opts, sim_out, sim_methods, timing);
        if (*p1)
            return cmd_phase1(p1_opts, p1_trial, p1_out, p1_scene);
        if (*p2)
            return cmd_phase2(p2_opts, p2_in, p2_out);
        if (*sweep)
            return cmd_sweep(sweep_opts, sweep_param, sweep_values, sweep_methods, sweep_out);
        if (*val)
            return cmd_validate(val_opts);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
