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

// Python entry points. Structured data crosses the boundary as JSON text; the
// netsense package turns it into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netsense/harness.hpp"
#include "netsense/io.hpp"

namespace py = pybind11;
using namespace netsense;

namespace
{
    ExperimentConfig parse_config(const std::string &text)
    {
        ExperimentConfig c = experiment_from_json(text.empty() ? Json::object() : Json::parse(text));
        validate(c);
        return c;
    }

    std::string simulate(const std::string &config_text, const std::vector<std::string> &method_names)
    {
        const ExperimentConfig c = parse_config(config_text);
        std::vector<Method> methods;
        for (const auto &name : method_names)
            methods.push_back(method_from_string(name));
        if (methods.empty())
            methods.push_back(c.method);
        std::vector<ExperimentResult> results;
        {
            py::gil_scoped_release release;
            results = run_experiment(c, methods);
        }
        Json out = Json::array();
        for (const auto &r : results)
        {
            Json entry;
            entry["report"] = to_json(r.report);
            entry["trials_csv"] = trials_csv(r.outcomes, c.record_timing);
            out.push_back(entry);
        }
        return out.dump();
    }

    std::string phase_one(const std::string &config_text, std::size_t trial)
    {
        const ExperimentConfig c = parse_config(config_text);
        PhaseOneResult p1;
        {
            py::gil_scoped_release release;
            p1 = run_phase_one(c, trial);
        }
        Json out;
        out["scenario"] = to_json(p1.scene);
        out["handoff"] = to_json(RangeHandoff{p1.scene.bs_positions, c.grid(), p1.ranges});
        out["phase1_error"] = p1.error;
        out["warnings"] = p1.warnings;
        return out.dump();
    }

    std::string associate(const std::string &handoff_text, const std::string &config_text)
    {
        ExperimentConfig c = parse_config(config_text);
        const RangeHandoff h = handoff_from_json(Json::parse(handoff_text));
        c.ofdm.n_subcarriers = h.grid.n_subcarriers;
        c.ofdm.subcarrier_spacing = h.grid.subcarrier_spacing;
        c.speed_of_light = h.grid.speed_of_light;
        const AssociationConfig assoc = c.association();
        SensingResult result;
        {
            py::gil_scoped_release release;
            if (c.method == Method::Benchmark1)
                result = benchmark1(h.ranges, h.bs_positions, assoc, c.gn, c.success_radius);
            else if (c.method == Method::Proposed)
                result = solve_all(h.ranges, h.bs_positions, assoc, c.gn);
            else
                throw PreconditionError("associate: bench2 needs ground-truth association");
        }
        return to_json(result).dump();
    }

    py::tuple locate(const std::vector<std::pair<double, double>> &bs,
                     const std::vector<std::tuple<int, int, double>> &terms)
    {
        NlsProblem p;
        const int n = static_cast<int>(bs.size());
        for (auto [u, m, range] : terms)
        {
            require(u >= 0 && u < n && m >= 0 && m < n, "locate: BS index out of range");
            p.terms.push_back({u, m, {bs[u].first, bs[u].second}, {bs[m].first, bs[m].second}, range});
        }
        const LocalizationFit f = fit(p, GnConfig{});
        return py::make_tuple(f.location.x, f.location.y, f.residual, f.converged);
    }
}

PYBIND11_MODULE(_netsense, m)
{
    m.doc() = "Networked device-free sensing simulator (compiled core)";

    py::register_exception<Error>(m, "NetsenseError", PyExc_RuntimeError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    m.def("default_config", [] { return to_json(ExperimentConfig{}).dump(); },
          "Default experiment configuration as JSON text.");
    m.def("normalize_config", [](const std::string &text) { return to_json(parse_config(text)).dump(); },
          py::arg("config"), "Parse, validate and re-emit a configuration with every field filled in.");
    m.def("simulate", &simulate, py::arg("config"), py::arg("methods") = std::vector<std::string>{},
          "Run a Monte-Carlo experiment; returns JSON with one report per method.");
    m.def("phase_one", &phase_one, py::arg("config"), py::arg("trial") = 0,
          "Scenario, range sets and Phase-I error flag of one trial as JSON.");
    m.def("associate", &associate, py::arg("handoff"), py::arg("config") = std::string{},
          "Associate and localize from a range-set handoff; returns detected targets as JSON.");
    m.def("locate", &locate, py::arg("bs"), py::arg("terms"),
          "Least-squares position from (u, m, range) terms; returns (x, y, residual, converged).");
    m.def("range_quantum",
          [](int n, double spacing, double c) { return range_quantum(GridConfig{n, spacing, c}); },
          py::arg("n_subcarriers"), py::arg("subcarrier_spacing"), py::arg("speed_of_light") = kSpeedOfLight);
}
