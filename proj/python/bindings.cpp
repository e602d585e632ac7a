// SPDX-License-Identifier: Apache-2.0
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

#include "cfpla/analysis.hpp"
#include "cfpla/experiments.hpp"
#include "cfpla/results_io.hpp"
#include "cfpla/scenario.hpp"
#include "cfpla/validation.hpp"
#include "cfpla/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cfpla;

namespace {

py::dict row_to_dict(const ResultRow& r)
{
    py::dict d;
    d["M"] = r.M;
    d["N"] = r.N;
    d["K"] = r.K;
    d["L"] = r.L;
    d["rho_s"] = r.rho_s;
    d["pfa_target"] = r.pfa_target;
    d["drop"] = r.drop;
    d["seed"] = r.seed;
    d["pd_closed_form"] = r.pd_closed_form;
    d["pd_empirical"] = r.pd_empirical;
    d["pfa_empirical"] = r.pfa_empirical;
    d["eve_acceptance_rate"] = r.eve_acceptance_rate;
    d["ci_halfwidth"] = r.ci_halfwidth;
    d["trials"] = r.trials;
    return d;
}

ResultRow row_from_dict(const py::dict& d)
{
    for (const auto& key : d)
        if (std::find_if(kResultColumns.begin(), kResultColumns.end(), [&](const char* c) {
                return py::str(key.first).cast<std::string>() == c;
            }) == kResultColumns.end())
            throw py::value_error("unknown result column '" + py::str(key.first).cast<std::string>() + "'");
    auto get = [&](const char* k) {
        if (!d.contains(k))
            throw py::value_error(std::string("missing result column '") + k + "'");
        return d[k];
    };
    ResultRow r;
    r.M = get("M").cast<int>();
    r.N = get("N").cast<int>();
    r.K = get("K").cast<int>();
    r.L = get("L").cast<int>();
    r.rho_s = get("rho_s").cast<double>();
    r.pfa_target = get("pfa_target").cast<double>();
    r.drop = get("drop").cast<int>();
    r.seed = get("seed").cast<std::uint64_t>();
    r.pd_closed_form = get("pd_closed_form").cast<double>();
    r.pd_empirical = get("pd_empirical").cast<double>();
    r.pfa_empirical = get("pfa_empirical").cast<double>();
    r.eve_acceptance_rate = get("eve_acceptance_rate").cast<double>();
    r.ci_halfwidth = get("ci_halfwidth").cast<double>();
    r.trials = get("trials").cast<std::uint64_t>();
    return r;
}

std::vector<ResultRow> rows_from_list(const py::list& rows)
{
    std::vector<ResultRow> out;
    for (const auto& r : rows)
        out.push_back(row_from_dict(r.cast<py::dict>()));
    return out;
}

py::list rows_to_list(const std::vector<ResultRow>& rows)
{
    py::list out;
    for (const auto& r : rows)
        out.append(row_to_dict(r));
    return out;
}

ScenarioConfig parse_config(const std::string& json_text)
{
    ScenarioConfig c = config_from_json_text(json_text.empty() ? "{}" : json_text);
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "cfpla simulation core";
    m.attr("__version__") = kVersion;
    m.attr("RESULT_COLUMNS") = std::vector<std::string>(kResultColumns.begin(), kResultColumns.end());

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<IllConditionedError>(m, "IllConditionedError", PyExc_ArithmeticError);

    m.def("q_function", &q_function, py::arg("x"));
    m.def("q_inverse", &q_inverse, py::arg("p"));
    m.def("noise_power", &noise_power, py::arg("bandwidth_hz"), py::arg("noise_figure_db"));
    m.def(
        "path_loss", [](double d) { return path_loss(d, ThreeSlopeParams{}); }, py::arg("distance_m"),
        "Linear three-slope gain with the default breakpoints and heights.");
    m.def("closed_form_pfa", &closed_form_pfa, py::arg("theta"), py::arg("xi"), py::arg("L"));
    m.def("closed_form_pd", &closed_form_pd, py::arg("theta"), py::arg("xi"), py::arg("L"),
          py::arg("M"));
    m.def("optimal_threshold", &optimal_threshold, py::arg("pfa_target"), py::arg("xi"),
          py::arg("L"));

    m.def("default_config", [] { return config_to_json_text(ScenarioConfig{}); },
          "Default configuration as JSON text.");
    m.def("config_keys", &config_keys);
    m.def(
        "normalize_config", [](const std::string& text) { return config_to_json_text(parse_config(text)); },
        py::arg("config_json"), "Validate a partial JSON config and return the full config.");

    m.def(
        "run",
        [](const std::string& text) {
            const ScenarioConfig c = parse_config(text);
            std::vector<ResultRow> rows;
            {
                py::gil_scoped_release release;
                for (const auto& r : run_drops(c))
                    rows.push_back(make_row(c, r));
            }
            return rows_to_list(rows);
        },
        py::arg("config_json") = "", "Simulate one scenario; one row per drop.");

    m.def(
        "sweep",
        [](const std::string& figure, const std::string& text) {
            const ScenarioConfig c = config_from_json_text(text.empty() ? "{}" : text);
            const SweepSpec spec = figure_preset(parse_figure_id(figure));
            std::vector<std::string> skipped;
            std::vector<ResultRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(spec, c, &skipped);
            }
            return py::make_tuple(rows_to_list(rows), skipped);
        },
        py::arg("figure"), py::arg("config_json") = "",
        "Run a figure preset; returns (rows, skipped point descriptions).");

    m.def(
        "summarize", [](const py::list& rows) { return summary_to_json_text(summarize(rows_from_list(rows))); },
        py::arg("rows"), "Aggregate rows over drops; returns JSON text.");

    m.def(
        "write_csv",
        [](const std::string& path, const py::list& rows) { write_csv(path, rows_from_list(rows)); },
        py::arg("path"), py::arg("rows"));
    m.def("read_csv", [](const std::string& path) { return rows_to_list(read_csv(path)); },
          py::arg("path"));

    m.def(
        "validate",
        [](std::uint64_t seed) {
            std::vector<ValidationCheck> checks;
            {
                py::gil_scoped_release release;
                checks = run_validation(seed);
            }
            py::list out;
            for (const auto& c : checks) {
                py::dict d;
                d["name"] = c.name;
                d["passed"] = c.passed;
                d["value"] = c.value;
                d["tolerance"] = c.tolerance;
                d["detail"] = c.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 1, "Structural invariant suite.");
}
