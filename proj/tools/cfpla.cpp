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

// cfpla command-line driver: run, sweep, validate, summarize.

#include "cfpla/experiments.hpp"
#include "cfpla/results_io.hpp"
#include "cfpla/scenario.hpp"
#include "cfpla/validation.hpp"
#include "cfpla/version.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<int> trials;
    std::optional<int> workers;
    std::string output;
    std::string summary;
};

void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("-c,--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
    app->add_option("--seed", o.seed, "Root seed");
    app->add_option("--drops", o.drops, "Number of drops");
    app->add_option("--trials", o.trials, "Trials per drop and hypothesis");
    app->add_option("--workers", o.workers, "Worker threads");
    app->add_option("-o,--output", o.output, "Results CSV path");
    app->add_option("--summary", o.summary, "Run summary JSON path (default: <output>.summary.json)");
}

cfpla::ScenarioConfig resolve_config(const CommonOptions& o)
{
    cfpla::ScenarioConfig c = o.config_path.empty() ? cfpla::ScenarioConfig{}
                                                    : cfpla::load_config(o.config_path);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw cfpla::ConfigError("--set expects key=value, got '" + kv + "'");
        cfpla::apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed)
        c.seed = *o.seed;
    if (o.drops)
        c.drops = *o.drops;
    if (o.trials)
        c.trials_per_drop = *o.trials;
    if (o.workers)
        c.workers = *o.workers;
    return c;
}

std::filesystem::path summary_path(const CommonOptions& o, const std::filesystem::path& csv)
{
    if (!o.summary.empty())
        return o.summary;
    std::filesystem::path p = csv;
    p.replace_extension(".summary.json");
    return p;
}

void emit(const std::string& command, const CommonOptions& o, const std::filesystem::path& csv,
          const cfpla::ScenarioConfig& config, const std::vector<cfpla::ResultRow>& rows,
          const std::vector<std::string>& skipped)
{
    cfpla::write_csv(csv, rows);
    const auto json_path = summary_path(o, csv);
    cfpla::write_text(json_path, cfpla::run_summary_json_text(command, config, rows, skipped));
    std::cout << "wrote " << rows.size() << " rows to " << csv.string() << "\n"
              << "wrote summary to " << json_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cell-free massive MIMO tag authentication simulator"};
    app.set_version_flag("--version", std::string(cfpla::kVersion));
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Simulate one scenario");
    add_common(run, run_opts);

    CommonOptions sweep_opts;
    std::string figure;
    auto* sweep = app.add_subcommand("sweep", "Run a figure preset sweep");
    add_common(sweep, sweep_opts);
    sweep->add_option("--figure", figure, "Preset")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));

    std::uint64_t validate_seed = 1;
    auto* validate = app.add_subcommand("validate", "Run the structural invariant suite");
    validate->add_option("--seed", validate_seed, "Seed for the randomized checks");

    std::string summarize_input;
    std::string summarize_output;
    auto* summarize = app.add_subcommand("summarize", "Aggregate a results CSV over drops");
    summarize->add_option("input", summarize_input, "Results CSV")->required()->check(CLI::ExistingFile);
    summarize->add_option("-o,--output", summarize_output, "Write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto config = resolve_config(run_opts);
            config.validate();
            std::vector<cfpla::ResultRow> rows;
            for (const auto& report : cfpla::run_drops(config))
                rows.push_back(cfpla::make_row(config, report));
            const std::filesystem::path csv = run_opts.output.empty() ? "results.csv" : run_opts.output;
            emit("run", run_opts, csv, config, rows, {});
        } else if (*sweep) {
            const auto config = resolve_config(sweep_opts);
            auto spec = cfpla::figure_preset(cfpla::parse_figure_id(figure));
            if (!sweep_opts.output.empty())
                spec.output_path = sweep_opts.output;
            std::vector<std::string> skipped;
            const auto rows = cfpla::run_sweep(spec, config, &skipped);
            for (const auto& s : skipped)
                std::cerr << "skipped " << s << "\n";
            emit("sweep " + figure, sweep_opts, spec.output_path, config, rows, skipped);
        } else if (*validate) {
            const auto checks = cfpla::run_validation(validate_seed);
            for (const auto& c : checks)
                std::printf("%-32s %s  value=%.3g  tol=%.3g  (%s)\n", c.name.c_str(),
                            c.passed ? "PASS" : "FAIL", c.value, c.tolerance, c.detail.c_str());
            return cfpla::all_passed(checks) ? 0 : 1;
        } else if (*summarize) {
            const auto rows = cfpla::read_csv(summarize_input);
            const std::string text = cfpla::summary_to_json_text(cfpla::summarize(rows)) + "\n";
            if (summarize_output.empty())
                std::cout << text;
            else
                cfpla::write_text(summarize_output, text);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
