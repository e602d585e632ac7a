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

#pragma once

#include "cfpla/analysis.hpp"
#include "cfpla/authtag.hpp"
#include "cfpla/receiver.hpp"
#include "cfpla/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cfpla {

// Which hypotheses a drop simulates. Skipped hypotheses report NaN rates.
struct HypothesisMask {
    bool h0 = true;
    bool h1 = true;
    bool eve = true;

    static HypothesisMask all() { return {}; }
    static HypothesisMask only(Hypothesis h)
    {
        return {h == Hypothesis::H0, h == Hypothesis::H1, h == Hypothesis::Eve};
    }
};

// Everything a trial needs that is fixed for the drop.
struct DropContext {
    LargeScaleProfile profile;
    std::vector<SecretKey> keys;  // K users, then Eve
    arma::vec theta;              // K thresholds
};

// One coherence block under `hypothesis`. Returns one outcome per user; under
// Hypothesis::Eve the probed user (trial mod K) carries truth = Eve and the
// others truth = H1. The hypothesis is not mixed into `stream`, so the three
// hypotheses of one trial index see the same channels, messages and noise.
std::vector<TrialOutcome> run_trial(const DropContext& drop, const BlockState& block,
                                    const EffectiveGains& gains, Hypothesis hypothesis,
                                    const ScenarioConfig& config, std::uint64_t trial,
                                    const RandomStream& stream);

struct DropReport {
    int drop = 0;
    arma::vec xi;
    arma::vec theta;
    arma::vec pd_closed_form;   // per user
    arma::vec pfa_closed_form;  // per user
    arma::uvec h0_accepts;      // per user
    arma::uvec h1_accepts;      // per user
    std::uint64_t eve_accepts = 0;
    std::uint64_t eve_trials = 0;
    std::uint64_t trials = 0;   // blocks per hypothesis
    RunningStats lambda_h0;
    RunningStats lambda_h1;
    RunningStats lambda_eve;
    std::uint64_t resampled = 0;
    EffectiveGainStats gain_stats;

    double pd_empirical() const;     // H1 accepts / (K trials)
    double pfa_empirical() const;    // H0 accepts / (K trials)
    double eve_acceptance() const;   // Eve accepts / Eve trials
    double mean_pd_closed_form() const;
};

// Geometry, shadowing, keys, gain statistics, thresholds and trials for one drop.
DropReport run_drop(const ScenarioConfig& config, int drop, HypothesisMask mask = {});
// Same with a caller-supplied large-scale profile in place of the random geometry.
DropReport run_drop(const ScenarioConfig& config, int drop, const LargeScaleProfile& profile,
                    HypothesisMask mask = {});

// Drops 0 .. config.drops-1 on config.workers threads; output is in drop
// order and independent of the worker count.
std::vector<DropReport> run_drops(const ScenarioConfig& config, HypothesisMask mask = {});

struct ResultRow {
    int M = 0;
    int N = 0;
    int K = 0;
    int L = 0;
    double rho_s = 0.0;
    double pfa_target = 0.0;
    int drop = 0;
    std::uint64_t seed = 0;
    double pd_closed_form = 0.0;
    double pd_empirical = 0.0;
    double pfa_empirical = 0.0;
    double eve_acceptance_rate = 0.0;
    double ci_halfwidth = 0.0;  // of pd_empirical
    std::uint64_t trials = 0;   // H1 user decisions behind pd_empirical
};

// 1.96 sqrt(p (1 - p) / n)
double ci_halfwidth(double p, std::uint64_t n);

ResultRow make_row(const ScenarioConfig& config, const DropReport& report);

enum class FigureId { Fig2, Fig3, Fig4, Custom };

struct SweepAxis {
    std::string name;  // a config key
    std::vector<double> values;
};

struct SweepSpec {
    FigureId figure = FigureId::Custom;
    SweepAxis swept;
    SweepAxis series;  // optional outer axis; empty name means none
    std::vector<std::pair<std::string, std::string>> fixed_overrides;  // key, JSON value
    std::filesystem::path output_path;
    HypothesisMask hypotheses;

    // Throws ConfigError on unknown keys or non-increasing values.
    void validate() const;
};

SweepSpec figure_preset(FigureId figure);
FigureId parse_figure_id(const std::string& name);
std::string figure_name(FigureId figure);

// Points whose configuration fails validation (for example N < K) are skipped
// and reported through `skipped` when non-null.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& base,
                                 std::vector<std::string>* skipped = nullptr);

// Rows ordered by (M, N, K, L, rho_s, pfa_target, drop).
void sort_rows(std::vector<ResultRow>& rows);

struct ScenarioSummary {
    ResultRow mean;  // trial-weighted; drop = number of drops
    double abs_pd_gap = 0.0;
};

struct Summary {
    std::vector<ScenarioSummary> scenarios;
    double max_abs_pd_gap = 0.0;
    double eve_acceptance_mean = 0.0;
    double eve_acceptance_max = 0.0;
    std::uint64_t rows = 0;
};

// Throws std::invalid_argument on empty input.
Summary summarize(const std::vector<ResultRow>& rows);
std::string summary_to_json_text(const Summary& summary);

}  // namespace cfpla
