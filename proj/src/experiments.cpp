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

#include "cfpla/experiments.hpp"

#include "cfpla/streams.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace cfpla {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rate(std::uint64_t hits, std::uint64_t n)
{
    return n == 0 ? kNaN : static_cast<double>(hits) / static_cast<double>(n);
}

std::string number_text(double v)
{
    std::ostringstream os;
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
        os << static_cast<long long>(v);
    else
        os.precision(17), os << v;
    return os.str();
}

DropReport simulate_drop(const ScenarioConfig& config, int drop, const LargeScaleProfile& profile,
                         const RandomStream& drop_stream, HypothesisMask mask)
{
    const auto K = static_cast<arma::uword>(config.K);
    if (profile.users() != K || profile.aps() != static_cast<arma::uword>(config.M))
        throw std::invalid_argument("run_drop: profile does not match M and K");

    DropContext ctx;
    ctx.profile = profile;
    RandomStream key_rng = drop_stream.child(streams::kKeys);
    ctx.keys = generate_keys(config.K, key_rng);

    DropReport report;
    report.drop = drop;
    RandomStream stats_rng = drop_stream.child(streams::kGainStats);
    report.gain_stats = estimate_gain_stats(profile, config, stats_rng);
    const ClosedFormResult cf = evaluate_closed_form(report.gain_stats, config);
    report.xi = cf.xi;
    report.theta = cf.theta_star;
    report.pd_closed_form = cf.pd;
    report.pfa_closed_form = cf.pfa;
    ctx.theta = cf.theta_star;

    report.h0_accepts = arma::uvec(K, arma::fill::zeros);
    report.h1_accepts = arma::uvec(K, arma::fill::zeros);
    report.trials = static_cast<std::uint64_t>(config.trials_per_drop);
    report.resampled = report.gain_stats.resampled;
    if (!config.eve_present)
        mask.eve = false;

    const RandomStream trial_root = drop_stream.child(streams::kTrials);
    for (int t = 0; t < config.trials_per_drop; ++t) {
        const RandomStream ts = trial_root.child(static_cast<std::uint64_t>(t));
        const BlockState block = prepare_block(profile, config, ts);
        report.resampled += static_cast<std::uint64_t>(block.resampled);
        const EffectiveGains gains = effective_gains(block.channels, profile, block.combiners);

        const auto trial = static_cast<std::uint64_t>(t);
        if (mask.h0) {
            for (const auto& o : run_trial(ctx, block, gains, Hypothesis::H0, config, trial, ts)) {
                report.lambda_h0.add(o.lambda);
                report.h0_accepts(o.user) += o.decision == Decision::Accept;
            }
        }
        if (mask.h1) {
            for (const auto& o : run_trial(ctx, block, gains, Hypothesis::H1, config, trial, ts)) {
                report.lambda_h1.add(o.lambda);
                report.h1_accepts(o.user) += o.decision == Decision::Accept;
            }
        }
        if (mask.eve) {
            for (const auto& o : run_trial(ctx, block, gains, Hypothesis::Eve, config, trial, ts)) {
                if (o.truth != Hypothesis::Eve)
                    continue;
                report.lambda_eve.add(o.lambda);
                report.eve_accepts += o.decision == Decision::Accept;
                ++report.eve_trials;
            }
        }
    }
    if (!mask.h0)
        report.h0_accepts.reset();
    if (!mask.h1)
        report.h1_accepts.reset();
    return report;
}

}  // namespace

std::vector<TrialOutcome> run_trial(const DropContext& drop, const BlockState& block,
                                    const EffectiveGains& gains, Hypothesis hypothesis,
                                    const ScenarioConfig& config, std::uint64_t trial,
                                    const RandomStream& stream)
{
    const auto K = static_cast<arma::uword>(config.K);
    if (drop.keys.size() != K + 1 || drop.theta.n_elem != K)
        throw std::invalid_argument("run_trial: drop context does not match K");

    RandomStream msg_rng = stream.child(streams::kMessages);
    std::vector<MessageBlock> messages;
    std::vector<TagBlock> tags;
    messages.reserve(K);
    tags.reserve(K);
    for (arma::uword k = 0; k < K; ++k) {
        messages.push_back(generate_message(config.L, msg_rng, config.constellation));
        tags.push_back(generate_tag(messages.back(), drop.keys[k]));
    }

    const bool eve_transmits = config.eve_present || hypothesis == Hypothesis::Eve;
    SpoofedBlock spoof;
    if (eve_transmits) {
        RandomStream eve_rng = stream.child(streams::kEve);
        spoof = build_eve_signal(config.L, drop.keys[K], config.rho_s, config.rho_t, eve_rng,
                                 config.constellation);
    }
    const arma::uword probed = trial % K;

    std::vector<TaggedSignal> signals;
    signals.reserve(K);
    for (arma::uword k = 0; k < K; ++k) {
        if (hypothesis == Hypothesis::H0) {
            signals.push_back(untagged_signal(messages[k]));
        } else if (hypothesis == Hypothesis::Eve && k == probed) {
            if (config.eve_mode == EveMode::Replace)
                signals.push_back(TaggedSignal{ComplexVector(config.L, arma::fill::zeros), 1.0, 0.0});
            else
                signals.push_back(untagged_signal(messages[k]));
        } else {
            signals.push_back(build_tagged_signal(messages[k], tags[k], config.rho_s, config.rho_t));
        }
    }

    const TaggedSignal* eve = eve_transmits ? &spoof.signal : nullptr;
    RandomStream noise_rng = stream.child(streams::kDataNoise);
    const AggregatedSignal z =
        config.signal_path == SignalPath::PerAp
            ? aggregate(receive_data(block.channels, drop.profile, signals, eve, noise_rng,
                                     config.noise_scale),
                        block.combiners)
            : aggregate_direct(gains, signals, eve, noise_rng, config.noise_scale);

    std::vector<TrialOutcome> out;
    out.reserve(K);
    for (arma::uword k = 0; k < K; ++k) {
        const bool spoofed = hypothesis == Hypothesis::Eve && k == probed;
        const MessageBlock& truth = spoofed ? spoof.message : messages[k];
        const double rho_k = drop.profile.rho(k);
        const ComplexVector zk = z.z(k);

        TrialOutcome o;
        o.user = k;
        o.theta = drop.theta(k);
        o.truth = spoofed ? Hypothesis::Eve
                          : (hypothesis == Hypothesis::Eve ? Hypothesis::H1 : hypothesis);
        if (config.recovery == MessageRecovery::Perfect && !spoofed) {
            o.lambda = test_statistic(tags[k], residual(zk, truth, rho_k, config.rho_s, config.rho_t));
        } else {
            const MessageBlock s_hat = recover_message(zk, config.recovery, truth, rho_k,
                                                       static_cast<double>(config.M));
            const TagBlock expected = generate_tag(s_hat, drop.keys[k]);
            o.lambda = test_statistic(expected, residual(zk, s_hat, rho_k, config.rho_s, config.rho_t));
        }
        o.decision = decide(o.lambda, o.theta);
        out.push_back(o);
    }
    return out;
}

double DropReport::pd_empirical() const
{
    return rate(h1_accepts.empty() ? 0 : arma::accu(h1_accepts),
                h1_accepts.empty() ? 0 : trials * h1_accepts.n_elem);
}

double DropReport::pfa_empirical() const
{
    return rate(h0_accepts.empty() ? 0 : arma::accu(h0_accepts),
                h0_accepts.empty() ? 0 : trials * h0_accepts.n_elem);
}

double DropReport::eve_acceptance() const
{
    return rate(eve_accepts, eve_trials);
}

double DropReport::mean_pd_closed_form() const
{
    return pd_closed_form.empty() ? kNaN : arma::mean(pd_closed_form);
}

DropReport run_drop(const ScenarioConfig& config, int drop, HypothesisMask mask)
{
    config.validate();
    const RandomStream d = RandomStream(config.seed).child(streams::kDrop).child(drop);
    RandomStream geo_rng = d.child(streams::kGeometry);
    const NetworkGeometry geometry = generate_geometry(config, geo_rng);
    RandomStream shadow_rng = d.child(streams::kShadowing);
    const LargeScaleProfile profile = large_scale_profile(geometry, config, shadow_rng);
    return simulate_drop(config, drop, profile, d, mask);
}

DropReport run_drop(const ScenarioConfig& config, int drop, const LargeScaleProfile& profile,
                    HypothesisMask mask)
{
    config.validate();
    const RandomStream d = RandomStream(config.seed).child(streams::kDrop).child(drop);
    return simulate_drop(config, drop, profile, d, mask);
}

std::vector<DropReport> run_drops(const ScenarioConfig& config, HypothesisMask mask)
{
    config.validate();
    std::vector<DropReport> reports(static_cast<std::size_t>(config.drops));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (int i = next++; i < config.drops; i = next++) {
            try {
                reports[static_cast<std::size_t>(i)] = run_drop(config, i, mask);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = config.drops;
            }
        }
    };

    const int workers = std::min(config.workers, config.drops);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    return reports;
}

double ci_halfwidth(double p, std::uint64_t n)
{
    if (n == 0 || !std::isfinite(p))
        return kNaN;
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

ResultRow make_row(const ScenarioConfig& config, const DropReport& report)
{
    ResultRow row;
    row.M = config.M;
    row.N = config.N;
    row.K = config.K;
    row.L = config.L;
    row.rho_s = config.rho_s;
    row.pfa_target = config.pfa_target;
    row.drop = report.drop;
    row.seed = config.seed;
    row.pd_closed_form = report.mean_pd_closed_form();
    row.pd_empirical = report.pd_empirical();
    row.pfa_empirical = report.pfa_empirical();
    row.eve_acceptance_rate = report.eve_acceptance();
    row.trials = report.trials * static_cast<std::uint64_t>(config.K);
    row.ci_halfwidth = ci_halfwidth(row.pd_empirical, row.trials);
    return row;
}

void SweepSpec::validate() const
{
    const auto keys = config_keys();
    auto check_axis = [&](const SweepAxis& axis, bool required) {
        if (axis.name.empty()) {
            if (required)
                throw ConfigError("sweep: swept parameter name is empty");
            return;
        }
        if (std::find(keys.begin(), keys.end(), axis.name) == keys.end())
            throw ConfigError("sweep: unknown parameter '" + axis.name + "'");
        if (axis.values.empty())
            throw ConfigError("sweep: parameter '" + axis.name + "' has no values");
        for (std::size_t i = 1; i < axis.values.size(); ++i)
            if (!(axis.values[i] > axis.values[i - 1]))
                throw ConfigError("sweep: values of '" + axis.name + "' must be strictly increasing");
    };
    check_axis(swept, true);
    check_axis(series, false);
    for (const auto& [key, value] : fixed_overrides)
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("sweep: unknown fixed parameter '" + key + "'");
}

SweepSpec figure_preset(FigureId figure)
{
    SweepSpec s;
    s.figure = figure;
    switch (figure) {
    case FigureId::Fig2:
        s.series = {"M", {1, 2, 4, 8}};
        s.swept = {"L", {64, 128, 256, 512, 1024}};
        s.fixed_overrides = {{"K", "4"}, {"N", "10"}};
        break;
    case FigureId::Fig3: {
        s.series = {"N", {5, 10, 20, 30}};
        s.swept.name = "K";
        for (int k = 1; k <= 15; ++k)
            s.swept.values.push_back(k);
        s.fixed_overrides = {{"M", "5"}};
        break;
    }
    case FigureId::Fig4:
        s.series = {"rho_s", {0.90, 0.95, 0.99}};
        s.swept = {"pfa_target", {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2}};
        s.fixed_overrides = {{"K", "4"}, {"M", "5"}, {"N", "10"}};
        break;
    case FigureId::Custom:
        break;
    }
    s.output_path = figure_name(figure) + ".csv";
    return s;
}

FigureId parse_figure_id(const std::string& name)
{
    if (name == "fig2")
        return FigureId::Fig2;
    if (name == "fig3")
        return FigureId::Fig3;
    if (name == "fig4")
        return FigureId::Fig4;
    if (name == "custom")
        return FigureId::Custom;
    throw ConfigError("unknown figure '" + name + "' (expected fig2|fig3|fig4|custom)");
}

std::string figure_name(FigureId figure)
{
    switch (figure) {
    case FigureId::Fig2:
        return "fig2";
    case FigureId::Fig3:
        return "fig3";
    case FigureId::Fig4:
        return "fig4";
    case FigureId::Custom:
        break;
    }
    return "custom";
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const ScenarioConfig& base,
                                 std::vector<std::string>* skipped)
{
    spec.validate();
    ScenarioConfig fixed = base;
    for (const auto& [key, value] : spec.fixed_overrides)
        apply_override(fixed, key, value);

    const std::vector<double> series_values =
        spec.series.name.empty() ? std::vector<double>{kNaN} : spec.series.values;

    std::vector<ResultRow> rows;
    for (double sv : series_values) {
        for (double v : spec.swept.values) {
            ScenarioConfig cfg = fixed;
            std::string label;
            if (!spec.series.name.empty()) {
                apply_override(cfg, spec.series.name, number_text(sv));
                label = spec.series.name + "=" + number_text(sv) + " ";
            }
            apply_override(cfg, spec.swept.name, number_text(v));
            label += spec.swept.name + "=" + number_text(v);
            try {
                cfg.validate();
            } catch (const ConfigError& e) {
                if (skipped != nullptr)
                    skipped->push_back(label + ": " + e.what());
                continue;
            }
            for (const auto& report : run_drops(cfg, spec.hypotheses))
                rows.push_back(make_row(cfg, report));
        }
    }
    sort_rows(rows);
    return rows;
}

void sort_rows(std::vector<ResultRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.M, a.N, a.K, a.L, a.rho_s, a.pfa_target, a.drop) <
               std::tie(b.M, b.N, b.K, b.L, b.rho_s, b.pfa_target, b.drop);
    });
}

Summary summarize(const std::vector<ResultRow>& rows)
{
    if (rows.empty())
        throw std::invalid_argument("summarize: no rows");

    using Key = std::tuple<int, int, int, int, double, double, std::uint64_t>;
    struct Acc {
        ResultRow first;
        double w = 0.0;
        double pd_cf = 0.0, pd = 0.0, pfa = 0.0, eve = 0.0;
        int drops = 0;
    };
    std::map<Key, Acc> groups;
    for (const auto& r : rows) {
        for (double p : {r.pd_closed_form, r.pd_empirical, r.pfa_empirical, r.eve_acceptance_rate})
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("summarize: probability outside [0, 1]");
        auto& acc = groups[{r.M, r.N, r.K, r.L, r.rho_s, r.pfa_target, r.seed}];
        if (acc.drops == 0)
            acc.first = r;
        const double w = static_cast<double>(r.trials);
        acc.w += w;
        acc.pd_cf += w * r.pd_closed_form;
        acc.pd += w * r.pd_empirical;
        acc.pfa += w * r.pfa_empirical;
        acc.eve += w * r.eve_acceptance_rate;
        ++acc.drops;
    }

    Summary s;
    s.rows = rows.size();
    double eve_sum = 0.0, eve_w = 0.0;
    s.eve_acceptance_max = kNaN;
    for (const auto& [key, acc] : groups) {
        ScenarioSummary sc;
        sc.mean = acc.first;
        sc.mean.drop = acc.drops;
        sc.mean.trials = static_cast<std::uint64_t>(acc.w);
        const double w = acc.w > 0.0 ? acc.w : 1.0;
        sc.mean.pd_closed_form = acc.pd_cf / w;
        sc.mean.pd_empirical = acc.pd / w;
        sc.mean.pfa_empirical = acc.pfa / w;
        sc.mean.eve_acceptance_rate = acc.eve / w;
        sc.mean.ci_halfwidth = ci_halfwidth(sc.mean.pd_empirical, sc.mean.trials);
        sc.abs_pd_gap = std::abs(sc.mean.pd_closed_form - sc.mean.pd_empirical);
        if (std::isfinite(sc.abs_pd_gap))
            s.max_abs_pd_gap = std::max(s.max_abs_pd_gap, sc.abs_pd_gap);
        if (std::isfinite(sc.mean.eve_acceptance_rate)) {
            eve_sum += acc.eve;
            eve_w += acc.w;
            s.eve_acceptance_max = std::isfinite(s.eve_acceptance_max)
                                       ? std::max(s.eve_acceptance_max, sc.mean.eve_acceptance_rate)
                                       : sc.mean.eve_acceptance_rate;
        }
        s.scenarios.push_back(sc);
    }
    s.eve_acceptance_mean = eve_w > 0.0 ? eve_sum / eve_w : kNaN;
    return s;
}

std::string summary_to_json_text(const Summary& summary)
{
    using json = nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc;
    doc["rows"] = summary.rows;
    doc["max_abs_pd_gap"] = num(summary.max_abs_pd_gap);
    doc["eve_acceptance"] = {{"mean", num(summary.eve_acceptance_mean)},
                             {"max", num(summary.eve_acceptance_max)}};
    json scenarios = json::array();
    for (const auto& sc : summary.scenarios) {
        const ResultRow& m = sc.mean;
        scenarios.push_back({{"M", m.M},
                             {"N", m.N},
                             {"K", m.K},
                             {"L", m.L},
                             {"rho_s", m.rho_s},
                             {"pfa_target", m.pfa_target},
                             {"seed", m.seed},
                             {"drops", m.drop},
                             {"trials", m.trials},
                             {"pd_closed_form", num(m.pd_closed_form)},
                             {"pd_empirical", num(m.pd_empirical)},
                             {"pfa_empirical", num(m.pfa_empirical)},
                             {"eve_acceptance_rate", num(m.eve_acceptance_rate)},
                             {"ci_halfwidth", num(m.ci_halfwidth)},
                             {"abs_pd_gap", num(sc.abs_pd_gap)}});
    }
    doc["scenarios"] = std::move(scenarios);
    return doc.dump(2);
}

}  // namespace cfpla
