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

#include "cfpla/validation.hpp"

#include "cfpla/experiments.hpp"
#include "cfpla/receiver.hpp"
#include "cfpla/results_io.hpp"
#include "cfpla/streams.hpp"
#include "cfpla/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cfpla {

namespace {

ValidationCheck make_check(std::string name, double value, double tolerance, std::string detail)
{
    ValidationCheck c;
    c.name = std::move(name);
    c.value = value;
    c.tolerance = tolerance;
    c.passed = std::isfinite(value) && value <= tolerance;
    c.detail = std::move(detail);
    return c;
}

ScenarioConfig small_config(std::uint64_t seed)
{
    ScenarioConfig c;
    c.M = 3;
    c.N = 6;
    c.K = 3;
    c.L = 64;
    c.tau_p = 5;
    c.seed = seed;
    c.drops = 3;
    c.trials_per_drop = 20;
    c.variance_estimation_trials = kMinVarianceTrials;
    return c;
}

LargeScaleProfile drop_profile(const ScenarioConfig& config, const RandomStream& root)
{
    RandomStream geo = root.child(streams::kGeometry);
    RandomStream shadow = root.child(streams::kShadowing);
    return large_scale_profile(generate_geometry(config, geo), config, shadow);
}

ValidationCheck pilot_gram()
{
    double worst = 0.0;
    for (int K : {1, 3, 8})
        for (int tau : {K, K + 4, 20}) {
            const PilotBook book = make_pilot_book(tau, K);
            const ComplexMatrix gram = book.pilots.t() * book.pilots;
            worst = std::max(worst, arma::abs(gram - arma::eye<ComplexMatrix>(K, K)).max());
        }
    return make_check("pilot_gram_identity", worst, 1e-12, "max |Phi^H Phi - I|");
}

ValidationCheck zf_identity(const ScenarioConfig& config, const RandomStream& root)
{
    ScenarioConfig c = config;
    c.signal_path = SignalPath::PerAp;
    const LargeScaleProfile profile = drop_profile(c, root);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const BlockState b = prepare_block(profile, c, root.child(streams::kTrials).child(t));
        for (arma::uword m = 0; m < b.combiners.aps(); ++m) {
            const ComplexMatrix prod = b.combiners.w[m].t() * b.estimates.g_hat[m];
            worst = std::max(worst,
                             arma::abs(prod - arma::eye<ComplexMatrix>(c.K, c.K)).max());
        }
    }
    return make_check("zf_identity", worst, 1e-8, "max |W_m^H G_hat_m - I| over 200 blocks");
}

ValidationCheck mmse_decomposition(const ScenarioConfig& config, const RandomStream& root)
{
    const LargeScaleProfile profile = drop_profile(config, root);
    RandomStream rng = root.child(streams::kChannel);
    const ChannelRealization ch = draw_channels(profile, config.N, rng);
    RandomStream noise = root.child(streams::kPilotNoise);
    const ChannelEstimates est =
        mmse_estimate(draw_projected_pilots(ch, profile, config.tau_p, noise), profile, config.tau_p);
    const arma::mat rel = arma::abs(est.gamma + est.error_var - profile.beta) / profile.beta;
    return make_check("mmse_variance_decomposition", rel.max(),
                      8.0 * std::numeric_limits<double>::epsilon(),
                      "max |gamma + error_var - beta| / beta");
}

ValidationCheck decorrelation(const ScenarioConfig& config, const RandomStream& root)
{
    ScenarioConfig c = config;
    c.signal_path = SignalPath::PerAp;
    const LargeScaleProfile profile = drop_profile(c, root);
    const PilotBook book = make_pilot_book(c.tau_p, c.K);

    // Normalised estimate and error samples pooled over APs, users and antennas.
    Complex cross = 0.0;
    double ee = 0.0, hh = 0.0;
    const RandomStream base = root.child(streams::kValidation);
    for (int t = 0; t < 20000; ++t) {
        const RandomStream ts = base.child(t);
        RandomStream ch_rng = ts.child(streams::kChannel);
        RandomStream pilot_rng = ts.child(streams::kPilotNoise);
        const ChannelRealization ch = draw_channels(profile, c.N, ch_rng);
        const ChannelEstimates est = mmse_estimate(
            project_pilots(receive_pilots(ch, profile, book, pilot_rng), book), profile, c.tau_p);
        for (arma::uword m = 0; m < ch.aps(); ++m)
            for (arma::uword k = 0; k < ch.users(); ++k) {
                const ComplexVector h = est.g_hat[m].col(k) / std::sqrt(est.gamma(m, k));
                const ComplexVector e =
                    (ch.g[m].col(k) - est.g_hat[m].col(k)) / std::sqrt(est.error_var(m, k));
                cross += arma::cdot(e, h);
                ee += arma::accu(arma::square(arma::abs(e)));
                hh += arma::accu(arma::square(arma::abs(h)));
            }
    }
    const double corr = std::abs(cross) / std::sqrt(ee * hh);
    return make_check("estimate_error_decorrelation", corr, 0.01,
                      "|corr(g_hat, g - g_hat)| pooled over 20000 blocks");
}

ValidationCheck q_round_trip()
{
    double worst = 0.0;
    for (double lp = -12.0; lp <= std::log10(0.5) + 1e-12; lp += 0.05) {
        for (double p : {std::pow(10.0, lp), 1.0 - std::pow(10.0, lp)}) {
            if (!(p > 0.0 && p < 1.0))
                continue;
            worst = std::max(worst, std::abs(q_function(q_inverse(p)) - p) / std::min(p, 1.0 - p));
        }
    }
    return make_check("q_round_trip", worst, 1e-9, "max relative |Q(Q^-1(p)) - p|, p in [1e-12, 1 - 1e-12]");
}

ValidationCheck worker_determinism(const ScenarioConfig& config)
{
    SweepSpec spec;
    spec.swept = {"L", {32, 64}};
    spec.series = {"M", {2, 3}};
    ScenarioConfig one = config;
    one.workers = 1;
    ScenarioConfig many = config;
    many.workers = 3;
    const std::string a = rows_to_csv_text(run_sweep(spec, one));
    const std::string b = rows_to_csv_text(run_sweep(spec, many));
    return make_check("worker_count_determinism", a == b ? 0.0 : 1.0, 0.0,
                      "CSV from 1 and 3 workers must be byte-identical");
}

}  // namespace

std::vector<ValidationCheck> run_validation(std::uint64_t seed)
{
    const ScenarioConfig config = small_config(seed);
    const RandomStream root = RandomStream(seed).child(streams::kValidation);
    std::vector<ValidationCheck> checks;
    checks.push_back(pilot_gram());
    checks.push_back(zf_identity(config, root.child(1)));
    checks.push_back(mmse_decomposition(config, root.child(2)));
    checks.push_back(decorrelation(config, root.child(3)));
    checks.push_back(q_round_trip());
    checks.push_back(worker_determinism(config));
    return checks;
}

bool all_passed(const std::vector<ValidationCheck>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

}  // namespace cfpla
