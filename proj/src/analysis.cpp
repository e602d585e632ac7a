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

#include "cfpla/receiver.hpp"
#include "cfpla/streams.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfpla {

namespace {

// E|z - Ez|^2 accumulated from the real and imaginary parts.
struct ComplexStats {
    RunningStats re;
    RunningStats im;

    void add(Complex z)
    {
        re.add(z.real());
        im.add(z.imag());
    }
    double variance() const { return re.variance() + im.variance(); }
    Complex mean() const { return {re.mean(), im.mean()}; }
};

void require_positive_xi(double xi, const char* who)
{
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw std::invalid_argument(std::string(who) + ": xi must be positive and finite");
}

}  // namespace

EffectiveGainStats estimate_gain_stats(const LargeScaleProfile& profile,
                                       const ScenarioConfig& config, RandomStream& stream)
{
    if (config.variance_estimation_trials < kMinVarianceTrials)
        throw std::invalid_argument("estimate_gain_stats: variance_estimation_trials must be at "
                                    "least 1000");
    const arma::uword K = profile.users();

    std::vector<ComplexStats> akk(K), ake(K);
    std::vector<ComplexStats> akkp(K * K);
    std::vector<RunningStats> noise(K);
    std::uint64_t resampled = 0;

    for (int t = 0; t < config.variance_estimation_trials; ++t) {
        const BlockState block = prepare_block(profile, config, stream.child(t));
        resampled += static_cast<std::uint64_t>(block.resampled);
        const EffectiveGains eg = effective_gains(block.channels, profile, block.combiners);
        for (arma::uword k = 0; k < K; ++k) {
            akk[k].add(eg.a(k, k));
            ake[k].add(eg.a_eve(k));
            noise[k].add(eg.noise_cov(k, k).real());
            for (arma::uword j = 0; j < K; ++j)
                if (j != k)
                    akkp[k * K + j].add(eg.a(k, j));
        }
    }

    EffectiveGainStats s;
    s.aps = static_cast<int>(profile.aps());
    s.rho = profile.rho;
    s.mean_akk.set_size(K);
    s.sigma2_kk.set_size(K);
    s.sigma2_ke.set_size(K);
    s.noise_trace.set_size(K);
    s.se_mean_akk.set_size(K);
    s.se_noise_trace.set_size(K);
    s.sigma2_kkp = arma::mat(K, K, arma::fill::zeros);
    for (arma::uword k = 0; k < K; ++k) {
        s.mean_akk(k) = akk[k].mean();
        s.sigma2_kk(k) = akk[k].variance();
        s.sigma2_ke(k) = ake[k].variance();
        s.noise_trace(k) = noise[k].mean();
        s.se_mean_akk(k) = akk[k].re.std_error();
        s.se_noise_trace(k) = noise[k].std_error();
        for (arma::uword j = 0; j < K; ++j)
            if (j != k)
                s.sigma2_kkp(k, j) = akkp[k * K + j].variance();
    }
    s.trials = static_cast<std::uint64_t>(config.variance_estimation_trials);
    s.resampled = resampled;
    return s;
}

arma::vec compute_xi(const EffectiveGainStats& stats, double rho_s, double rho_t,
                     SelfTermForm self_term, StatisticVariance statistic)
{
    if (!(rho_t > 0.0))
        throw std::invalid_argument("compute_xi: rho_t must be positive");
    const arma::uword K = stats.users();
    const double M = static_cast<double>(stats.aps);
    const double rs2 = rho_s * rho_s;
    const double rt2 = rho_t * rho_t;

    arma::vec xi(K);
    for (arma::uword k = 0; k < K; ++k) {
        const double rho = stats.rho(k);
        const double self = self_term == SelfTermForm::Printed
                                ? std::pow(std::sqrt(rho) * M - 1.0, 2)
                                : rho * (M - 1.0) * (M - 1.0);
        double leakage = stats.sigma2_ke(k);
        for (arma::uword j = 0; j < K; ++j)
            if (j != k)
                leakage += stats.sigma2_kkp(k, j);

        double value = rs2 / (rho * rt2) * (stats.sigma2_kk(k) + self) +
                       (1.0 / rho + rs2 / (rho * rt2)) * leakage +
                       stats.noise_trace(k) / (rho * rt2);
        if (statistic == StatisticVariance::RealPart)
            value *= 0.5;
        xi(k) = value;
    }
    return xi;
}

arma::vec compute_xi(const EffectiveGainStats& stats, const ScenarioConfig& config)
{
    return compute_xi(stats, config.rho_s, config.rho_t, config.self_term, config.statistic);
}

double closed_form_pfa(double theta, double xi, int L)
{
    require_positive_xi(xi, "closed_form_pfa");
    if (L < 1)
        throw std::invalid_argument("closed_form_pfa: L must be at least 1");
    return q_function(theta / std::sqrt(L * xi));
}

double closed_form_pd(double theta, double xi, int L, int M)
{
    require_positive_xi(xi, "closed_form_pd");
    if (L < 1 || M < 1)
        throw std::invalid_argument("closed_form_pd: L and M must be at least 1");
    return q_function((theta - static_cast<double>(M) * L) / std::sqrt(L * xi));
}

double optimal_threshold(double pfa_target, double xi, int L)
{
    require_positive_xi(xi, "optimal_threshold");
    if (L < 1)
        throw std::invalid_argument("optimal_threshold: L must be at least 1");
    return q_inverse(pfa_target) * std::sqrt(L * xi);
}

ClosedFormResult evaluate_closed_form(const EffectiveGainStats& stats, const ScenarioConfig& config)
{
    ClosedFormResult r;
    r.xi = compute_xi(stats, config);
    const arma::uword K = r.xi.n_elem;
    r.theta_star.set_size(K);
    r.pfa.set_size(K);
    r.pd.set_size(K);
    for (arma::uword k = 0; k < K; ++k) {
        r.theta_star(k) = optimal_threshold(config.pfa_target, r.xi(k), config.L);
        r.pfa(k) = closed_form_pfa(r.theta_star(k), r.xi(k), config.L);
        r.pd(k) = closed_form_pd(r.theta_star(k), r.xi(k), config.L, stats.aps);
    }
    return r;
}

}  // namespace cfpla
