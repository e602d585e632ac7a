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

#include "cfpla/receiver.hpp"
#include "cfpla/streams.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfpla {

namespace {

ComplexMatrix stack_signals(const std::vector<TaggedSignal>& signals)
{
    if (signals.empty())
        throw std::invalid_argument("at least one user signal is required");
    const arma::uword L = signals.front().symbols.n_elem;
    ComplexMatrix x(L, signals.size());
    for (arma::uword k = 0; k < signals.size(); ++k) {
        if (signals[k].symbols.n_elem != L)
            throw std::invalid_argument("user signals must share one block length");
        x.col(k) = signals[k].symbols;
    }
    return x;
}

ComplexVector sqrt_rho(const LargeScaleProfile& profile)
{
    return arma::conv_to<ComplexVector>::from(arma::sqrt(profile.rho));
}

}  // namespace

CombinerBank zf_combiners(const ChannelEstimates& estimates, double max_condition)
{
    CombinerBank bank;
    bank.w.reserve(estimates.aps());
    for (const auto& g_hat : estimates.g_hat) {
        if (g_hat.n_rows < g_hat.n_cols)
            throw std::invalid_argument("zf_combiners: zero-forcing needs N >= K");
        const ComplexMatrix gram = g_hat.t() * g_hat;
        bank.w.push_back(g_hat * hermitian_inverse(gram, max_condition));
    }
    return bank;
}

std::vector<ComplexMatrix> receive_data(const ChannelRealization& channels,
                                        const LargeScaleProfile& profile,
                                        const std::vector<TaggedSignal>& signals,
                                        const TaggedSignal* eve, RandomStream& stream,
                                        double noise_scale)
{
    if (signals.size() != channels.users())
        throw std::invalid_argument("receive_data: one signal per user required");
    const ComplexMatrix x = stack_signals(signals);
    const arma::uword L = x.n_rows;
    if (eve != nullptr && eve->symbols.n_elem != L)
        throw std::invalid_argument("receive_data: Eve's block length differs");

    const ComplexMatrix scaled_xh = arma::diagmat(sqrt_rho(profile)) * x.t();  // K x L
    const double eve_amp = std::sqrt(profile.rho_eve);

    std::vector<ComplexMatrix> out;
    out.reserve(channels.aps());
    for (arma::uword m = 0; m < channels.aps(); ++m) {
        ComplexMatrix y = draw_complex_gaussian(stream, channels.antennas(), L,
                                                noise_scale * noise_scale);
        y += channels.g[m] * scaled_xh;
        if (eve != nullptr)
            y += eve_amp * channels.g_eve[m] * eve->symbols.t();
        out.push_back(std::move(y));
    }
    return out;
}

AggregatedSignal aggregate(const std::vector<ComplexMatrix>& received,
                           const CombinerBank& combiners)
{
    if (received.size() != combiners.aps() || received.empty())
        throw std::invalid_argument("aggregate: one received matrix per AP required");
    AggregatedSignal out;
    out.rows = combiners.w[0].t() * received[0];
    for (arma::uword m = 1; m < received.size(); ++m)
        out.rows += combiners.w[m].t() * received[m];
    return out;
}

EffectiveGains effective_gains(const ChannelRealization& channels, const LargeScaleProfile& profile,
                               const CombinerBank& combiners)
{
    const arma::uword K = channels.users();
    EffectiveGains eg;
    eg.a = ComplexMatrix(K, K, arma::fill::zeros);
    eg.a_eve = ComplexVector(K, arma::fill::zeros);
    eg.noise_cov = ComplexMatrix(K, K, arma::fill::zeros);
    for (arma::uword m = 0; m < channels.aps(); ++m) {
        const ComplexMatrix wh = combiners.w[m].t();
        eg.a += wh * channels.g[m];
        eg.a_eve += wh * channels.g_eve[m];
        eg.noise_cov += wh * combiners.w[m];
    }
    eg.a = eg.a * arma::diagmat(sqrt_rho(profile));
    eg.a_eve *= std::sqrt(profile.rho_eve);
    return eg;
}

AggregatedSignal aggregate_direct(const EffectiveGains& gains,
                                  const std::vector<TaggedSignal>& signals,
                                  const TaggedSignal* eve, RandomStream& stream,
                                  double noise_scale)
{
    const ComplexMatrix x = stack_signals(signals);
    const arma::uword K = gains.a.n_rows;
    const arma::uword L = x.n_rows;

    ComplexMatrix cov = 0.5 * (gains.noise_cov + gains.noise_cov.t());
    ComplexMatrix r;
    if (!arma::chol(r, cov))
        throw IllConditionedError("aggregate_direct: combined-noise covariance is not positive "
                                  "definite",
                                  std::numeric_limits<double>::infinity());

    AggregatedSignal out;
    out.rows = gains.a * x.t();
    if (eve != nullptr)
        out.rows += gains.a_eve * eve->symbols.t();
    out.rows += r.t() * draw_complex_gaussian(stream, K, L, noise_scale * noise_scale);
    return out;
}

ComplexVector residual(const ComplexVector& z_k, const MessageBlock& s_hat, double rho_k,
                       double rho_s, double rho_t)
{
    if (!(rho_t > 0.0))
        throw std::invalid_argument("residual: rho_t must be positive");
    if (!(rho_k > 0.0))
        throw std::invalid_argument("residual: rho_k must be positive");
    if (z_k.n_elem != s_hat.symbols.n_elem)
        throw std::invalid_argument("residual: length mismatch");
    return (z_k / std::sqrt(rho_k) - rho_s * s_hat.symbols) / rho_t;
}

double test_statistic(const TagBlock& expected_tag, const ComplexVector& r)
{
    if (expected_tag.symbols.n_elem != r.n_elem)
        throw std::invalid_argument("test_statistic: length mismatch");
    return arma::cdot(expected_tag.symbols, r).real();
}

Decision decide(double lambda, double theta)
{
    return lambda > theta ? Decision::Accept : Decision::Reject;
}

MessageBlock recover_message(const ComplexVector& z_k, MessageRecovery mode,
                             const MessageBlock& truth, double rho_k, double gain)
{
    if (mode == MessageRecovery::Perfect)
        return truth;
    const double scale = std::sqrt(rho_k) * gain;
    if (!(scale > 0.0))
        throw std::invalid_argument("recover_message: gain estimate must be positive");
    return MessageBlock{qpsk_decide(z_k / scale)};
}

BlockState prepare_block(const LargeScaleProfile& profile, const ScenarioConfig& config,
                         const RandomStream& stream)
{
    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const RandomStream base = stream.child(streams::kAttempt).child(attempt);
        RandomStream channel_rng = base.child(streams::kChannel);
        BlockState block;
        block.channels = draw_channels(profile, config.N, channel_rng, config.fading);
        if (config.perfect_csi) {
            block.estimates = perfect_estimates(block.channels, profile);
        } else {
            RandomStream pilot_rng = base.child(streams::kPilotNoise);
            if (config.signal_path == SignalPath::PerAp) {
                const PilotBook book = make_pilot_book(config.tau_p, config.K);
                block.estimates = mmse_estimate(
                    project_pilots(receive_pilots(block.channels, profile, book, pilot_rng,
                                                  config.noise_scale),
                                   book),
                    profile, config.tau_p);
            } else {
                block.estimates = mmse_estimate(
                    draw_projected_pilots(block.channels, profile, config.tau_p, pilot_rng,
                                          config.noise_scale),
                    profile, config.tau_p);
            }
        }
        try {
            block.combiners = zf_combiners(block.estimates, config.max_condition);
        } catch (const IllConditionedError&) {
            continue;
        }
        block.resampled = attempt;
        return block;
    }
    throw IllConditionedError("prepare_block: no well-conditioned channel draw in 100 attempts",
                              std::numeric_limits<double>::infinity());
}

}  // namespace cfpla
