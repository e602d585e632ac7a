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

#include "doctest.h"

#include "cfpla/receiver.hpp"

#include <cmath>

using namespace cfpla;

namespace {

std::vector<TaggedSignal> tagged_block(int K, int L, RandomStream& s, std::vector<MessageBlock>* msgs = nullptr,
                                       std::vector<TagBlock>* tags = nullptr)
{
    const auto keys = generate_keys(K, s);
    const double rt = std::sqrt(1 - 0.95 * 0.95);
    std::vector<TaggedSignal> out;
    for (int k = 0; k < K; ++k) {
        const auto m = generate_message(L, s);
        const auto t = generate_tag(m, keys[static_cast<std::size_t>(k)]);
        out.push_back(build_tagged_signal(m, t, 0.95, rt));
        if (msgs)
            msgs->push_back(m);
        if (tags)
            tags->push_back(t);
    }
    return out;
}

}  // namespace

TEST_CASE("zero-forcing identity")
{
    RandomStream s(1);
    ChannelEstimates est;
    est.g_hat.push_back(draw_complex_gaussian(s, 10, 4, 1.0));
    const auto bank = zf_combiners(est);
    CHECK(arma::abs(bank.w[0].t() * est.g_hat[0] - arma::eye<ComplexMatrix>(4, 4)).max() < 1e-8);

    ChannelEstimates orth;
    ComplexMatrix g(6, 2, arma::fill::zeros);
    g(0, 0) = Complex(2.0, 1.0);
    g(3, 1) = 0.5;
    orth.g_hat.push_back(g);
    const auto w = zf_combiners(orth).w[0];
    CHECK(arma::abs(w.col(0) - g.col(0) / std::norm(g(0, 0))).max() < 1e-15);
    CHECK(arma::abs(w.col(1) - g.col(1) / 0.25).max() < 1e-15);

    ChannelEstimates wide;
    wide.g_hat.push_back(draw_complex_gaussian(s, 2, 3, 1.0));
    CHECK_THROWS_AS(zf_combiners(wide), std::invalid_argument);
    ChannelEstimates rank_deficient;
    rank_deficient.g_hat.push_back(ComplexMatrix(4, 2, arma::fill::ones));
    CHECK_THROWS_AS(zf_combiners(rank_deficient), IllConditionedError);
}

TEST_CASE("receive_data noiseless single link")
{
    const auto p = uniform_profile(1, 1, 2.0, 3.0, 0.0, 0.0);
    RandomStream s(2);
    const auto ch = draw_channels(p, 1, s);
    const auto x = tagged_block(1, 16, s);
    const auto y = receive_data(ch, p, x, nullptr, s, 0.0);
    const ComplexMatrix expected = std::sqrt(3.0) * ch.g[0] * x[0].symbols.t();
    CHECK(arma::abs(y[0] - expected).max() < 1e-14);

    // rho_e = 0: Eve's transmission leaves no trace
    const auto eve = x[0];
    RandomStream a(3), b(3);
    const auto with_eve = receive_data(ch, p, x, &eve, a, 1.0);
    const auto without = receive_data(ch, p, x, nullptr, b, 1.0);
    CHECK(arma::abs(with_eve[0] - without[0]).max() == 0.0);
}

TEST_CASE("receive_data noise is unit variance")
{
    const auto p = uniform_profile(1, 1, 0.0, 1.0, 0.0, 0.0);
    RandomStream s(4);
    const auto ch = draw_channels(p, 1, s);
    std::vector<TaggedSignal> x{TaggedSignal{ComplexVector(1000, arma::fill::zeros), 1.0, 0.0}};
    RunningStats power;
    for (int t = 0; t < 100; ++t) {
        const auto y = receive_data(ch, p, x, nullptr, s);
        for (const auto& v : y[0])
            power.add(std::norm(v));
    }
    CHECK(std::abs(power.mean() - 1.0) < 0.01);
}

TEST_CASE("aggregate noiseless perfect CSI gives M sqrt(rho) x")
{
    const int M = 3, N = 5, K = 2, L = 32;
    const auto p = uniform_profile(M, K, 0.8, 2.0, 0.0, 0.0);
    RandomStream s(5);
    const auto ch = draw_channels(p, N, s);
    const auto bank = zf_combiners(perfect_estimates(ch, p));
    const auto x = tagged_block(K, L, s);
    const auto z = aggregate(receive_data(ch, p, x, nullptr, s, 0.0), bank);
    for (int k = 0; k < K; ++k)
        CHECK(arma::abs(z.z(k) - M * std::sqrt(2.0) * x[static_cast<std::size_t>(k)].symbols).max() < 1e-10);

    // linearity over APs
    const std::vector<ComplexMatrix> y = receive_data(ch, p, x, nullptr, s, 1.0);
    CombinerBank first{{bank.w[0]}}, rest{{bank.w[1], bank.w[2]}};
    const auto whole = aggregate(y, bank);
    const ComplexMatrix part = aggregate({y[0]}, first).rows + aggregate({y[1], y[2]}, rest).rows;
    CHECK(arma::abs(whole.rows - part).max() < 1e-10);
}

TEST_CASE("effective gains reproduce the per-AP aggregation")
{
    const int M = 2, N = 4, K = 2, L = 8;
    const auto p = uniform_profile(M, K, 0.5, 3.0, 0.7, 2.0);
    RandomStream s(6);
    const auto ch = draw_channels(p, N, s);
    const auto est = mmse_estimate(draw_projected_pilots(ch, p, 4, s), p, 4);
    const auto bank = zf_combiners(est);
    const auto x = tagged_block(K, L, s);
    const auto eve = x[1];
    const auto eg = effective_gains(ch, p, bank);
    const auto z = aggregate(receive_data(ch, p, x, &eve, s, 0.0), bank);
    const auto zd = aggregate_direct(eg, x, &eve, s, 0.0);
    CHECK(arma::abs(z.rows - zd.rows).max() < 1e-10);
}

TEST_CASE("direct aggregation noise covariance")
{
    const int M = 2, N = 4, K = 2;
    const auto p = uniform_profile(M, K, 0.5, 3.0, 0.0, 0.0);
    RandomStream s(7);
    const auto ch = draw_channels(p, N, s);
    const auto bank = zf_combiners(perfect_estimates(ch, p));
    const auto eg = effective_gains(ch, p, bank);
    std::vector<TaggedSignal> silent(K, TaggedSignal{ComplexVector(200000, arma::fill::zeros), 1.0, 0.0});
    const auto z = aggregate_direct(eg, silent, nullptr, s);
    const ComplexMatrix sample = z.rows * z.rows.t() / 200000.0;
    CHECK(arma::abs(sample - eg.noise_cov).max() / std::abs(eg.noise_cov(0, 0)) < 0.02);
}

TEST_CASE("effective gain mean is M")
{
    ScenarioConfig c;
    c.M = 5;
    c.N = 10;
    c.K = 4;
    const auto p = uniform_profile(5, 4, 1.0, 0.5, 0.0, 0.0);
    RunningStats g;
    const RandomStream root(8);
    for (int t = 0; t < 10000; ++t) {
        const auto b = prepare_block(p, c, root.child(t));
        const auto eg = effective_gains(b.channels, p, b.combiners);
        g.add(eg.a(1, 1).real() / std::sqrt(0.5));
    }
    CHECK(std::abs(g.mean() / 5.0 - 1.0) < 0.01);
}

TEST_CASE("residual, statistic and decision")
{
    RandomStream s(9);
    std::vector<MessageBlock> msgs;
    std::vector<TagBlock> tags;
    const auto x = tagged_block(1, 256, s, &msgs, &tags);
    const double rho = 7.0, rs = 0.95, rt = std::sqrt(1 - 0.95 * 0.95);

    const ComplexVector r1 = residual(std::sqrt(rho) * x[0].symbols, msgs[0], rho, rs, rt);
    CHECK(arma::abs(r1 - tags[0].symbols).max() < 1e-12);

    const ComplexVector r0 = residual(std::sqrt(rho) * rs * msgs[0].symbols, msgs[0], rho, rs, rt);
    CHECK(arma::abs(r0).max() < 1e-12);

    CHECK(test_statistic(tags[0], tags[0].symbols) == doctest::Approx(256.0).epsilon(1e-14));
    ComplexVector orth = tags[0].symbols;
    orth(arma::span(0, 127)) *= Complex(0.0, 1.0);
    orth(arma::span(128, 255)) *= Complex(0.0, -1.0);
    CHECK(std::abs(test_statistic(tags[0], orth)) < 1e-12);

    CHECK(decide(5.0, 5.0) == Decision::Reject);
    CHECK(decide(1280.0, 640.0) == Decision::Accept);
    CHECK(decide(0.0, 1.0) == Decision::Reject);

    CHECK_THROWS_AS(residual(x[0].symbols, msgs[0], rho, rs, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(test_statistic(tags[0], ComplexVector(3)), std::invalid_argument);
}

TEST_CASE("ideal H1 statistic")
{
    // Noiseless, perfect CSI: z_k = M sqrt(rho) x_k, so the residual keeps
    // (M - 1) rho_s / rho_t s_k and lambda = M L + (M - 1) rho_s / rho_t Re{t^H s}.
    const int N = 6, K = 3, L = 128;
    const double rs = 0.95, rt = std::sqrt(1 - 0.95 * 0.95);
    for (int M : {1, 4}) {
        const auto p = uniform_profile(M, K, 0.3, 2.0, 0.0, 0.0);
        RandomStream s(10);
        const auto ch = draw_channels(p, N, s);
        const auto bank = zf_combiners(perfect_estimates(ch, p));
        RunningStats mean;
        for (int t = 0; t < 400; ++t) {
            std::vector<MessageBlock> msgs;
            std::vector<TagBlock> tags;
            const auto x = tagged_block(K, L, s, &msgs, &tags);
            const auto z = aggregate(receive_data(ch, p, x, nullptr, s, 0.0), bank);
            for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k) {
                const auto r = residual(z.z(k), msgs[k], 2.0, rs, rt);
                const double lambda = test_statistic(tags[k], r);
                const double leak = arma::cdot(tags[k].symbols, msgs[k].symbols).real();
                CHECK(lambda == doctest::Approx(M * L + (M - 1) * rs / rt * leak).epsilon(1e-10));
                if (M == 1)
                    CHECK(lambda == doctest::Approx(L).epsilon(1e-12));
                mean.add(lambda);
            }
        }
        CHECK(std::abs(mean.mean() / (M * L) - 1.0) < 0.01);
    }
}

TEST_CASE("message recovery")
{
    RandomStream s(11);
    std::vector<MessageBlock> msgs;
    const auto x = tagged_block(1, 64, s, &msgs);
    const auto truth = msgs[0];
    const ComplexVector z = std::sqrt(3.0) * 4.0 * x[0].symbols;
    CHECK(arma::abs(recover_message(z, MessageRecovery::Perfect, truth, 3.0, 4.0).symbols - truth.symbols).max() == 0.0);
    CHECK(arma::abs(recover_message(z, MessageRecovery::Demodulate, truth, 3.0, 4.0).symbols - truth.symbols).max() <
          1e-15);
}

TEST_CASE("demodulation errors fall as APs are added")
{
    auto ser = [](int M) {
        ScenarioConfig c;
        c.M = M;
        c.N = 4;
        c.K = 2;
        c.tau_p = 2;
        const auto p = uniform_profile(M, 2, 1.0, 0.05, 0.0, 0.0);
        const RandomStream root(12);
        double errors = 0.0, symbols = 0.0;
        for (int t = 0; t < 300; ++t) {
            const auto b = prepare_block(p, c, root.child(t));
            const auto eg = effective_gains(b.channels, p, b.combiners);
            RandomStream s = root.child(t).child(99);
            std::vector<MessageBlock> msgs;
            const auto x = tagged_block(2, 128, s, &msgs);
            const auto z = aggregate_direct(eg, x, nullptr, s);
            const auto hat = recover_message(z.z(0), MessageRecovery::Demodulate, msgs[0], 0.05, M);
            errors += static_cast<double>(arma::accu(arma::abs(hat.symbols - msgs[0].symbols) > 1e-9));
            symbols += 128.0;
        }
        return errors / symbols;
    };
    const double s4 = ser(4);
    const double s8 = ser(8);
    CHECK(s4 > 0.0);
    CHECK(s8 < s4);
}

TEST_CASE("prepare_block resamples ill-conditioned draws")
{
    ScenarioConfig c;
    c.M = 1;
    c.N = 2;
    c.K = 2;
    c.tau_p = 2;
    c.perfect_csi = true;
    c.max_condition = 1.5;  // rejects most draws
    const auto p = uniform_profile(1, 2, 1.0, 1.0, 0.0, 0.0);
    int resampled = 0;
    for (int t = 0; t < 50; ++t)
        resampled += prepare_block(p, c, RandomStream(3).child(t)).resampled;
    CHECK(resampled > 0);

    c.max_condition = 1.0 + 1e-15;
    CHECK_THROWS_AS(prepare_block(p, c, RandomStream(3)), IllConditionedError);
}
