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

#include "cfpla/analysis.hpp"

#include <cmath>

using namespace cfpla;

namespace {

EffectiveGainStats zero_stats(int M, int K, double rho)
{
    EffectiveGainStats s;
    s.aps = M;
    s.rho = arma::vec(K, arma::fill::value(rho));
    s.mean_akk = ComplexVector(K, arma::fill::value(Complex(M * std::sqrt(rho), 0.0)));
    s.sigma2_kk = arma::vec(K, arma::fill::zeros);
    s.sigma2_kkp = arma::mat(K, K, arma::fill::zeros);
    s.sigma2_ke = arma::vec(K, arma::fill::zeros);
    s.noise_trace = arma::vec(K, arma::fill::zeros);
    return s;
}

}  // namespace

TEST_CASE("closed-form PFA")
{
    CHECK(closed_form_pfa(0.0, 3.0, 64) == doctest::Approx(0.5));
    CHECK(std::abs(closed_form_pfa(2.3263 * std::sqrt(256.0 * 5.0), 5.0, 256) - 0.01) < 1e-4);
    CHECK(closed_form_pfa(10.0, 1.0, 16) < closed_form_pfa(9.0, 1.0, 16));
    CHECK_THROWS_AS(closed_form_pfa(1.0, 0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_pfa(1.0, -1.0, 16), std::invalid_argument);
}

TEST_CASE("closed-form PD")
{
    CHECK(closed_form_pd(5.0 * 256, 40.0, 256, 5) == doctest::Approx(0.5));
    for (int M : {1, 3, 8})
        CHECK(closed_form_pd(0.0, 40.0, 256, M) > 0.5);
    CHECK_THROWS_AS(closed_form_pd(0.0, 0.0, 256, 1), std::invalid_argument);

    double prev = 0.0;
    for (int e = 6; e <= 14; ++e) {
        const int L = 1 << e;
        const double xi = 10.0 * std::pow(static_cast<double>(L), 0.25);  // grows slower than L
        const double pd = closed_form_pd(optimal_threshold(0.01, xi, L), xi, L, 1);
        CHECK(pd >= prev);
        prev = pd;
    }
    CHECK(prev > 0.999);
}

TEST_CASE("optimal threshold")
{
    CHECK(std::abs(optimal_threshold(0.5, 7.0, 100)) < 1e-10);
    CHECK(std::abs(optimal_threshold(0.01, 100.0, 256) - 372.2) < 0.2);
    for (double p : {1e-3, 1e-2, 0.1, 0.5})
        CHECK(std::abs(closed_form_pfa(optimal_threshold(p, 12.5, 128), 12.5, 128) - p) < 1e-9);
    CHECK_THROWS_AS(optimal_threshold(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(optimal_threshold(0.01, 0.0, 10), std::invalid_argument);
}

TEST_CASE("xi vanishes when every term vanishes")
{
    // sqrt(rho) M = 1 with M = 2
    const auto s = zero_stats(2, 1, 0.25);
    const auto xi = compute_xi(s, 0.95, std::sqrt(1 - 0.95 * 0.95), SelfTermForm::Printed,
                               StatisticVariance::Complex);
    CHECK(std::abs(xi(0)) < 1e-15);
    const auto c = zero_stats(1, 1, 1.0);
    CHECK(compute_xi(c, 0.95, std::sqrt(1 - 0.95 * 0.95), SelfTermForm::Centered,
                     StatisticVariance::Complex)(0) == 0.0);
}

TEST_CASE("xi is linear in the noise trace")
{
    auto s = zero_stats(5, 3, 2.0);
    s.sigma2_kk.fill(0.3);
    s.sigma2_kkp.fill(0.1);
    s.sigma2_kkp.diag().zeros();
    s.sigma2_ke.fill(0.05);
    s.noise_trace.fill(4.0);
    ScenarioConfig c;
    const auto xi1 = compute_xi(s, c.rho_s, c.rho_t, SelfTermForm::Printed, StatisticVariance::Complex);
    s.noise_trace.fill(8.0);
    const auto xi2 = compute_xi(s, c.rho_s, c.rho_t, SelfTermForm::Printed, StatisticVariance::Complex);
    CHECK(xi2(1) - xi1(1) == doctest::Approx(4.0 / (2.0 * c.rho_t * c.rho_t)).epsilon(1e-12));
}

TEST_CASE("xi term by term")
{
    auto s = zero_stats(3, 2, 4.0);
    s.sigma2_kk = {0.2, 0.0};
    s.sigma2_kkp = {{0.0, 0.7}, {0.0, 0.0}};
    s.sigma2_ke = {0.1, 0.0};
    s.noise_trace = {1.5, 0.0};
    const double rs = 0.9, rt = std::sqrt(1 - 0.81), rho = 4.0;
    const double a = rs * rs / (rho * rt * rt);

    const double printed_self = std::pow(std::sqrt(rho) * 3 - 1.0, 2);
    const double expected = a * (0.2 + printed_self) + (1.0 / rho + a) * (0.7 + 0.1) + 1.5 / (rho * rt * rt);
    const auto xi = compute_xi(s, rs, rt, SelfTermForm::Printed, StatisticVariance::Complex);
    CHECK(xi(0) == doctest::Approx(expected).epsilon(1e-14));

    const double centered_self = rho * 4.0;
    const double expected_c = a * (0.2 + centered_self) + (1.0 / rho + a) * 0.8 + 1.5 / (rho * rt * rt);
    const auto xc = compute_xi(s, rs, rt, SelfTermForm::Centered, StatisticVariance::RealPart);
    CHECK(xc(0) == doctest::Approx(0.5 * expected_c).epsilon(1e-14));
}

TEST_CASE("gain statistics with perfect CSI")
{
    ScenarioConfig c;
    c.M = 1;
    c.N = 4;
    c.K = 1;
    c.tau_p = 1;
    c.perfect_csi = true;
    c.variance_estimation_trials = 1000;
    const auto p1 = uniform_profile(1, 1, 1e-3, 50.0, 1e-3, 50.0);
    RandomStream s(1);
    const auto one = estimate_gain_stats(p1, c, s);
    CHECK(one.sigma2_kk(0) < 1e-20);
    CHECK(std::abs(one.mean_akk(0).real() / std::sqrt(50.0) - 1.0) < 1e-12);
    CHECK(one.sigma2_ke(0) > 0.0);

    c.M = 3;
    c.K = 3;
    c.N = 5;
    c.tau_p = 3;
    const auto p3 = uniform_profile(3, 3, 1e-2, 20.0, 0.0, 0.0);
    const auto three = estimate_gain_stats(p3, c, s);
    CHECK(arma::abs(three.sigma2_kkp).max() < 1e-20);
    CHECK(arma::abs(three.sigma2_kk).max() < 1e-20);
    CHECK(three.noise_trace(0) > 0.0);

    c.variance_estimation_trials = 999;
    CHECK_THROWS_AS(estimate_gain_stats(p3, c, s), std::invalid_argument);
}

TEST_CASE("gain statistics with MMSE estimates")
{
    ScenarioConfig c;
    c.variance_estimation_trials = 10000;
    const auto p = uniform_profile(5, 4, 1.0, 0.2, 1.0, 0.2);
    RandomStream s(2);
    const auto st = estimate_gain_stats(p, c, s);
    for (arma::uword k = 0; k < 4; ++k) {
        CHECK(std::abs(st.mean_akk(k).real() / std::sqrt(0.2) - 5.0) < 0.05);
        CHECK(st.sigma2_kk(k) > 0.0);
        CHECK(st.noise_trace(k) > 0.0);
    }
    CHECK(st.trials == 10000);
}

TEST_CASE("evaluate_closed_form hits the target PFA")
{
    auto s = zero_stats(5, 2, 3.0);
    s.sigma2_kk.fill(1.0);
    s.noise_trace.fill(2.0);
    ScenarioConfig c;
    c.M = 5;
    c.K = 2;
    c.pfa_target = 0.02;
    const auto r = evaluate_closed_form(s, c);
    for (arma::uword k = 0; k < 2; ++k) {
        CHECK(std::abs(r.pfa(k) - 0.02) < 1e-9);
        CHECK(r.pd(k) > 0.02);
        CHECK(r.theta_star(k) == doctest::Approx(q_inverse(0.02) * std::sqrt(c.L * r.xi(k))));
    }
}
