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

#include "cfpla/numerics.hpp"
#include "cfpla/scenario.hpp"

#include <cstdint>

namespace cfpla {

// Monte Carlo moments of the effective gains
//   a_kk  = sqrt(rho_k)  sum_m w_mk^H g_mk
//   a_kk' = sqrt(rho_k') sum_m w_mk^H g_mk'
//   a_ke  = sqrt(rho_e)  sum_m w_mk^H g_me
// and of the per-symbol combined-noise variance sum_m ||w_mk||^2, over
// independent channel / estimate / combiner draws for one large-scale profile.
struct EffectiveGainStats {
    int aps = 0;
    arma::vec rho;            // K, normalised user powers
    ComplexVector mean_akk;   // K
    arma::vec sigma2_kk;      // K, E|a_kk - E a_kk|^2
    arma::mat sigma2_kkp;     // K x K, diagonal unused (zero)
    arma::vec sigma2_ke;      // K
    arma::vec noise_trace;    // K
    arma::vec se_mean_akk;    // K, standard error of Re(mean_akk)
    arma::vec se_noise_trace; // K
    std::uint64_t trials = 0;
    std::uint64_t resampled = 0;

    arma::uword users() const { return rho.n_elem; }
};

inline constexpr int kMinVarianceTrials = 1000;

// Throws std::invalid_argument if config.variance_estimation_trials < 1000.
EffectiveGainStats estimate_gain_stats(const LargeScaleProfile& profile,
                                       const ScenarioConfig& config, RandomStream& stream);

// Per-user xi_k:
//   rho_s^2/(rho_k rho_t^2) (sigma_kk^2 + S_k)
//   + (1/rho_k + rho_s^2/(rho_k rho_t^2)) (sum_{k'!=k} sigma_kk'^2 + sigma_ke^2)
//   + noise_trace_k / (rho_k rho_t^2)
// with S_k = (sqrt(rho_k) M - 1)^2 for SelfTermForm::Printed and
// rho_k (M - 1)^2 for SelfTermForm::Centered. StatisticVariance::RealPart halves
// the result, giving the per-symbol variance of the real-valued statistic.
arma::vec compute_xi(const EffectiveGainStats& stats, const ScenarioConfig& config);
arma::vec compute_xi(const EffectiveGainStats& stats, double rho_s, double rho_t,
                     SelfTermForm self_term, StatisticVariance statistic);

// Q(theta / sqrt(L xi))
double closed_form_pfa(double theta, double xi, int L);
// Q((theta - M L) / sqrt(L xi))
double closed_form_pd(double theta, double xi, int L, int M);
// Q^{-1}(pfa_target) sqrt(L xi)
double optimal_threshold(double pfa_target, double xi, int L);

struct ClosedFormResult {
    arma::vec xi;
    arma::vec theta_star;
    arma::vec pfa;
    arma::vec pd;
};

ClosedFormResult evaluate_closed_form(const EffectiveGainStats& stats, const ScenarioConfig& config);

}  // namespace cfpla
