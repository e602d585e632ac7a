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

#include "cfpla/authtag.hpp"
#include "cfpla/channel.hpp"
#include "cfpla/numerics.hpp"
#include "cfpla/scenario.hpp"
#include "cfpla/training.hpp"

#include <cstddef>
#include <vector>

namespace cfpla {

// Local zero-forcing combiners, W_m = G_hat_m (G_hat_m^H G_hat_m)^{-1}.
struct CombinerBank {
    std::vector<ComplexMatrix> w;  // per AP, N x K

    arma::uword aps() const { return w.size(); }
};

// Throws IllConditionedError if any AP's Gram matrix exceeds max_condition.
CombinerBank zf_combiners(const ChannelEstimates& estimates,
                          double max_condition = kDefaultMaxCondition);

// Per-AP N x L data observation
//   Ybar_m = sum_k sqrt(rho_k) g_mk x_k^H + sqrt(rho_e) g_me x_e^H + Omega_m.
// `eve` may be null when Eve does not transmit.
std::vector<ComplexMatrix> receive_data(const ChannelRealization& channels,
                                        const LargeScaleProfile& profile,
                                        const std::vector<TaggedSignal>& signals,
                                        const TaggedSignal* eve, RandomStream& stream,
                                        double noise_scale = 1.0);

// Z_c^H = sum_m W_m^H Ybar_m, stored as a K x L matrix. z(k) is the L-vector
// z_{c,k} (the Hermitian of row k).
struct AggregatedSignal {
    ComplexMatrix rows;

    ComplexVector z(arma::uword k) const { return rows.row(k).t(); }
    arma::uword users() const { return rows.n_rows; }
};

AggregatedSignal aggregate(const std::vector<ComplexMatrix>& received,
                           const CombinerBank& combiners);

// Effective gains seen by the CPU after combining:
//   a(k, k') = sqrt(rho_k') sum_m w_mk^H g_mk'
//   a_eve(k) = sqrt(rho_e)  sum_m w_mk^H g_me
//   noise_cov = sum_m W_m^H W_m   (per-symbol covariance of the combined noise)
struct EffectiveGains {
    ComplexMatrix a;
    ComplexVector a_eve;
    ComplexMatrix noise_cov;
};

EffectiveGains effective_gains(const ChannelRealization& channels, const LargeScaleProfile& profile,
                               const CombinerBank& combiners);

// Draws Z_c^H directly from the effective gains. The combined noise
// sum_m W_m^H Omega_m has i.i.d. CN(0, noise_cov) columns, so this matches
// aggregate(receive_data(...)) in distribution at O(K L) noise cost.
AggregatedSignal aggregate_direct(const EffectiveGains& gains,
                                  const std::vector<TaggedSignal>& signals,
                                  const TaggedSignal* eve, RandomStream& stream,
                                  double noise_scale = 1.0);

// r_k = (z_k / sqrt(rho_k) - rho_s s_hat) / rho_t
ComplexVector residual(const ComplexVector& z_k, const MessageBlock& s_hat, double rho_k,
                       double rho_s, double rho_t);

// lambda = Re{ t~^H r }
double test_statistic(const TagBlock& expected_tag, const ComplexVector& r);

enum class Decision { Reject, Accept };

// Accept iff lambda > theta.
Decision decide(double lambda, double theta);

enum class Hypothesis { H0, H1, Eve };

struct TrialOutcome {
    std::size_t user = 0;
    double lambda = 0.0;
    double theta = 0.0;
    Decision decision = Decision::Reject;
    Hypothesis truth = Hypothesis::H0;
};

// Perfect mode returns `truth`. Demodulate mode slices z_k / (sqrt(rho_k) gain)
// to the nearest QPSK point; `gain` is the CPU's estimate of a_kk / sqrt(rho_k).
MessageBlock recover_message(const ComplexVector& z_k, MessageRecovery mode,
                             const MessageBlock& truth, double rho_k, double gain);

}  // namespace cfpla

namespace cfpla {

// Channels, estimates and combiners of one coherence block. Training and data
// share the block.
struct BlockState {
    ChannelRealization channels;
    ChannelEstimates estimates;
    CombinerBank combiners;
    int resampled = 0;  // ill-conditioned draws discarded before this one
};

// Draws a block from `stream`, resampling from child attempt streams while the
// ZF Gram matrix is ill-conditioned. Throws IllConditionedError after 100 tries.
BlockState prepare_block(const LargeScaleProfile& profile, const ScenarioConfig& config,
                         const RandomStream& stream);

}  // namespace cfpla
