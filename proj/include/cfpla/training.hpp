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

#include "cfpla/channel.hpp"
#include "cfpla/numerics.hpp"
#include "cfpla/scenario.hpp"

#include <vector>

namespace cfpla {

// tau_p x K matrix whose columns are mutually orthonormal pilot sequences.
struct PilotBook {
    ComplexMatrix pilots;

    arma::uword length() const { return pilots.n_rows; }
    arma::uword users() const { return pilots.n_cols; }
};

// First K standard basis vectors of C^tau_p.
PilotBook make_pilot_book(int tau_p, int K);

// Per-AP N x tau_p pilot observation
//   Y_m = sum_k sqrt(tau_p rho_k) g_mk phi_k^H + Omega_m,  Omega_m ~ CN(0, noise_scale^2).
// The sqrt(tau_p rho_k) amplitude makes Y_m phi_k = sqrt(tau_p rho_k) g_mk + Omega_m phi_k.
std::vector<ComplexMatrix> receive_pilots(const ChannelRealization& channels,
                                          const LargeScaleProfile& profile, const PilotBook& pilots,
                                          RandomStream& stream, double noise_scale = 1.0);

// Ytilde_m = Y_m Phi; column k is the projection onto phi_k.
std::vector<ComplexMatrix> project_pilots(const std::vector<ComplexMatrix>& received,
                                          const PilotBook& pilots);

// Same distribution as project_pilots(receive_pilots(...)) without forming Y_m:
// projecting i.i.d. noise onto orthonormal pilots leaves i.i.d. CN(0, 1) noise.
std::vector<ComplexMatrix> draw_projected_pilots(const ChannelRealization& channels,
                                                 const LargeScaleProfile& profile, int tau_p,
                                                 RandomStream& stream, double noise_scale = 1.0);

struct ChannelEstimates {
    std::vector<ComplexMatrix> g_hat;  // per AP, N x K
    arma::mat gamma;                   // M x K, per-element variance of g_hat
    arma::mat error_var;               // M x K, per-element variance of g - g_hat

    arma::uword aps() const { return g_hat.size(); }
};

// Linear MMSE: g_hat_mk = sqrt(tau_p rho_k) beta_mk / (tau_p rho_k beta_mk + 1) * ytilde_mk.
ChannelEstimates mmse_estimate(const std::vector<ComplexMatrix>& projected,
                               const LargeScaleProfile& profile, int tau_p);

// Genie estimates equal to the true channels (zero error variance).
ChannelEstimates perfect_estimates(const ChannelRealization& channels,
                                   const LargeScaleProfile& profile);

}  // namespace cfpla
