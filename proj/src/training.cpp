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

#include "cfpla/training.hpp"

#include <cmath>

namespace cfpla {

PilotBook make_pilot_book(int tau_p, int K)
{
    if (K < 1 || tau_p < K)
        throw std::invalid_argument("make_pilot_book: need 1 <= K <= tau_p");
    PilotBook book;
    book.pilots = ComplexMatrix(tau_p, K, arma::fill::zeros);
    for (int k = 0; k < K; ++k)
        book.pilots(k, k) = 1.0;
    return book;
}

std::vector<ComplexMatrix> receive_pilots(const ChannelRealization& channels,
                                          const LargeScaleProfile& profile, const PilotBook& pilots,
                                          RandomStream& stream, double noise_scale)
{
    const double tau = static_cast<double>(pilots.length());
    const arma::vec amplitude = arma::sqrt(tau * profile.rho);

    std::vector<ComplexMatrix> out;
    out.reserve(channels.aps());
    for (arma::uword m = 0; m < channels.aps(); ++m) {
        const ComplexMatrix& g = channels.g[m];
        ComplexMatrix y = draw_complex_gaussian(stream, g.n_rows, pilots.length(),
                                                noise_scale * noise_scale);
        y += g * arma::diagmat(arma::conv_to<arma::cx_vec>::from(amplitude)) * pilots.pilots.t();
        out.push_back(std::move(y));
    }
    return out;
}

std::vector<ComplexMatrix> project_pilots(const std::vector<ComplexMatrix>& received,
                                          const PilotBook& pilots)
{
    std::vector<ComplexMatrix> out;
    out.reserve(received.size());
    for (const auto& y : received)
        out.push_back(y * pilots.pilots);
    return out;
}

std::vector<ComplexMatrix> draw_projected_pilots(const ChannelRealization& channels,
                                                 const LargeScaleProfile& profile, int tau_p,
                                                 RandomStream& stream, double noise_scale)
{
    const arma::vec amplitude = arma::sqrt(static_cast<double>(tau_p) * profile.rho);
    std::vector<ComplexMatrix> out;
    out.reserve(channels.aps());
    for (arma::uword m = 0; m < channels.aps(); ++m) {
        const ComplexMatrix& g = channels.g[m];
        ComplexMatrix y = draw_complex_gaussian(stream, g.n_rows, g.n_cols,
                                                noise_scale * noise_scale);
        for (arma::uword k = 0; k < g.n_cols; ++k)
            y.col(k) += amplitude(k) * g.col(k);
        out.push_back(std::move(y));
    }
    return out;
}

ChannelEstimates mmse_estimate(const std::vector<ComplexMatrix>& projected,
                               const LargeScaleProfile& profile, int tau_p)
{
    const arma::uword M = profile.aps();
    const arma::uword K = profile.users();
    if (projected.size() != M)
        throw std::invalid_argument("mmse_estimate: one projection matrix per AP required");
    const double tau = static_cast<double>(tau_p);

    ChannelEstimates est;
    est.gamma.set_size(M, K);
    est.error_var.set_size(M, K);
    est.g_hat.reserve(M);
    for (arma::uword m = 0; m < M; ++m) {
        if (projected[m].n_cols != K)
            throw std::invalid_argument("mmse_estimate: projection has wrong user count");
        ComplexMatrix g_hat = projected[m];
        for (arma::uword k = 0; k < K; ++k) {
            const double beta = profile.beta(m, k);
            const double snr = tau * profile.rho(k) * beta;
            const double c = std::sqrt(tau * profile.rho(k)) * beta / (snr + 1.0);
            g_hat.col(k) *= c;
            est.gamma(m, k) = snr * beta / (snr + 1.0);
            est.error_var(m, k) = beta / (snr + 1.0);
        }
        est.g_hat.push_back(std::move(g_hat));
    }
    return est;
}

ChannelEstimates perfect_estimates(const ChannelRealization& channels,
                                   const LargeScaleProfile& profile)
{
    ChannelEstimates est;
    est.g_hat = channels.g;
    est.gamma = profile.beta;
    est.error_var = arma::mat(profile.beta.n_rows, profile.beta.n_cols, arma::fill::zeros);
    return est;
}

}  // namespace cfpla
