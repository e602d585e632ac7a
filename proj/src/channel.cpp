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

#include "cfpla/channel.hpp"

#include <cmath>

namespace cfpla {

ChannelRealization draw_channels(const LargeScaleProfile& profile, int N, RandomStream& stream,
                                 SmallScaleFading fading)
{
    if (N < 1)
        throw std::invalid_argument("draw_channels: N must be at least 1");
    const arma::uword M = profile.aps();
    const arma::uword K = profile.users();
    const auto n = static_cast<arma::uword>(N);

    auto small_scale = [&](arma::uword rows, arma::uword cols) -> ComplexMatrix {
        if (fading == SmallScaleFading::None)
            return ComplexMatrix(rows, cols, arma::fill::ones);
        return draw_complex_gaussian(stream, rows, cols, 1.0);
    };

    ChannelRealization out;
    out.g.reserve(M);
    out.g_eve.reserve(M);
    for (arma::uword m = 0; m < M; ++m) {
        ComplexMatrix h = small_scale(n, K);
        for (arma::uword k = 0; k < K; ++k)
            h.col(k) *= std::sqrt(profile.beta(m, k));
        out.g.push_back(std::move(h));
    }
    for (arma::uword m = 0; m < M; ++m) {
        ComplexVector h = small_scale(n, 1);
        out.g_eve.push_back(std::sqrt(profile.beta_eve(m)) * h);
    }
    return out;
}

}  // namespace cfpla
