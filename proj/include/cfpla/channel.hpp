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

#include <vector>

namespace cfpla {

// Small-scale channels of one coherence block. g[m] is N x K with column k the
// channel from user k to AP m; g_eve[m] is Eve's N-vector to AP m.
struct ChannelRealization {
    std::vector<ComplexMatrix> g;
    std::vector<ComplexVector> g_eve;

    arma::uword aps() const { return g.size(); }
    arma::uword antennas() const { return g.empty() ? 0 : g.front().n_rows; }
    arma::uword users() const { return g.empty() ? 0 : g.front().n_cols; }
};

// g_mk = sqrt(beta_mk) h_mk with h_mk ~ CN(0, I_N); Eve's links likewise.
// With SmallScaleFading::None every h entry is 1.
ChannelRealization draw_channels(const LargeScaleProfile& profile, int N, RandomStream& stream,
                                 SmallScaleFading fading = SmallScaleFading::Rayleigh);

}  // namespace cfpla
