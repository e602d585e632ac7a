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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cfpla {

struct SecretKey {
    std::size_t key_id = 0;
    std::array<std::uint8_t, 32> bytes{};

    bool operator==(const SecretKey&) const = default;
};

struct MessageBlock {
    ComplexVector symbols;
};

struct TagBlock {
    ComplexVector symbols;  // unit-modulus QPSK
    std::size_t source_key_id = 0;
};

// x = rho_s s + rho_t t, symbol-wise.
struct TaggedSignal {
    ComplexVector symbols;
    double rho_s = 1.0;
    double rho_t = 0.0;
};

// Eve's impersonation block: her own message, a tag under her own key, and
// the superposition she transmits.
struct SpoofedBlock {
    MessageBlock message;
    TagBlock tag;
    TaggedSignal signal;
};

// K user keys followed by Eve's key at index K; Eve's key never equals a user key.
std::vector<SecretKey> generate_keys(int K, RandomStream& stream);

MessageBlock generate_message(int L, RandomStream& stream,
                              Constellation constellation = Constellation::Qpsk);

// Keyed PRF tag: HMAC-SHA256 over the serialised message, expanded in counter
// mode to 2L bits, each bit pair mapped to a unit-energy QPSK symbol.
TagBlock generate_tag(const MessageBlock& message, const SecretKey& key);

TaggedSignal build_tagged_signal(const MessageBlock& message, const TagBlock& tag, double rho_s,
                                 double rho_t);

// Message-only transmission (rho_s = 1, rho_t = 0).
TaggedSignal untagged_signal(const MessageBlock& message);

SpoofedBlock build_eve_signal(int L, const SecretKey& eve_key, double rho_s, double rho_t,
                              RandomStream& stream,
                              Constellation constellation = Constellation::Qpsk);

// Nearest QPSK point per symbol (quadrant decision).
ComplexVector qpsk_decide(const ComplexVector& samples);

}  // namespace cfpla
