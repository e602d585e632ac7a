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

#include "cfpla/authtag.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace cfpla {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

using Digest = std::array<std::uint8_t, 32>;

Digest hmac_sha256(const SecretKey& key, const std::vector<std::uint8_t>& data)
{
    Digest out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.bytes.data(), static_cast<int>(key.bytes.size()), data.data(),
             data.size(), out.data(), &len) == nullptr ||
        len != out.size())
        throw std::runtime_error("generate_tag: HMAC-SHA256 failed");
    return out;
}

void append_u32(std::vector<std::uint8_t>& buf, std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        buf.push_back(static_cast<std::uint8_t>(v >> shift));
}

void append_f64(std::vector<std::uint8_t>& buf, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int shift = 0; shift < 64; shift += 8)
        buf.push_back(static_cast<std::uint8_t>(bits >> shift));
}

Complex qpsk_point(unsigned b0, unsigned b1)
{
    return {(b0 ? -1.0 : 1.0) * kInvSqrt2, (b1 ? -1.0 : 1.0) * kInvSqrt2};
}

}  // namespace

std::vector<SecretKey> generate_keys(int K, RandomStream& stream)
{
    if (K < 1)
        throw std::invalid_argument("generate_keys: K must be at least 1");
    auto draw = [&](std::size_t id) {
        SecretKey key;
        key.key_id = id;
        for (std::size_t i = 0; i < key.bytes.size(); i += 8) {
            const std::uint64_t word = stream.next_u64();
            for (std::size_t b = 0; b < 8; ++b)
                key.bytes[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
        }
        return key;
    };

    std::vector<SecretKey> keys;
    keys.reserve(K + 1);
    for (int k = 0; k <= K; ++k)
        keys.push_back(draw(static_cast<std::size_t>(k)));

    auto clashes = [&](const SecretKey& eve) {
        for (int k = 0; k < K; ++k)
            if (keys[k].bytes == eve.bytes)
                return true;
        return false;
    };
    while (clashes(keys[K]))
        keys[K] = draw(static_cast<std::size_t>(K));
    return keys;
}

MessageBlock generate_message(int L, RandomStream& stream, Constellation constellation)
{
    if (L < 1)
        throw std::invalid_argument("generate_message: L must be at least 1");
    MessageBlock msg;
    msg.symbols.set_size(L);
    if (constellation == Constellation::Gaussian) {
        for (auto& s : msg.symbols)
            s = stream.complex_normal(1.0);
        return msg;
    }
    std::uint64_t word = 0;
    for (int i = 0; i < L; ++i) {
        if (i % 32 == 0)
            word = stream.next_u64();
        const unsigned pair = static_cast<unsigned>(word >> (2 * (i % 32))) & 3U;
        msg.symbols(i) = qpsk_point(pair & 1U, pair >> 1);
    }
    return msg;
}

TagBlock generate_tag(const MessageBlock& message, const SecretKey& key)
{
    const arma::uword L = message.symbols.n_elem;

    std::vector<std::uint8_t> serial;
    serial.reserve(16 * L + 16);
    for (char c : std::string_view("cfpla-tag/v1"))
        serial.push_back(static_cast<std::uint8_t>(c));
    append_u32(serial, static_cast<std::uint32_t>(L));
    for (const auto& s : message.symbols) {
        append_f64(serial, s.real());
        append_f64(serial, s.imag());
    }
    const Digest seed = hmac_sha256(key, serial);

    TagBlock tag;
    tag.source_key_id = key.key_id;
    tag.symbols.set_size(L);

    std::vector<std::uint8_t> block(seed.begin(), seed.end());
    block.resize(seed.size() + 4);
    constexpr arma::uword kSymbolsPerDigest = 32 * 8 / 2;
    Digest stream{};
    for (arma::uword i = 0; i < L; ++i) {
        const arma::uword within = i % kSymbolsPerDigest;
        if (within == 0) {
            const auto counter = static_cast<std::uint32_t>(i / kSymbolsPerDigest);
            block.resize(seed.size());
            append_u32(block, counter);
            stream = hmac_sha256(key, block);
        }
        const std::uint8_t byte = stream[within / 4];
        const unsigned shift = 6 - 2 * (within % 4);
        const unsigned pair = (byte >> shift) & 3U;
        tag.symbols(i) = qpsk_point(pair >> 1, pair & 1U);
    }
    return tag;
}

TaggedSignal build_tagged_signal(const MessageBlock& message, const TagBlock& tag, double rho_s,
                                 double rho_t)
{
    const bool untagged = rho_s == 1.0 && rho_t == 0.0;
    if (!untagged && (std::abs(rho_s * rho_s + rho_t * rho_t - 1.0) > 1e-12 || rho_t < 0.0 ||
                      rho_s < 0.0))
        throw std::invalid_argument("build_tagged_signal: power split must satisfy "
                                    "rho_s^2 + rho_t^2 = 1");
    if (message.symbols.n_elem != tag.symbols.n_elem)
        throw std::invalid_argument("build_tagged_signal: message and tag lengths differ");
    TaggedSignal x;
    x.rho_s = rho_s;
    x.rho_t = rho_t;
    x.symbols = rho_s * message.symbols + rho_t * tag.symbols;
    return x;
}

TaggedSignal untagged_signal(const MessageBlock& message)
{
    return TaggedSignal{message.symbols, 1.0, 0.0};
}

SpoofedBlock build_eve_signal(int L, const SecretKey& eve_key, double rho_s, double rho_t,
                              RandomStream& stream, Constellation constellation)
{
    SpoofedBlock b;
    b.message = generate_message(L, stream, constellation);
    b.tag = generate_tag(b.message, eve_key);
    b.signal = build_tagged_signal(b.message, b.tag, rho_s, rho_t);
    return b;
}

ComplexVector qpsk_decide(const ComplexVector& samples)
{
    ComplexVector out(samples.n_elem);
    for (arma::uword i = 0; i < samples.n_elem; ++i)
        out(i) = qpsk_point(samples(i).real() < 0.0, samples(i).imag() < 0.0);
    return out;
}

}  // namespace cfpla
