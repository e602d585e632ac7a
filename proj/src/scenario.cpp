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

#include "cfpla/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfpla {

namespace {

template <typename... Args>
[[noreturn]] void config_fail(Args&&... parts)
{
    std::ostringstream os;
    (os << ... << parts);
    throw ConfigError(os.str());
}

// Hata-COST231 intercept at 1 km (dB).
double hata_intercept_db(const ThreeSlopeParams& p)
{
    const double lf = std::log10(p.carrier_mhz);
    return 46.3 + 33.9 * lf - 13.82 * std::log10(p.ap_height) -
           (1.1 * lf - 0.7) * p.user_height + (1.56 * lf - 0.8);
}

}  // namespace

void ScenarioConfig::set_power_split(double message_coefficient)
{
    rho_s = message_coefficient;
    rho_t = std::sqrt(std::max(0.0, 1.0 - message_coefficient * message_coefficient));
}

void ScenarioConfig::validate() const
{
    if (M < 1 || N < 1 || K < 1 || L < 1 || tau_p < 1)
        config_fail("M, N, K, L and tau_p must all be at least 1");
    if (tau_p < K)
        config_fail("pilot length tau_p (", tau_p, ") must be at least K (", K, ")");
    if (N < K)
        config_fail("zero-forcing needs N >= K (N = ", N, ", K = ", K, ")");
    if (std::abs(rho_s * rho_s + rho_t * rho_t - 1.0) > 1e-12)
        config_fail("power split violates rho_s^2 + rho_t^2 = 1 (rho_s = ", rho_s,
                    ", rho_t = ", rho_t, ")");
    if (!(rho_t > 0.0) || !(rho_t < rho_s))
        config_fail("power split must satisfy 0 < rho_t < rho_s");
    if (!(transmit_power_user > 0.0) || !(transmit_power_eve >= 0.0))
        config_fail("transmit powers must be positive (user) and non-negative (eve)");
    if (!(bandwidth > 0.0))
        config_fail("bandwidth must be positive");
    if (!(area_side > 0.0))
        config_fail("area_side must be positive");
    if (!(shadow_sigma_db >= 0.0))
        config_fail("shadow_sigma_db must be non-negative");
    if (!(min_distance > 0.0))
        config_fail("min_distance must be positive");
    if (!(path_loss.d0 > 0.0) || !(path_loss.d1 > path_loss.d0))
        config_fail("path-loss breakpoints must satisfy 0 < d0 < d1");
    if (!(path_loss.carrier_mhz > 0.0) || !(path_loss.ap_height > 0.0) ||
        !(path_loss.user_height > 0.0))
        config_fail("carrier frequency and antenna heights must be positive");
    if (!(pfa_target > 0.0 && pfa_target < 1.0))
        config_fail("pfa_target must lie in (0, 1)");
    if (drops < 1 || trials_per_drop < 1 || variance_estimation_trials < 1)
        config_fail("drops, trials_per_drop and variance_estimation_trials must be positive");
    if (workers < 1)
        config_fail("workers must be at least 1");
    if (fading == SmallScaleFading::None && K != 1)
        config_fail("fading = none gives identical user channels and is only valid for K = 1");
    if (recovery == MessageRecovery::Demodulate && constellation != Constellation::Qpsk)
        config_fail("message_recovery = demodulate requires the qpsk constellation");
    if (!(max_condition > 1.0))
        config_fail("max_condition must exceed 1");
    if (!(noise_scale >= 0.0))
        config_fail("noise_scale must be non-negative");
}

double noise_power(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be positive");
    return bandwidth_hz * kBoltzmann * kNoiseTemperature * std::pow(10.0, noise_figure_db / 10.0);
}

double wrap_distance(const Point& a, const Point& b, double area_side)
{
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    dx = std::min(dx, area_side - dx);
    dy = std::min(dy, area_side - dy);
    return std::hypot(dx, dy);
}

double path_loss_db(double distance_m, const ThreeSlopeParams& p)
{
    if (!(distance_m >= 0.0))
        throw std::invalid_argument("path_loss: distance must be non-negative");
    const double intercept = hata_intercept_db(p);
    const double d_km = distance_m / 1000.0;
    const double d0_km = p.d0 / 1000.0;
    const double d1_km = p.d1 / 1000.0;
    if (d_km > d1_km)
        return -intercept - 35.0 * std::log10(d_km);
    if (d_km > d0_km)
        return -intercept - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
    return -intercept - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
}

double path_loss(double distance_m, const ThreeSlopeParams& p)
{
    return std::pow(10.0, path_loss_db(distance_m, p) / 10.0);
}

NetworkGeometry generate_geometry(const ScenarioConfig& config, RandomStream& stream)
{
    if (!(config.area_side > 0.0))
        throw std::invalid_argument("generate_geometry: area_side must be positive");
    const double side = config.area_side;
    auto draw = [&] { return Point{stream.uniform(0.0, side), stream.uniform(0.0, side)}; };

    NetworkGeometry g;
    g.area_side = side;
    g.aps.reserve(config.M);
    g.users.reserve(config.K);
    for (int m = 0; m < config.M; ++m)
        g.aps.push_back(draw());
    for (int k = 0; k < config.K; ++k)
        g.users.push_back(draw());
    g.eve = draw();
    return g;
}

LargeScaleProfile large_scale_profile(const NetworkGeometry& geometry, const ScenarioConfig& config,
                                      RandomStream& stream)
{
    const auto M = geometry.aps.size();
    const auto K = geometry.users.size();
    const double sigma = config.shadow_sigma_db;

    auto link_gain = [&](const Point& ap, const Point& node) {
        const double d = std::max(wrap_distance(ap, node, geometry.area_side), config.min_distance);
        // one normal per link, drawn even when unused, keeps the stream layout fixed
        const double z = stream.normal();
        const bool shadowed =
            config.shadowing_scope == ShadowingScope::Always || d > config.path_loss.d1;
        const double shadow_db = shadowed ? sigma * z : 0.0;
        return std::pow(10.0, (path_loss_db(d, config.path_loss) + shadow_db) / 10.0);
    };

    LargeScaleProfile p;
    p.beta.set_size(M, K);
    p.beta_eve.set_size(M);
    for (arma::uword m = 0; m < M; ++m)
        for (arma::uword k = 0; k < K; ++k)
            p.beta(m, k) = link_gain(geometry.aps[m], geometry.users[k]);
    for (arma::uword m = 0; m < M; ++m)
        p.beta_eve(m) = link_gain(geometry.aps[m], geometry.eve);

    p.noise_power = noise_power(config.bandwidth, config.noise_figure_db);
    p.rho = arma::vec(K, arma::fill::value(config.transmit_power_user / p.noise_power));
    p.rho_eve = config.eve_present ? config.transmit_power_eve / p.noise_power : 0.0;
    return p;
}

LargeScaleProfile uniform_profile(int aps, int users, double beta, double rho, double beta_eve,
                                  double rho_eve)
{
    LargeScaleProfile p;
    p.beta = arma::mat(aps, users, arma::fill::value(beta));
    p.beta_eve = arma::vec(aps, arma::fill::value(beta_eve));
    p.rho = arma::vec(users, arma::fill::value(rho));
    p.rho_eve = rho_eve;
    p.noise_power = 1.0;
    return p;
}

}  // namespace cfpla
