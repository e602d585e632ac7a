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

#include <armadillo>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfpla {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShadowingScope { BeyondD1, Always };
enum class Constellation { Qpsk, Gaussian };
enum class SmallScaleFading { Rayleigh, None };
enum class SelfTermForm { Printed, Centered };
enum class StatisticVariance { Complex, RealPart };
enum class EveMode { Replace, Concurrent };
enum class SignalPath { Sufficient, PerAp };
enum class MessageRecovery { Perfect, Demodulate };

// Three-slope path-loss parameters (distances in meters, frequency in MHz).
struct ThreeSlopeParams {
    double d0 = 10.0;
    double d1 = 50.0;
    double carrier_mhz = 1900.0;
    double ap_height = 15.0;
    double user_height = 1.65;
};

struct ScenarioConfig {
    // network
    int M = 5;   // APs
    int N = 10;  // antennas per AP
    int K = 4;   // users
    int L = 256; // block length, symbols
    int tau_p = 20;

    // power split of message and tag
    double rho_s = 0.95;
    double rho_t = 0.31224989991991997;  // sqrt(1 - 0.95^2)

    // radio
    double transmit_power_user = 0.1;  // W
    double transmit_power_eve = 0.1;   // W
    double bandwidth = 20e6;           // Hz
    double noise_figure_db = 9.0;
    double shadow_sigma_db = 8.0;
    double area_side = 1000.0;         // m
    double min_distance = 1.0;         // m
    ThreeSlopeParams path_loss;
    ShadowingScope shadowing_scope = ShadowingScope::BeyondD1;

    // detection
    double pfa_target = 0.01;

    // Monte Carlo
    std::uint64_t seed = 1;
    int drops = 100;
    int trials_per_drop = 2000;
    int variance_estimation_trials = 10000;
    int workers = 1;

    // model switches
    bool eve_present = true;
    EveMode eve_mode = EveMode::Replace;
    Constellation constellation = Constellation::Qpsk;
    SmallScaleFading fading = SmallScaleFading::Rayleigh;
    bool perfect_csi = false;
    MessageRecovery recovery = MessageRecovery::Perfect;
    SelfTermForm self_term = SelfTermForm::Centered;
    StatisticVariance statistic = StatisticVariance::RealPart;
    SignalPath signal_path = SignalPath::Sufficient;
    double max_condition = kDefaultMaxCondition;
    double noise_scale = 1.0;  // multiplies the unit-variance receiver noise std

    // Sets rho_s and derives rho_t = sqrt(1 - rho_s^2).
    void set_power_split(double message_coefficient);

    // Throws ConfigError describing the first violated constraint.
    void validate() const;
};

// Config file I/O. Files are JSON objects whose keys are listed by
// config_keys(); unknown keys are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig config_from_json_text(const std::string& text, ScenarioConfig base = {});
std::string config_to_json_text(const ScenarioConfig& config);
void apply_override(ScenarioConfig& config, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct NetworkGeometry {
    std::vector<Point> aps;
    std::vector<Point> users;
    Point eve;
    double area_side = 0.0;
};

// beta(m, k) is the large-scale gain between AP m and user k (linear).
struct LargeScaleProfile {
    arma::mat beta;        // M x K
    arma::vec beta_eve;    // M
    arma::vec rho;         // K, normalised transmit powers
    double rho_eve = 0.0;
    double noise_power = 0.0;  // W

    arma::uword aps() const { return beta.n_rows; }
    arma::uword users() const { return beta.n_cols; }
};

inline constexpr double kBoltzmann = 1.381e-23;  // J/K
inline constexpr double kNoiseTemperature = 290.0;  // K

double noise_power(double bandwidth_hz, double noise_figure_db);

double wrap_distance(const Point& a, const Point& b, double area_side);

// Three-slope model: constant below d0, 20 dB/decade to d1, 35 dB/decade beyond.
double path_loss(double distance_m, const ThreeSlopeParams& params);
double path_loss_db(double distance_m, const ThreeSlopeParams& params);

NetworkGeometry generate_geometry(const ScenarioConfig& config, RandomStream& stream);

LargeScaleProfile large_scale_profile(const NetworkGeometry& geometry, const ScenarioConfig& config,
                                      RandomStream& stream);

// Uniform profile with every beta set to `beta` and normalised power `rho`.
LargeScaleProfile uniform_profile(int aps, int users, double beta, double rho, double beta_eve,
                                  double rho_eve);

}  // namespace cfpla
