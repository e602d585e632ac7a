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

#include "json.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cfpla {

namespace {

using json = nlohmann::json;

struct KeySpec {
    std::function<void(ScenarioConfig&, const json&)> set;
    std::function<json(const ScenarioConfig&)> get;
};

template <typename E>
struct EnumNames {
    std::vector<std::pair<E, const char*>> names;

    E parse(const std::string& key, const json& v) const
    {
        const auto s = v.get<std::string>();
        for (const auto& [e, n] : names)
            if (s == n)
                return e;
        std::string allowed;
        for (const auto& [e, n] : names)
            allowed += std::string(allowed.empty() ? "" : "|") + n;
        throw ConfigError("config key '" + key + "': unknown value '" + s + "' (expected " +
                          allowed + ")");
    }
    const char* name(E e) const
    {
        for (const auto& [v, n] : names)
            if (v == e)
                return n;
        return "?";
    }
};

const EnumNames<ShadowingScope> kScope{{{ShadowingScope::BeyondD1, "beyond_d1"},
                                        {ShadowingScope::Always, "always"}}};
const EnumNames<Constellation> kConstellation{{{Constellation::Qpsk, "qpsk"},
                                               {Constellation::Gaussian, "gaussian"}}};
const EnumNames<SmallScaleFading> kFading{{{SmallScaleFading::Rayleigh, "rayleigh"},
                                           {SmallScaleFading::None, "none"}}};
const EnumNames<SelfTermForm> kSelfTerm{{{SelfTermForm::Printed, "printed"},
                                         {SelfTermForm::Centered, "centered"}}};
const EnumNames<StatisticVariance> kStatistic{{{StatisticVariance::Complex, "complex"},
                                               {StatisticVariance::RealPart, "real_part"}}};
const EnumNames<EveMode> kEveMode{{{EveMode::Replace, "replace"}, {EveMode::Concurrent, "concurrent"}}};
const EnumNames<SignalPath> kSignalPath{{{SignalPath::Sufficient, "sufficient"},
                                         {SignalPath::PerAp, "per_ap"}}};
const EnumNames<MessageRecovery> kRecovery{{{MessageRecovery::Perfect, "perfect"},
                                            {MessageRecovery::Demodulate, "demodulate"}}};

template <typename T>
KeySpec field(T ScenarioConfig::*member)
{
    return {[member](ScenarioConfig& c, const json& v) { c.*member = v.get<T>(); },
            [member](const ScenarioConfig& c) { return json(c.*member); }};
}

template <typename T>
KeySpec path_loss_field(T ThreeSlopeParams::*member)
{
    return {[member](ScenarioConfig& c, const json& v) { c.path_loss.*member = v.get<T>(); },
            [member](const ScenarioConfig& c) { return json(c.path_loss.*member); }};
}

template <typename E>
KeySpec enum_field(const char* key, E ScenarioConfig::*member, const EnumNames<E>& names)
{
    return {[=, &names](ScenarioConfig& c, const json& v) { c.*member = names.parse(key, v); },
            [=, &names](const ScenarioConfig& c) { return json(names.name(c.*member)); }};
}

const std::map<std::string, KeySpec>& key_table()
{
    static const std::map<std::string, KeySpec> table = {
        {"M", field(&ScenarioConfig::M)},
        {"N", field(&ScenarioConfig::N)},
        {"K", field(&ScenarioConfig::K)},
        {"L", field(&ScenarioConfig::L)},
        {"tau_p", field(&ScenarioConfig::tau_p)},
        {"rho_s",
         {[](ScenarioConfig& c, const json& v) { c.set_power_split(v.get<double>()); },
          [](const ScenarioConfig& c) { return json(c.rho_s); }}},
        {"rho_t", field(&ScenarioConfig::rho_t)},
        {"transmit_power_user", field(&ScenarioConfig::transmit_power_user)},
        {"transmit_power_eve", field(&ScenarioConfig::transmit_power_eve)},
        {"bandwidth", field(&ScenarioConfig::bandwidth)},
        {"noise_figure_db", field(&ScenarioConfig::noise_figure_db)},
        {"shadow_sigma_db", field(&ScenarioConfig::shadow_sigma_db)},
        {"area_side", field(&ScenarioConfig::area_side)},
        {"min_distance", field(&ScenarioConfig::min_distance)},
        {"pl_d0", path_loss_field(&ThreeSlopeParams::d0)},
        {"pl_d1", path_loss_field(&ThreeSlopeParams::d1)},
        {"carrier_mhz", path_loss_field(&ThreeSlopeParams::carrier_mhz)},
        {"ap_height", path_loss_field(&ThreeSlopeParams::ap_height)},
        {"user_height", path_loss_field(&ThreeSlopeParams::user_height)},
        {"shadowing_scope", enum_field("shadowing_scope", &ScenarioConfig::shadowing_scope, kScope)},
        {"pfa_target", field(&ScenarioConfig::pfa_target)},
        {"seed", field(&ScenarioConfig::seed)},
        {"drops", field(&ScenarioConfig::drops)},
        {"trials_per_drop", field(&ScenarioConfig::trials_per_drop)},
        {"variance_estimation_trials", field(&ScenarioConfig::variance_estimation_trials)},
        {"workers", field(&ScenarioConfig::workers)},
        {"eve_present", field(&ScenarioConfig::eve_present)},
        {"eve_mode", enum_field("eve_mode", &ScenarioConfig::eve_mode, kEveMode)},
        {"constellation",
         enum_field("constellation", &ScenarioConfig::constellation, kConstellation)},
        {"fading", enum_field("fading", &ScenarioConfig::fading, kFading)},
        {"perfect_csi", field(&ScenarioConfig::perfect_csi)},
        {"message_recovery", enum_field("message_recovery", &ScenarioConfig::recovery, kRecovery)},
        {"self_term", enum_field("self_term", &ScenarioConfig::self_term, kSelfTerm)},
        {"statistic", enum_field("statistic", &ScenarioConfig::statistic, kStatistic)},
        {"signal_path", enum_field("signal_path", &ScenarioConfig::signal_path, kSignalPath)},
        {"max_condition", field(&ScenarioConfig::max_condition)},
        {"noise_scale", field(&ScenarioConfig::noise_scale)},
    };
    return table;
}

void apply_json_value(ScenarioConfig& config, const std::string& key, const json& value)
{
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end())
        throw ConfigError("unknown config key '" + key + "'");
    try {
        it->second.set(config, value);
    } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

}  // namespace

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& [k, spec] : key_table())
        keys.push_back(k);
    return keys;
}

ScenarioConfig config_from_json_text(const std::string& text, ScenarioConfig base)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    // rho_s derives rho_t, so an explicit rho_t has to be applied after it
    if (doc.contains("rho_s"))
        apply_json_value(base, "rho_s", doc["rho_s"]);
    for (const auto& [key, value] : doc.items()) {
        if (key != "rho_s")
            apply_json_value(base, key, value);
    }
    return base;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json_text(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_to_json_text(const ScenarioConfig& config)
{
    json doc = json::object();
    for (const auto& [key, spec] : key_table())
        doc[key] = spec.get(config);
    return doc.dump(2);
}

void apply_override(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare words such as `printed` are strings
    }
    apply_json_value(config, key, parsed);
}

}  // namespace cfpla
