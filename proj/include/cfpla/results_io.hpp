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

#include "cfpla/experiments.hpp"
#include "cfpla/scenario.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace cfpla {

// Column order of every results CSV.
inline constexpr std::array<const char*, 14> kResultColumns = {
    "M",         "N",          "K",           "L",
    "rho_s",     "pfa_target", "drop",        "seed",
    "pd_closed_form", "pd_empirical", "pfa_empirical", "eve_acceptance_rate",
    "ci_halfwidth",   "trials"};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string rows_to_csv_text(const std::vector<ResultRow>& rows);
// Throws IoError naming the offending line or column.
std::vector<ResultRow> rows_from_csv_text(const std::string& text);

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

// Run summary document: version, seed, command, config echo and the
// aggregate report of `rows`.
std::string run_summary_json_text(const std::string& command, const ScenarioConfig& config,
                                  const std::vector<ResultRow>& rows,
                                  const std::vector<std::string>& skipped = {});
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cfpla
