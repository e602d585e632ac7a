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

#include "cfpla/results_io.hpp"

#include "cfpla/version.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cfpla {

namespace {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& column, std::size_t line)
{
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        if (text == "nan")
            return std::numeric_limits<T>::quiet_NaN();
    }
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw IoError("csv line " + std::to_string(line) + ": column '" + column +
                      "' has invalid value '" + text + "'");
    return value;
}

}  // namespace

std::string rows_to_csv_text(const std::vector<ResultRow>& rows)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < kResultColumns.size(); ++i)
        os << (i ? "," : "") << kResultColumns[i];
    os << '\n';
    for (const auto& r : rows) {
        os << r.M << ',' << r.N << ',' << r.K << ',' << r.L << ',' << format_double(r.rho_s) << ','
           << format_double(r.pfa_target) << ',' << r.drop << ',' << r.seed << ','
           << format_double(r.pd_closed_form) << ',' << format_double(r.pd_empirical) << ','
           << format_double(r.pfa_empirical) << ',' << format_double(r.eve_acceptance_rate) << ','
           << format_double(r.ci_halfwidth) << ',' << r.trials << '\n';
    }
    return os.str();
}

std::vector<ResultRow> rows_from_csv_text(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw IoError("csv is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    const auto header = split(line);
    for (std::size_t i = 0; i < kResultColumns.size(); ++i) {
        if (i >= header.size())
            throw IoError(std::string("csv header is missing column '") + kResultColumns[i] + "'");
        if (header[i] != kResultColumns[i])
            throw IoError("csv header column " + std::to_string(i + 1) + " is '" + header[i] +
                          "', expected '" + kResultColumns[i] + "'");
    }
    if (header.size() != kResultColumns.size())
        throw IoError("csv header has unexpected column '" + header[kResultColumns.size()] + "'");

    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto c = split(line);
        if (c.size() != kResultColumns.size())
            throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                          std::to_string(kResultColumns.size()) + " fields, got " +
                          std::to_string(c.size()));
        auto col = [&](std::size_t i) -> const std::string& { return c[i]; };
        ResultRow r;
        r.M = parse_number<int>(col(0), kResultColumns[0], lineno);
        r.N = parse_number<int>(col(1), kResultColumns[1], lineno);
        r.K = parse_number<int>(col(2), kResultColumns[2], lineno);
        r.L = parse_number<int>(col(3), kResultColumns[3], lineno);
        r.rho_s = parse_number<double>(col(4), kResultColumns[4], lineno);
        r.pfa_target = parse_number<double>(col(5), kResultColumns[5], lineno);
        r.drop = parse_number<int>(col(6), kResultColumns[6], lineno);
        r.seed = parse_number<std::uint64_t>(col(7), kResultColumns[7], lineno);
        r.pd_closed_form = parse_number<double>(col(8), kResultColumns[8], lineno);
        r.pd_empirical = parse_number<double>(col(9), kResultColumns[9], lineno);
        r.pfa_empirical = parse_number<double>(col(10), kResultColumns[10], lineno);
        r.eve_acceptance_rate = parse_number<double>(col(11), kResultColumns[11], lineno);
        r.ci_halfwidth = parse_number<double>(col(12), kResultColumns[12], lineno);
        r.trials = parse_number<std::uint64_t>(col(13), kResultColumns[13], lineno);
        rows.push_back(r);
    }
    return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory '" + path.parent_path().string() +
                          "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows)
{
    write_text(path, rows_to_csv_text(rows));
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return rows_from_csv_text(ss.str());
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::string run_summary_json_text(const std::string& command, const ScenarioConfig& config,
                                  const std::vector<ResultRow>& rows,
                                  const std::vector<std::string>& skipped)
{
    using json = nlohmann::json;
    json doc;
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["seed"] = config.seed;
    doc["config"] = json::parse(config_to_json_text(config));
    doc["skipped"] = skipped;
    doc["columns"] = kResultColumns;
    if (!rows.empty())
        doc["summary"] = json::parse(summary_to_json_text(summarize(rows)));
    else
        doc["summary"] = nullptr;
    return doc.dump(2) + "\n";
}

}  // namespace cfpla
