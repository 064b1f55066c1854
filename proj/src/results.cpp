// SPDX-License-Identifier: Apache-2.0
//
// starisac: STAR-RIS integrated sensing and communication simulator
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
// ------------------------------------------------------------------------


#include "starisac/results.hpp"

#include "starisac/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef STARISAC_VERSION
#define STARISAC_VERSION "unknown"
#endif

namespace starisac {

using nlohmann::json;

void MetricsRecord::add_row(std::vector<Value> row)
{
    if (row.size() != columns.size())
        throw std::logic_error(experiment + ": row has " + std::to_string(row.size()) + " fields, expected " +
                               std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_value(const Value& v)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(double x) const { return format_number(x); }
        std::string operator()(const std::string& s) const
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s) {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }
    };
    return std::visit(Visitor{}, v);
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace

std::string to_csv(const MetricsRecord& record)
{
    std::string out;
    for (std::size_t i = 0; i < record.columns.size(); ++i)
        out += (i ? "," : "") + record.columns[i];
    out += '\n';
    for (const auto& row : record.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_value(row[i]);
        out += '\n';
    }
    return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& csv)
{
    std::filesystem::path p = csv;
    p.replace_extension(".manifest.json");
    return p;
}

void write_results(const MetricsRecord& record, const ScenarioConfig& cfg, const std::filesystem::path& csv)
{
    write_text(csv, to_csv(record));
    json manifest{
        {"experiment", record.experiment},
        {"version", STARISAC_VERSION},
        {"results", csv.filename().string()},
        {"rows", record.rows.size()},
        {"runtime_s", record.runtime_s},
        {"config", scenario_to_json(cfg)},
    };
    for (const auto& [key, value] : record.extra.items())
        manifest[key] = value;
    write_text(manifest_path(csv), manifest.dump(2) + "\n");
}

std::size_t ResultTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw IoError("results have no column '" + name + "'");
}

bool ResultTable::has_column(const std::string& name) const
{
    for (const auto& c : columns)
        if (c == name)
            return true;
    return false;
}

const std::string& ResultTable::text(std::size_t row, const std::string& name) const
{
    return rows.at(row).at(column(name));
}

std::optional<double> ResultTable::number(std::size_t row, const std::string& name) const
{
    const std::string& s = text(row, name);
    if (s.empty())
        return std::nullopt;
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError("field '" + name + "' is not a number: " + s);
    return v;
}

ResultTable read_results(const std::filesystem::path& csv)
{
    std::ifstream in(csv, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + csv.string());
    ResultTable table;
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw IoError(csv.string() + ": empty results file");
    table.columns = split_csv_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto fields = split_csv_line(line);
        if (fields.size() != table.columns.size())
            throw IoError(csv.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(table.columns.size()) + " fields");
        table.rows.push_back(std::move(fields));
    }
    if (table.has_column("experiment")) {
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::string& id = table.text(r, "experiment");
            if (r == 0)
                table.experiment = id;
            else if (id != table.experiment)
                throw IoError(csv.string() + ": mixed experiment ids '" + table.experiment + "' and '" + id + "'");
        }
    }
    return table;
}

CalibrationStore read_calibration(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open calibration file " + path.string());
    CalibrationStore store;
    try {
        const json doc = json::parse(in);
        for (const auto& entry : doc.at("entries"))
            store[entry.at("key").get<std::string>()] = entry.at("penalty").get<double>();
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": malformed calibration file: " + e.what());
    }
    return store;
}

void write_calibration(const std::filesystem::path& path, const CalibrationStore& store)
{
    json entries = json::array();
    for (const auto& [key, penalty] : store)
        entries.push_back({{"key", key}, {"penalty", penalty}});
    write_text(path, json{{"entries", entries}}.dump(2) + "\n");
}

} // namespace starisac
