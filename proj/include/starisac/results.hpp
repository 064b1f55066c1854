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


#pragma once

#include "starisac/scenario.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace starisac {

/// One CSV cell. monostate is written as an empty field.
using Value = std::variant<std::monostate, long long, double, std::string>;

/// Per-cell aggregates of one experiment.
struct MetricsRecord {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    double runtime_s = 0.0;
    /// Experiment-specific manifest entries (penalties, counting rule, ...).
    nlohmann::json extra = nlohmann::json::object();

    void add_row(std::vector<Value> row);
};

/// Shortest decimal that round-trips.
std::string format_number(double v);
std::string to_csv(const MetricsRecord& record);

/// results.csv -> results.manifest.json
std::filesystem::path manifest_path(const std::filesystem::path& csv);

/// Writes the CSV and its manifest (resolved config, version, runtime, extra).
/// Throws IoError when either file cannot be written.
void write_results(const MetricsRecord& record, const ScenarioConfig& cfg, const std::filesystem::path& csv);

/// A CSV read back as text.
struct ResultTable {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Column index; throws IoError if absent.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& name) const;
    /// Empty fields give nullopt.
    std::optional<double> number(std::size_t row, const std::string& name) const;
};

/// Throws IoError on unreadable files, malformed rows, or mixed experiment ids.
ResultTable read_results(const std::filesystem::path& csv);

/// Calibrated penalties keyed by calibration_key().
using CalibrationStore = std::map<std::string, double>;

CalibrationStore read_calibration(const std::filesystem::path& path);
void write_calibration(const std::filesystem::path& path, const CalibrationStore& store);

} // namespace starisac
