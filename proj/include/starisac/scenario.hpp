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

#include "starisac/channel.hpp"
#include "starisac/codebook.hpp"
#include "starisac/comm.hpp"
#include "starisac/geometry.hpp"
#include "starisac/radar.hpp"
#include "starisac/starris.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace starisac {

struct CommRate {
    int slot_pulses = 4; ///< M
    int bits = 1;        ///< b

    bool operator==(const CommRate&) const = default;
};

enum class DopplerSampling { uniform, grid };

/// Every physical and algorithmic parameter of one study. Defaults are the
/// reference scenario; load_scenario() fills absent JSON keys from them.
struct ScenarioConfig {
    SystemParams system;
    std::size_t ris_elements = 256;
    std::size_t rad_elements = 256;

    double target_range_m = 10.0;
    AngularDirection target_tr = AngularDirection::from_degrees(160.0, 0.0);
    AngularDirection target_re = AngularDirection::from_degrees(20.0, 0.0);
    double doppler_tr_lo_hz = 1750.0, doppler_tr_hi_hz = 2000.0;
    double doppler_re_lo_hz = 1750.0, doppler_re_hi_hz = 2000.0;
    DopplerSampling doppler_sampling = DopplerSampling::uniform;
    std::vector<double> rcs_m2{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};

    std::vector<int> pulses_per_cpi{8, 16, 32};
    CommRate radar_comm{4, 1}; ///< (M, b) used when the radar runs with communication
    ColumnOrder column_order = ColumnOrder::reversed_tr;

    UserSideConfig user_tr;
    UserSideConfig user_re;
    std::vector<double> snr_db{-10.0, -6.0, -2.0, 2.0, 6.0, 10.0, 14.0};
    std::vector<CommRate> rates{{4, 1}, {8, 1}, {8, 2}, {16, 2}};

    int doppler_oversampling = 16;
    double fa_target = 1e-4;
    FaCounting fa_counting = FaCounting::event;
    std::optional<double> penalty; ///< empty: use a calibrated value
    std::size_t calibration_trials = 1000000;

    std::size_t radar_trials = 10000;
    std::size_t ber_slots = 100000;
    std::uint64_t seed = 1;

    ScenarioConfig();
};

/// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& cfg);

/// Parses and validates a scenario; absent keys keep their defaults. Unknown
/// keys and type mismatches are reported with their JSON path.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
/// Throws IoError if the file cannot be read, ConfigError otherwise.
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Fully resolved scenario in the same schema.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Derived quantities shared by every experiment of a scenario.
struct Scene {
    SystemParams system;
    ArrayGeometry ris;
    ArrayGeometry rad;
    cvec g;
    SpatialBeamformer s_tr;
    SpatialBeamformer s_re;
    cvec s_rad;
    std::complex<double> gamma_tr;
    std::complex<double> gamma_re;
    /// Reflective-side reference used to map SNR_u to sigma_com^2 for both users.
    ReferenceLink reference;
};

Scene build_scene(const ScenarioConfig& cfg);

/// Codes, grids and noise for CPI length P with or without communication.
DetectionSetup detection_setup(const ScenarioConfig& cfg, int pulses, bool with_comm);

/// Identifies a calibrated penalty: P, M, b, column order, grids, radar noise,
/// counting rule, false-alarm target and seed.
std::string calibration_key(const ScenarioConfig& cfg, int pulses, bool with_comm);

} // namespace starisac
