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

#include "starisac/results.hpp"
#include "starisac/scenario.hpp"

#include <map>
#include <vector>

namespace starisac {

/// Penalty per CPI length P.
using PenaltyTable = std::map<int, double>;

/// Calibrates the GIC penalty for every P of the scenario and each requested
/// variant (radar-only and/or with communication). New values are merged
/// into `store`. Returns one row per (P, variant).
MetricsRecord run_calibration(const ScenarioConfig& cfg, const std::vector<bool>& with_comm, CalibrationStore& store,
                              unsigned jobs);

/// Penalty per P: the configured value when set, otherwise a lookup in
/// `store`. Throws CalibrationError when an entry is missing.
PenaltyTable resolve_penalties(const ScenarioConfig& cfg, bool with_comm, const CalibrationStore* store);

/// PD and velocity RMSE versus RCS for every P of the scenario.
///
/// Trial t of a given P uses the same random stream for every RCS value
/// (amplitudes are scaled unit draws), so the RCS sweep is paired. Messages
/// come from a separate stream, so radar-only and with-communication runs
/// share targets and noise trial by trial.
MetricsRecord run_radar_mc(const ScenarioConfig& cfg, bool with_comm, const PenaltyTable& penalties, unsigned jobs);

/// BER versus SNR for every configured rate and both users. Slot t of a given
/// (M, b, side) reuses channel, message and unit noise across the SNR sweep.
MetricsRecord run_comm_mc(const ScenarioConfig& cfg, unsigned jobs);

/// Wilson score interval half-width at 95% confidence.
double wilson_half_width(std::size_t successes, std::size_t trials) noexcept;

} // namespace starisac
