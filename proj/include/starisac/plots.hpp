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

#include <filesystem>
#include <string>
#include <vector>

namespace starisac {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y; ///< NaN marks a missing point
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG line chart. Non-positive values are dropped on log axes.
std::string render_svg(const Chart& chart);

/// Reads result CSVs (all from the same experiment) and writes SVG figures
/// into `out_dir`: BER vs SNR with one curve per (M, b, side), or PD and RMSE
/// vs RCS per P with radar-only and with-communication curves overlaid.
/// Returns the written files. Throws IoError on empty input or mixed
/// experiment ids.
std::vector<std::filesystem::path> emit_plots(const std::vector<std::filesystem::path>& inputs,
                                              const std::filesystem::path& out_dir);

} // namespace starisac
