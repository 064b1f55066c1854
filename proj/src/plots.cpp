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


#include "starisac/plots.hpp"

#include "starisac/errors.hpp"
#include "starisac/results.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace starisac {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;

    double norm(double v) const
    {
        if (log)
            return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
        return (v - lo) / (hi - lo);
    }

    std::vector<double> ticks() const
    {
        std::vector<double> t;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9))
                    t.push_back(v);
            }
            return t;
        }
        const double raw = (hi - lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0})
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
            t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        return t;
    }
};

Axis make_axis(const std::vector<double>& values, bool log)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v) || (log && v <= 0))
            continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(lo))
        return {log ? 0.1 : 0.0, 1.0, log};
    if (log) {
        lo = std::pow(10.0, std::floor(std::log10(lo)));
        hi = std::pow(10.0, std::ceil(std::log10(hi)));
        if (hi <= lo)
            hi = lo * 10;
    } else if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi, log};
}

bool usable(double x, double y, bool log_x, bool log_y)
{
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << text;
}

} // namespace

std::string render_svg(const Chart& chart)
{
    std::vector<double> xs, ys;
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i], chart.log_x, chart.log_y)) {
                xs.push_back(s.x[i]);
                ys.push_back(s.y[i]);
            }
    const Axis ax = make_axis(xs, chart.log_x);
    const Axis ay = make_axis(ys, chart.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + pw * ax.norm(x); };
    auto py = [&](double y) { return kTop + ph * (1.0 - ay.norm(y)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
        << "</text>\n";

    for (double t : ax.ticks()) {
        const double x = px(t);
        svg << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
            << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = py(t);
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
            << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
        << escape(chart.x_label) << "</text>\n";
    svg << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(chart.y_label) << "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const PlotSeries& s = chart.series[k];
        const char* color = kColors[k % kColors.size()];
        const char* dash = k >= kColors.size() ? " stroke-dasharray=\"6 3\"" : "";
        std::ostringstream points;
        std::size_t n = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i], chart.log_x, chart.log_y))
                continue;
            points << (n++ ? " " : "") << px(s.x[i]) << "," << py(s.y[i]);
            svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        if (n > 1)
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash << " points=\""
                << points.str() << "\"/>\n";
        const double ly = kTop + 10 + 18 * static_cast<double>(k);
        svg << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 36 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash << "/>\n";
        svg << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

double field(const ResultTable& t, std::size_t row, const std::string& name)
{
    return t.number(row, name).value_or(std::numeric_limits<double>::quiet_NaN());
}

std::vector<std::filesystem::path> ber_plots(const std::vector<ResultTable>& tables, const std::filesystem::path& dir)
{
    std::map<std::string, PlotSeries> curves;
    for (const auto& t : tables)
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string label =
                "M=" + t.text(r, "M") + " b=" + t.text(r, "b") + " " + t.text(r, "side");
            PlotSeries& s = curves[label];
            s.label = label;
            s.x.push_back(field(t, r, "snr_db"));
            s.y.push_back(field(t, r, "ber"));
        }
    Chart chart{"BER vs SNR", "SNR [dB]", "BER", false, true, {}};
    for (auto& [label, s] : curves)
        chart.series.push_back(std::move(s));
    const auto path = dir / "ber_vs_snr.svg";
    write_file(path, render_svg(chart));
    return {path};
}

std::vector<std::filesystem::path> radar_plots(const std::vector<ResultTable>& tables,
                                               const std::filesystem::path& dir)
{
    // P -> label -> series
    std::map<int, std::map<std::string, PlotSeries>> pd, rmse;
    for (const auto& t : tables)
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const int pulses = static_cast<int>(field(t, r, "P"));
            const bool comm = field(t, r, "with_comm") != 0.0;
            const std::string variant =
                comm ? "with comm (M=" + t.text(r, "M") + ", b=" + t.text(r, "b") + ")" : "radar only";
            const double rcs = field(t, r, "rcs_m2");
            PlotSeries& p = pd[pulses][variant];
            p.label = variant;
            p.x.push_back(rcs);
            p.y.push_back(field(t, r, "pd"));
            for (const char* side : {"tr", "re"}) {
                const std::string label = std::string(side) + ", " + variant;
                PlotSeries& s = rmse[pulses][label];
                s.label = label;
                s.x.push_back(rcs);
                s.y.push_back(field(t, r, std::string("rmse_") + side + "_mps"));
            }
        }
    std::vector<std::filesystem::path> written;
    for (auto& [pulses, curves] : pd) {
        Chart chart{"PD vs RCS, P=" + std::to_string(pulses), "RCS [m^2]", "PD", true, false, {}};
        for (auto& [label, s] : curves)
            chart.series.push_back(std::move(s));
        const auto path = dir / ("pd_vs_rcs_P" + std::to_string(pulses) + ".svg");
        write_file(path, render_svg(chart));
        written.push_back(path);
    }
    for (auto& [pulses, curves] : rmse) {
        Chart chart{"Velocity RMSE vs RCS, P=" + std::to_string(pulses), "RCS [m^2]", "RMSE [m/s]", true, true, {}};
        for (auto& [label, s] : curves)
            chart.series.push_back(std::move(s));
        const auto path = dir / ("rmse_vs_rcs_P" + std::to_string(pulses) + ".svg");
        write_file(path, render_svg(chart));
        written.push_back(path);
    }
    return written;
}

} // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<std::filesystem::path>& inputs,
                                              const std::filesystem::path& out_dir)
{
    if (inputs.empty())
        throw IoError("no result files given");
    std::vector<ResultTable> tables;
    std::string experiment;
    for (const auto& path : inputs) {
        ResultTable t = read_results(path);
        if (t.rows.empty())
            throw IoError(path.string() + ": no result rows");
        if (tables.empty())
            experiment = t.experiment;
        else if (t.experiment != experiment)
            throw IoError("mismatched experiment ids: '" + experiment + "' and '" + t.experiment + "'");
        tables.push_back(std::move(t));
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    if (experiment == "ber")
        return ber_plots(tables, out_dir);
    if (experiment == "radar")
        return radar_plots(tables, out_dir);
    throw IoError("no plots defined for experiment '" + experiment + "'");
}

} // namespace starisac
