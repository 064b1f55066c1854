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


// starisac command line: calibrate, radar, ber, plot.

#include "starisac/errors.hpp"
#include "starisac/experiments.hpp"
#include "starisac/parallel.hpp"
#include "starisac/plots.hpp"
#include "starisac/results.hpp"
#include "starisac/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace starisac;

namespace {

enum ExitCode { ok = 0, failure = 1, config_error = 2, calibration_error = 3, io_error = 4 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    unsigned jobs = 0;
    bool with_comm = false;
    bool no_comm = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& trials_help)
{
    cmd->add_option("--config", c.config, "scenario JSON (defaults when omitted)");
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--trials", c.trials, trials_help)->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", c.jobs, "worker threads (0: all cores; STARISAC_JOBS overrides)");
}

ScenarioConfig load(const Common& c)
{
    ScenarioConfig cfg = c.config.empty() ? ScenarioConfig{} : load_scenario(c.config);
    if (c.seed)
        cfg.seed = *c.seed;
    return cfg;
}

void report(const MetricsRecord& record, const fs::path& out)
{
    std::fprintf(stderr, "%s: %zu rows in %.1f s -> %s\n", record.experiment.c_str(), record.rows.size(),
                 record.runtime_s, out.string().c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"STAR-RIS integrated sensing and communication Monte Carlo simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", STARISAC_VERSION);

    Common cal_opts, radar_opts, ber_opts;
    std::string cal_out = "calibration.json";
    std::string radar_out = "radar.csv", ber_out = "ber.csv";
    std::string radar_calibration;
    std::vector<std::string> plot_inputs;
    std::string plot_out = "plots";

    auto* cal = app.add_subcommand("calibrate", "calibrate the detector penalty for a false-alarm target");
    add_common(cal, cal_opts, "noise-only trials per calibration");
    cal->add_option("--out", cal_out, "calibration file (a CSV summary is written next to it)");
    cal->add_flag("--with-comm", cal_opts.with_comm, "only the with-communication codes");
    cal->add_flag("--no-comm", cal_opts.no_comm, "only the radar-only codes");

    auto* radar = app.add_subcommand("radar", "PD and velocity RMSE versus RCS");
    add_common(radar, radar_opts, "trials per (P, RCS) cell");
    radar->add_option("--out", radar_out, "results CSV");
    auto* wc = radar->add_flag("--with-comm", radar_opts.with_comm, "radar codes carry communication messages");
    radar->add_flag("--no-comm", radar_opts.no_comm, "radar-only codes (default)")->excludes(wc);
    radar->add_option("--calibration", radar_calibration, "calibration file from 'calibrate'");

    auto* ber = app.add_subcommand("ber", "BER versus SNR for both users");
    add_common(ber, ber_opts, "slots per (rate, side, SNR) cell");
    ber->add_option("--out", ber_out, "results CSV");

    auto* plot = app.add_subcommand("plot", "SVG figures from result CSVs");
    plot->add_option("inputs", plot_inputs, "result CSV files")->required();
    plot->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*cal) {
            ScenarioConfig cfg = load(cal_opts);
            if (cal_opts.trials)
                cfg.calibration_trials = *cal_opts.trials;
            validate(cfg);
            std::vector<bool> variants;
            if (!cal_opts.with_comm || cal_opts.no_comm)
                variants.push_back(false);
            if (cal_opts.with_comm || !cal_opts.no_comm)
                variants.push_back(true);
            CalibrationStore store;
            if (fs::exists(cal_out))
                store = read_calibration(cal_out);
            const MetricsRecord record = run_calibration(cfg, variants, store, resolve_jobs(cal_opts.jobs));
            write_calibration(cal_out, store);
            fs::path csv = cal_out;
            csv.replace_extension(".csv");
            write_results(record, cfg, csv);
            report(record, cal_out);
            for (const auto& row : record.rows)
                std::cout << "P=" << std::get<long long>(row[1]) << " with_comm=" << std::get<long long>(row[4])
                          << " penalty=" << format_number(std::get<double>(row[8]))
                          << " fa_rate=" << format_number(std::get<double>(row[9])) << "\n";
        } else if (*radar) {
            ScenarioConfig cfg = load(radar_opts);
            if (radar_opts.trials)
                cfg.radar_trials = *radar_opts.trials;
            validate(cfg);
            std::optional<CalibrationStore> store;
            if (!radar_calibration.empty())
                store = read_calibration(radar_calibration);
            const bool comm = radar_opts.with_comm;
            const PenaltyTable penalties = resolve_penalties(cfg, comm, store ? &*store : nullptr);
            const MetricsRecord record = run_radar_mc(cfg, comm, penalties, resolve_jobs(radar_opts.jobs));
            write_results(record, cfg, radar_out);
            report(record, radar_out);
        } else if (*ber) {
            ScenarioConfig cfg = load(ber_opts);
            if (ber_opts.trials)
                cfg.ber_slots = *ber_opts.trials;
            validate(cfg);
            const MetricsRecord record = run_comm_mc(cfg, resolve_jobs(ber_opts.jobs));
            write_results(record, cfg, ber_out);
            report(record, ber_out);
        } else if (*plot) {
            std::vector<fs::path> inputs(plot_inputs.begin(), plot_inputs.end());
            for (const auto& path : emit_plots(inputs, plot_out))
                std::cout << path.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << "\n";
        return calibration_error;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}
