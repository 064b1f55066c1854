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


#include "starisac/experiments.hpp"

#include "starisac/errors.hpp"
#include "starisac/parallel.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

namespace starisac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint32_t calibration_cell(int pulses, bool with_comm)
{
    return static_cast<std::uint32_t>(pulses) * 2u + (with_comm ? 1u : 0u);
}

struct RadarTrial {
    Hypothesis hypothesis = Hypothesis::h0;
    double err_tr = 0.0; // velocity error [m/s], valid when the side was estimated
    double err_re = 0.0;
};

struct Rmse {
    double sum = 0.0;
    std::size_t count = 0;

    void add(double err)
    {
        sum += err * err;
        ++count;
    }
    Value value() const
    {
        if (count == 0)
            return std::monostate{};
        return std::sqrt(sum / static_cast<double>(count));
    }
};

} // namespace

double wilson_half_width(std::size_t successes, std::size_t trials) noexcept
{
    if (trials == 0)
        return 0.0;
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    return z / (1.0 + z * z / n) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
}

MetricsRecord run_calibration(const ScenarioConfig& cfg, const std::vector<bool>& with_comm, CalibrationStore& store,
                              unsigned jobs)
{
    const auto start = Clock::now();
    MetricsRecord record;
    record.experiment = "calibration";
    record.columns = {"experiment", "P",       "M",      "b",     "with_comm", "fa_counting", "fa_target",
                      "trials",     "penalty", "fa_rate", "seed"};
    const StreamKey key(cfg.seed, "calibration");
    nlohmann::json penalties = nlohmann::json::object();

    for (bool comm : with_comm) {
        for (int pulses : cfg.pulses_per_cpi) {
            const DetectionSetup setup = detection_setup(cfg, pulses, comm);
            const CalibrationResult res = calibrate_penalty(setup, cfg.fa_target, cfg.calibration_trials,
                                                            cfg.fa_counting, key, calibration_cell(pulses, comm), jobs);
            const std::string id = calibration_key(cfg, pulses, comm);
            store[id] = res.penalty;
            penalties[id] = res.penalty;
            record.add_row({record.experiment, static_cast<long long>(pulses),
                            static_cast<long long>(setup.codes.slot_pulses()), static_cast<long long>(setup.codes.bits()),
                            static_cast<long long>(comm), std::string(to_string(cfg.fa_counting)), cfg.fa_target,
                            static_cast<long long>(res.trials), res.penalty, res.false_alarm_rate,
                            static_cast<long long>(cfg.seed)});
        }
    }
    record.extra["fa_counting"] = to_string(cfg.fa_counting);
    record.extra["penalties"] = penalties;
    record.runtime_s = seconds_since(start);
    return record;
}

PenaltyTable resolve_penalties(const ScenarioConfig& cfg, bool with_comm, const CalibrationStore* store)
{
    PenaltyTable table;
    for (int pulses : cfg.pulses_per_cpi) {
        if (cfg.penalty) {
            table[pulses] = *cfg.penalty;
            continue;
        }
        const std::string id = calibration_key(cfg, pulses, with_comm);
        if (store == nullptr)
            throw CalibrationError("no penalty configured and no calibration file given (run 'calibrate' first)");
        const auto it = store->find(id);
        if (it == store->end())
            throw CalibrationError("calibration file has no entry for " + id);
        table[pulses] = it->second;
    }
    return table;
}

MetricsRecord run_radar_mc(const ScenarioConfig& cfg, bool with_comm, const PenaltyTable& penalties, unsigned jobs)
{
    const auto start = Clock::now();
    const Scene scene = build_scene(cfg);
    const double lambda = cfg.system.wavelength();
    const std::size_t trials = cfg.radar_trials;

    MetricsRecord record;
    record.experiment = "radar";
    record.columns = {"experiment",     "P",           "M",           "b",           "with_comm",
                      "rcs_m2",         "penalty",     "trials",      "pd",          "pd_ci95",
                      "p_h0",           "p_h1_tr",     "p_h1_re",     "rmse_tr_mps", "rmse_re_mps",
                      "rmse_tr_h2_mps", "rmse_re_h2_mps", "n_est_tr", "n_est_re",    "seed"};
    const StreamKey key(cfg.seed, "radar");
    const StreamKey message_key(cfg.seed, "radar-messages");
    nlohmann::json used = nlohmann::json::object();

    for (int pulses : cfg.pulses_per_cpi) {
        const auto pen = penalties.find(pulses);
        if (pen == penalties.end())
            throw CalibrationError("no penalty for P=" + std::to_string(pulses));
        const double penalty = pen->second;
        used[std::to_string(pulses)] = penalty;

        const DetectionSetup setup = detection_setup(cfg, pulses, with_comm);
        const RadarLink link{scene.gamma_tr, scene.gamma_re, cfg.system.pri_s, setup.noise};
        const auto cell = static_cast<std::uint32_t>(pulses);

        for (double rcs : cfg.rcs_m2) {
            const double amp = std::sqrt(target_amplitude_variance(rcs, cfg.target_range_m));
            std::vector<RadarTrial> out(trials);
            parallel_for(trials, jobs, [&](std::size_t begin, std::size_t end) {
                GicDetector det = setup.make_detector();
                if (!setup.codes.carries_messages())
                    det.set_codes(setup.codes.fixed());
                for (std::size_t t = begin; t < end; ++t) {
                    const auto trial = static_cast<std::uint32_t>(t);
                    CodePair codes = setup.codes.fixed();
                    if (setup.codes.carries_messages()) {
                        Rng msg = message_key.stream(cell, trial);
                        codes = setup.codes.draw(msg);
                        det.set_codes(codes);
                    }
                    Rng rng = key.stream(cell, trial);
                    RadarTruth truth;
                    truth.alpha_tr = amp * rng.complex_normal(1.0);
                    truth.alpha_re = amp * rng.complex_normal(1.0);
                    if (cfg.doppler_sampling == DopplerSampling::grid) {
                        truth.doppler_tr_hz = setup.grid_tr.points[rng.uniform_index(setup.grid_tr.size())];
                        truth.doppler_re_hz = setup.grid_re.points[rng.uniform_index(setup.grid_re.size())];
                    } else {
                        truth.doppler_tr_hz = rng.uniform(cfg.doppler_tr_lo_hz, cfg.doppler_tr_hi_hz);
                        truth.doppler_re_hz = rng.uniform(cfg.doppler_re_lo_hz, cfg.doppler_re_hi_hz);
                    }
                    const RadarObservation obs = synth_radar_observation(link, truth, codes, rng);
                    const DetectionResult res = det.detect(obs.samples, penalty);
                    RadarTrial& r = out[t];
                    r.hypothesis = res.hypothesis;
                    if (res.doppler_tr_hz)
                        r.err_tr = doppler_to_velocity(*res.doppler_tr_hz - truth.doppler_tr_hz, lambda);
                    if (res.doppler_re_hz)
                        r.err_re = doppler_to_velocity(*res.doppler_re_hz - truth.doppler_re_hz, lambda);
                }
            });

            std::array<std::size_t, 4> counts{};
            Rmse tr, re, tr_h2, re_h2;
            for (const RadarTrial& r : out) {
                ++counts[static_cast<int>(r.hypothesis)];
                const bool has_tr = r.hypothesis == Hypothesis::h1_tr || r.hypothesis == Hypothesis::h2;
                const bool has_re = r.hypothesis == Hypothesis::h1_re || r.hypothesis == Hypothesis::h2;
                if (has_tr)
                    tr.add(r.err_tr);
                if (has_re)
                    re.add(r.err_re);
                if (r.hypothesis == Hypothesis::h2) {
                    tr_h2.add(r.err_tr);
                    re_h2.add(r.err_re);
                }
            }
            const double n = static_cast<double>(trials);
            const std::size_t h2 = counts[3];
            record.add_row({record.experiment, static_cast<long long>(pulses),
                            static_cast<long long>(setup.codes.slot_pulses()),
                            static_cast<long long>(setup.codes.bits()), static_cast<long long>(with_comm), rcs, penalty,
                            static_cast<long long>(trials), static_cast<double>(h2) / n, wilson_half_width(h2, trials),
                            static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n,
                            static_cast<double>(counts[2]) / n, tr.value(), re.value(), tr_h2.value(), re_h2.value(),
                            static_cast<long long>(tr.count), static_cast<long long>(re.count),
                            static_cast<long long>(cfg.seed)});
        }
    }
    record.extra["penalties"] = used;
    record.extra["fa_counting"] = to_string(cfg.fa_counting);
    record.extra["with_comm"] = with_comm;
    record.runtime_s = seconds_since(start);
    return record;
}

MetricsRecord run_comm_mc(const ScenarioConfig& cfg, unsigned jobs)
{
    const auto start = Clock::now();
    const Scene scene = build_scene(cfg);
    const std::size_t slots = cfg.ber_slots;
    const std::size_t n_snr = cfg.snr_db.size();

    MetricsRecord record;
    record.experiment = "ber";
    record.columns = {"experiment", "side",  "M",         "b",   "rate_bps", "snr_db",   "noise_var_w",
                      "slots",      "bits",  "bit_errors", "ber", "ber_ci95", "seed"};
    const StreamKey key(cfg.seed, "ber");

    std::vector<double> noise_var(n_snr);
    for (std::size_t k = 0; k < n_snr; ++k)
        noise_var[k] = reference_snr_to_noise(db_to_ratio(cfg.snr_db[k]), scene.reference);

    for (const CommRate& rate : cfg.rates) {
        const CodebookPair books = build_codebooks(rate.slot_pulses, rate.bits, cfg.column_order);
        for (Side side : {Side::transmissive, Side::reflective}) {
            const Codebook& book = side == Side::transmissive ? books.transmissive : books.reflective;
            const UserSideConfig& user = side == Side::transmissive ? cfg.user_tr : cfg.user_re;
            const cvec& weights = side == Side::transmissive ? scene.s_tr.weights : scene.s_re.weights;
            const auto cell = static_cast<std::uint32_t>((rate.slot_pulses << 8) | (rate.bits << 1) |
                                                         (side == Side::reflective ? 1 : 0));
            const Eigen::Index m = rate.slot_pulses;
            const Eigen::Index taps = user.taps;

            // errors[t * n_snr + k]
            std::vector<std::uint8_t> errors(slots * n_snr);
            parallel_for(slots, jobs, [&](std::size_t begin, std::size_t end) {
                cmat noise(m, taps);
                for (std::size_t t = begin; t < end; ++t) {
                    Rng rng = key.stream(cell, static_cast<std::uint32_t>(t));
                    const auto paths = draw_user_paths(user, cfg.system, rng);
                    const cvec beta = user_channel_taps(paths, weights, scene.g, scene.ris, user, cfg.system);
                    const auto message = static_cast<unsigned>(rng.uniform_index(book.size()));
                    for (Eigen::Index l = 0; l < taps; ++l)
                        for (Eigen::Index p = 0; p < m; ++p)
                            noise(p, l) = rng.complex_normal(1.0);
                    const cmat signal = book.codeword(message).cast<std::complex<double>>() * beta.transpose();
                    for (std::size_t k = 0; k < n_snr; ++k) {
                        const cmat y = signal + std::sqrt(noise_var[k]) * noise;
                        const SlotDecision d = ml_decode_slot(y, book);
                        errors[t * n_snr + k] = static_cast<std::uint8_t>(std::popcount(d.index ^ message));
                    }
                }
            });

            const double rate_bps = rate.bits / (rate.slot_pulses * cfg.system.pri_s);
            for (std::size_t k = 0; k < n_snr; ++k) {
                std::size_t bit_errors = 0;
                for (std::size_t t = 0; t < slots; ++t)
                    bit_errors += errors[t * n_snr + k];
                const std::size_t bits = slots * static_cast<std::size_t>(rate.bits);
                record.add_row({record.experiment, std::string(to_string(side)), static_cast<long long>(rate.slot_pulses),
                                static_cast<long long>(rate.bits), rate_bps, cfg.snr_db[k], noise_var[k],
                                static_cast<long long>(slots), static_cast<long long>(bits),
                                static_cast<long long>(bit_errors),
                                static_cast<double>(bit_errors) / static_cast<double>(bits),
                                wilson_half_width(bit_errors, bits), static_cast<long long>(cfg.seed)});
            }
        }
    }
    record.extra["reference_signal_power_w"] = scene.reference.signal_power;
    record.runtime_s = seconds_since(start);
    return record;
}

} // namespace starisac
