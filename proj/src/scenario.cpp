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


#include "starisac/scenario.hpp"

#include "starisac/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace starisac {

using nlohmann::json;

ScenarioConfig::ScenarioConfig()
{
    user_tr.side = Side::transmissive;
    user_tr.departure = AngularRect::from_degrees(170.0, 180.0, -25.0, -15.0);
    user_re.side = Side::reflective;
    user_re.departure = AngularRect::from_degrees(15.0, 25.0, -25.0, -15.0);
}

namespace {

// Reads one JSON object, tracking consumed keys so leftovers can be reported.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            fail(path_, "expected an object");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what)
    {
        throw ConfigError((path.empty() ? std::string("<root>") : path) + ": " + what);
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() || it->is_null() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number())
                fail(child(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                fail(child(key), "must be finite");
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer())
                fail(child(key), "expected an integer");
            if (v->is_number_unsigned())
                out = static_cast<Int>(v->get<std::uint64_t>());
            else {
                const auto x = v->get<std::int64_t>();
                if (std::is_unsigned_v<Int> && x < 0)
                    fail(child(key), "must be non-negative");
                out = static_cast<Int>(x);
            }
        }
    }

    void string(const std::string& key, std::string& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_string())
                fail(child(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    bool pair(const std::string& key, double& a, double& b)
    {
        const json* v = find(key);
        if (!v)
            return false;
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
            fail(child(key), "expected [number, number]");
        a = (*v)[0].get<double>();
        b = (*v)[1].get<double>();
        return true;
    }

    void number_list(const std::string& key, std::vector<double>& out, bool allow_inf = false)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_array() || v->empty())
            fail(child(key), "expected a non-empty array of numbers");
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& e = (*v)[i];
            if (e.is_number())
                out.push_back(e.get<double>());
            else if (allow_inf && e.is_string() && e.get<std::string>() == "inf")
                out.push_back(std::numeric_limits<double>::infinity());
            else
                fail(child(key) + "[" + std::to_string(i) + "]", allow_inf ? "expected a number or \"inf\"" : "expected a number");
        }
    }

    template <class F>
    void object(const std::string& key, F&& f)
    {
        if (const json* v = find(key)) {
            ObjectReader sub(*v, child(key));
            f(sub);
            sub.finish();
        }
    }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key))
                fail(child(key), "unknown key");
    }

    const std::string& path() const { return path_; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

AngularDirection direction(ObjectReader& r, const std::string& key, const AngularDirection& fallback)
{
    double az = rad_to_deg(fallback.az()), el = rad_to_deg(fallback.el());
    if (!r.pair(key, az, el))
        return fallback;
    try {
        return AngularDirection::from_degrees(az, el);
    } catch (const std::invalid_argument& e) {
        ObjectReader::fail(r.child(key), e.what());
    }
}

void read_rect(ObjectReader& r, const std::string& key, AngularRect& rect)
{
    r.object(key, [&](ObjectReader& o) {
        double lo = rad_to_deg(rect.az_lo), hi = rad_to_deg(rect.az_hi);
        if (o.pair("az", lo, hi)) {
            rect.az_lo = deg_to_rad(lo);
            rect.az_hi = deg_to_rad(hi);
        }
        lo = rad_to_deg(rect.el_lo);
        hi = rad_to_deg(rect.el_hi);
        if (o.pair("el", lo, hi)) {
            rect.el_lo = deg_to_rad(lo);
            rect.el_hi = deg_to_rad(hi);
        }
    });
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

ScenarioConfig scenario_from_json(const json& doc)
{
    ScenarioConfig cfg;
    ObjectReader root(doc, "");

    root.object("system", [&](ObjectReader& r) {
        double ghz = cfg.system.carrier_freq_hz / 1e9;
        r.number("carrier_freq_ghz", ghz);
        cfg.system.carrier_freq_hz = ghz * 1e9;
        double mhz = cfg.system.bandwidth_hz / 1e6;
        r.number("bandwidth_mhz", mhz);
        cfg.system.bandwidth_hz = mhz * 1e6;
        double dbm = to_db(cfg.system.pulse_power_w) + 30.0;
        r.number("pulse_power_dbm", dbm);
        cfg.system.pulse_power_w = dbm_to_watts(dbm);
        double ms = cfg.system.pri_s * 1e3;
        r.number("pri_ms", ms);
        cfg.system.pri_s = ms / 1e3;
        double gain_db = to_db(cfg.system.feeder_gain);
        r.number("feeder_gain_db", gain_db);
        cfg.system.feeder_gain = db_to_linear(gain_db);
        r.number("feeder_distance_m", cfg.system.feeder_distance_m);
        cfg.system.feeder_direction = direction(r, "feeder_direction_deg", cfg.system.feeder_direction);
        double noise_dbm_hz = to_db(cfg.system.radar_noise_var) + 30.0;
        r.number("radar_noise_dbm_per_hz", noise_dbm_hz);
        cfg.system.radar_noise_var = dbm_to_watts(noise_dbm_hz);
    });
    // Keep exact defaults when the keys were absent (dB round trips are inexact).
    if (!doc.contains("system")) {
        cfg.system = SystemParams{};
    }

    root.object("arrays", [&](ObjectReader& r) {
        r.integer("ris_elements", cfg.ris_elements);
        r.integer("rad_elements", cfg.rad_elements);
    });

    root.object("targets", [&](ObjectReader& r) {
        r.number("range_m", cfg.target_range_m);
        cfg.target_tr = direction(r, "tr_direction_deg", cfg.target_tr);
        if (r.find("re_direction_deg") == nullptr)
            cfg.target_re = mirror_direction(cfg.target_tr);
        else
            cfg.target_re = direction(r, "re_direction_deg", cfg.target_re);
        double lo = cfg.doppler_tr_lo_hz / 1e3, hi = cfg.doppler_tr_hi_hz / 1e3;
        if (r.pair("doppler_tr_khz", lo, hi)) {
            cfg.doppler_tr_lo_hz = lo * 1e3;
            cfg.doppler_tr_hi_hz = hi * 1e3;
        }
        lo = cfg.doppler_re_lo_hz / 1e3;
        hi = cfg.doppler_re_hi_hz / 1e3;
        if (r.pair("doppler_re_khz", lo, hi)) {
            cfg.doppler_re_lo_hz = lo * 1e3;
            cfg.doppler_re_hi_hz = hi * 1e3;
        }
        std::string sampling = cfg.doppler_sampling == DopplerSampling::grid ? "grid" : "uniform";
        r.string("doppler_sampling", sampling);
        if (sampling == "grid")
            cfg.doppler_sampling = DopplerSampling::grid;
        else if (sampling == "uniform")
            cfg.doppler_sampling = DopplerSampling::uniform;
        else
            ObjectReader::fail(r.child("doppler_sampling"), "expected \"uniform\" or \"grid\"");
        r.number_list("rcs_m2", cfg.rcs_m2);
    });

    root.object("codes", [&](ObjectReader& r) {
        if (const json* v = r.find("pulses_per_cpi")) {
            if (!v->is_array() || v->empty())
                ObjectReader::fail(r.child("pulses_per_cpi"), "expected a non-empty array of integers");
            cfg.pulses_per_cpi.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!(*v)[i].is_number_integer())
                    ObjectReader::fail(r.child("pulses_per_cpi") + "[" + std::to_string(i) + "]", "expected an integer");
                cfg.pulses_per_cpi.push_back((*v)[i].get<int>());
            }
        }
        r.integer("slot_pulses", cfg.radar_comm.slot_pulses);
        r.integer("bits_per_slot", cfg.radar_comm.bits);
        std::string order = to_string(cfg.column_order);
        r.string("column_order", order);
        try {
            cfg.column_order = parse_column_order(order);
        } catch (const ConfigError& e) {
            ObjectReader::fail(r.child("column_order"), e.what());
        }
    });

    root.object("users", [&](ObjectReader& r) {
        r.integer("paths", cfg.user_tr.paths);
        r.integer("taps", cfg.user_tr.taps);
        double us = cfg.user_tr.delay_min_s * 1e6;
        r.number("delay_min_us", us);
        cfg.user_tr.delay_min_s = us * 1e-6;
        r.number("path_variance", cfg.user_tr.path_variance);
        cfg.user_re.paths = cfg.user_tr.paths;
        cfg.user_re.taps = cfg.user_tr.taps;
        cfg.user_re.delay_min_s = cfg.user_tr.delay_min_s;
        cfg.user_re.path_variance = cfg.user_tr.path_variance;
        read_rect(r, "tr_departure_deg", cfg.user_tr.departure);
        read_rect(r, "re_departure_deg", cfg.user_re.departure);
    });

    root.object("comm", [&](ObjectReader& r) {
        r.number_list("snr_db", cfg.snr_db, true);
        if (const json* v = r.find("rates")) {
            if (!v->is_array() || v->empty())
                ObjectReader::fail(r.child("rates"), "expected a non-empty array");
            cfg.rates.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                ObjectReader item((*v)[i], r.child("rates") + "[" + std::to_string(i) + "]");
                CommRate rate;
                item.integer("slot_pulses", rate.slot_pulses);
                item.integer("bits_per_slot", rate.bits);
                item.finish();
                cfg.rates.push_back(rate);
            }
        }
        r.integer("slots_per_cell", cfg.ber_slots);
    });

    root.object("detector", [&](ObjectReader& r) {
        r.integer("doppler_oversampling", cfg.doppler_oversampling);
        r.number("false_alarm_target", cfg.fa_target);
        std::string counting = to_string(cfg.fa_counting);
        r.string("fa_counting", counting);
        try {
            cfg.fa_counting = parse_fa_counting(counting);
        } catch (const ConfigError& e) {
            ObjectReader::fail(r.child("fa_counting"), e.what());
        }
        if (const json* v = r.find("penalty")) {
            if (v->is_string() && v->get<std::string>() == "calibrate")
                cfg.penalty.reset();
            else if (v->is_number())
                cfg.penalty = v->get<double>();
            else
                ObjectReader::fail(r.child("penalty"), "expected a number or \"calibrate\"");
        }
        r.integer("calibration_trials", cfg.calibration_trials);
    });

    root.object("radar", [&](ObjectReader& r) { r.integer("trials_per_cell", cfg.radar_trials); });

    root.integer("seed", cfg.seed);
    root.finish();

    validate(cfg);
    return cfg;
}

void validate(const ScenarioConfig& cfg)
{
    auto fail = [](const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); };

    try {
        cfg.system.validate();
    } catch (const ConfigError& e) {
        fail("system", e.what());
    }
    for (auto [n, name] : {std::pair{cfg.ris_elements, "arrays.ris_elements"}, {cfg.rad_elements, "arrays.rad_elements"}}) {
        try {
            ArrayGeometry geom(n);
        } catch (const std::invalid_argument& e) {
            fail(name, e.what());
        }
    }
    if (!(cfg.target_range_m > 0.0))
        fail("targets.range_m", "must be positive");
    if (half_space_of(cfg.target_tr) != Side::transmissive)
        fail("targets.tr_direction_deg", "must lie in the transmissive half-space (90, 270) deg");
    const AngularDirection mirrored = mirror_direction(cfg.target_tr);
    if (std::abs(mirrored.az() - cfg.target_re.az()) > 1e-9 || std::abs(mirrored.el() - cfg.target_re.el()) > 1e-9)
        fail("targets.re_direction_deg", "must mirror tr_direction_deg ([180 - az; el])");

    const double nyquist = 0.5 / cfg.system.pri_s;
    const double slack = 1e-12 * nyquist;
    auto check_band = [&](double lo, double hi, const char* name) {
        if (!(lo < hi))
            fail(name, "interval is empty");
        if (lo < -nyquist - slack || hi > nyquist + slack)
            fail(name, "exceeds the unambiguous interval (-1/(2T), 1/(2T)) = +-" + fmt(nyquist / 1e3) + " kHz");
    };
    check_band(cfg.doppler_tr_lo_hz, cfg.doppler_tr_hi_hz, "targets.doppler_tr_khz");
    check_band(cfg.doppler_re_lo_hz, cfg.doppler_re_hi_hz, "targets.doppler_re_khz");
    if (cfg.rcs_m2.empty())
        fail("targets.rcs_m2", "must not be empty");
    for (double rcs : cfg.rcs_m2)
        if (!(rcs >= 0.0) || !std::isfinite(rcs))
            fail("targets.rcs_m2", "values must be finite and non-negative");

    if (cfg.pulses_per_cpi.empty())
        fail("codes.pulses_per_cpi", "must not be empty");
    const int m = cfg.radar_comm.slot_pulses;
    const int b = cfg.radar_comm.bits;
    if (!is_power_of_two(m) || b < 0 || (2LL << b) > m)
        fail("codes.slot_pulses", "need M a power of 2 with M >= 2^(b+1)");
    for (int p : cfg.pulses_per_cpi) {
        if (!is_power_of_two(p) || p < 2)
            fail("codes.pulses_per_cpi", std::to_string(p) + " is not a power of 2 (>= 2)");
        if (p % m != 0)
            fail("codes.pulses_per_cpi", "P=" + std::to_string(p) + " is not a multiple of M=" + std::to_string(m));
    }

    try {
        cfg.user_tr.validate(cfg.system);
    } catch (const ConfigError& e) {
        fail("users.tr_departure_deg", e.what());
    }
    try {
        cfg.user_re.validate(cfg.system);
    } catch (const ConfigError& e) {
        fail("users.re_departure_deg", e.what());
    }
    if (cfg.user_tr.side != Side::transmissive || cfg.user_re.side != Side::reflective)
        fail("users", "side assignment is inconsistent");

    if (cfg.snr_db.empty())
        fail("comm.snr_db", "must not be empty");
    for (double snr : cfg.snr_db)
        if (std::isnan(snr) || snr == -std::numeric_limits<double>::infinity())
            fail("comm.snr_db", "values must be numbers or +inf");
    if (cfg.rates.empty())
        fail("comm.rates", "must not be empty");
    for (const CommRate& r : cfg.rates)
        if (!is_power_of_two(r.slot_pulses) || r.bits < 1 || (2LL << r.bits) > r.slot_pulses)
            fail("comm.rates", "(M=" + std::to_string(r.slot_pulses) + ", b=" + std::to_string(r.bits) +
                                   ") needs M a power of 2, b >= 1 and M >= 2^(b+1)");
    if (cfg.ber_slots == 0)
        fail("comm.slots_per_cell", "must be positive");

    if (cfg.doppler_oversampling < 1)
        fail("detector.doppler_oversampling", "must be >= 1");
    if (!(cfg.fa_target > 0.0 && cfg.fa_target < 1.0))
        fail("detector.false_alarm_target", "must lie in (0, 1)");
    if (cfg.penalty && !(*cfg.penalty > 0.0))
        fail("detector.penalty", "must be positive");
    if (cfg.calibration_trials == 0)
        fail("detector.calibration_trials", "must be positive");
    if (cfg.radar_trials == 0)
        fail("radar.trials_per_cell", "must be positive");
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json doc;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    return scenario_from_json(doc);
}

json scenario_to_json(const ScenarioConfig& cfg)
{
    auto deg = [](const AngularDirection& d) { return json::array({rad_to_deg(d.az()), rad_to_deg(d.el())}); };
    auto rect = [](const AngularRect& r) {
        return json{{"az", {rad_to_deg(r.az_lo), rad_to_deg(r.az_hi)}}, {"el", {rad_to_deg(r.el_lo), rad_to_deg(r.el_hi)}}};
    };
    json rates = json::array();
    for (const CommRate& r : cfg.rates)
        rates.push_back({{"slot_pulses", r.slot_pulses}, {"bits_per_slot", r.bits}});
    json snr = json::array();
    for (double s : cfg.snr_db)
        snr.push_back(std::isinf(s) ? json("inf") : json(s));

    return json{
        {"system",
         {{"carrier_freq_ghz", cfg.system.carrier_freq_hz / 1e9},
          {"bandwidth_mhz", cfg.system.bandwidth_hz / 1e6},
          {"pulse_power_dbm", to_db(cfg.system.pulse_power_w) + 30.0},
          {"pri_ms", cfg.system.pri_s * 1e3},
          {"feeder_gain_db", to_db(cfg.system.feeder_gain)},
          {"feeder_distance_m", cfg.system.feeder_distance_m},
          {"feeder_direction_deg", deg(cfg.system.feeder_direction)},
          {"radar_noise_dbm_per_hz", to_db(cfg.system.radar_noise_var) + 30.0}}},
        {"arrays", {{"ris_elements", cfg.ris_elements}, {"rad_elements", cfg.rad_elements}}},
        {"targets",
         {{"range_m", cfg.target_range_m},
          {"tr_direction_deg", deg(cfg.target_tr)},
          {"re_direction_deg", deg(cfg.target_re)},
          {"doppler_tr_khz", {cfg.doppler_tr_lo_hz / 1e3, cfg.doppler_tr_hi_hz / 1e3}},
          {"doppler_re_khz", {cfg.doppler_re_lo_hz / 1e3, cfg.doppler_re_hi_hz / 1e3}},
          {"doppler_sampling", cfg.doppler_sampling == DopplerSampling::grid ? "grid" : "uniform"},
          {"rcs_m2", cfg.rcs_m2}}},
        {"codes",
         {{"pulses_per_cpi", cfg.pulses_per_cpi},
          {"slot_pulses", cfg.radar_comm.slot_pulses},
          {"bits_per_slot", cfg.radar_comm.bits},
          {"column_order", to_string(cfg.column_order)}}},
        {"users",
         {{"paths", cfg.user_tr.paths},
          {"taps", cfg.user_tr.taps},
          {"delay_min_us", cfg.user_tr.delay_min_s * 1e6},
          {"path_variance", cfg.user_tr.path_variance},
          {"tr_departure_deg", rect(cfg.user_tr.departure)},
          {"re_departure_deg", rect(cfg.user_re.departure)}}},
        {"comm", {{"snr_db", snr}, {"rates", rates}, {"slots_per_cell", cfg.ber_slots}}},
        {"detector",
         {{"doppler_oversampling", cfg.doppler_oversampling},
          {"false_alarm_target", cfg.fa_target},
          {"fa_counting", to_string(cfg.fa_counting)},
          {"penalty", cfg.penalty ? json(*cfg.penalty) : json("calibrate")},
          {"calibration_trials", cfg.calibration_trials}}},
        {"radar", {{"trials_per_cell", cfg.radar_trials}}},
        {"seed", cfg.seed},
    };
}

Scene build_scene(const ScenarioConfig& cfg)
{
    const ArrayGeometry ris(cfg.ris_elements);
    const ArrayGeometry rad(cfg.rad_elements);
    const cvec g = feeder_ris_channel(cfg.system, ris);
    SpatialBeamformer s_tr = design_spatial_beamformer(g, cfg.target_tr, ris, Side::transmissive);
    SpatialBeamformer s_re = design_spatial_beamformer(g, cfg.target_re, ris, Side::reflective);
    cvec s_rad = design_pesa_beamformer(cfg.target_tr, rad);
    const auto gamma_tr = radar_gain_coefficient(cfg.target_tr, s_tr, s_rad, g, cfg.system, ris, rad);
    const auto gamma_re = radar_gain_coefficient(cfg.target_re, s_re, s_rad, g, cfg.system, ris, rad);
    const ReferenceLink reference = reference_link(cfg.system, ris, g, s_re, cfg.user_re);
    return Scene{cfg.system, ris, rad, g, std::move(s_tr), std::move(s_re), std::move(s_rad), gamma_tr, gamma_re, reference};
}

DetectionSetup detection_setup(const ScenarioConfig& cfg, int pulses, bool with_comm)
{
    const double pri = cfg.system.pri_s;
    CodePlan plan = with_comm ? CodePlan::with_comm(pulses, cfg.radar_comm.slot_pulses, cfg.radar_comm.bits, cfg.column_order)
                              : CodePlan::radar_only(pulses);
    return DetectionSetup{
        std::move(plan),
        DopplerGrid::for_cpi(cfg.doppler_tr_lo_hz, cfg.doppler_tr_hi_hz, pulses, pri, cfg.doppler_oversampling),
        DopplerGrid::for_cpi(cfg.doppler_re_lo_hz, cfg.doppler_re_hi_hz, pulses, pri, cfg.doppler_oversampling),
        NoiseCovariance::scaled_identity(pulses, cfg.system.radar_noise_var),
        pri,
    };
}

std::string calibration_key(const ScenarioConfig& cfg, int pulses, bool with_comm)
{
    const int m = with_comm ? cfg.radar_comm.slot_pulses : pulses;
    const int b = with_comm ? cfg.radar_comm.bits : 0;
    std::ostringstream key;
    key << "P=" << pulses << " M=" << m << " b=" << b << " order=" << (with_comm ? to_string(cfg.column_order) : "none")
        << " grid_tr=" << fmt(cfg.doppler_tr_lo_hz) << ":" << fmt(cfg.doppler_tr_hi_hz)
        << " grid_re=" << fmt(cfg.doppler_re_lo_hz) << ":" << fmt(cfg.doppler_re_hi_hz)
        << " oversampling=" << cfg.doppler_oversampling << " T=" << fmt(cfg.system.pri_s)
        << " sigma2=" << fmt(cfg.system.radar_noise_var) << " fa_counting=" << to_string(cfg.fa_counting)
        << " target=" << fmt(cfg.fa_target) << " seed=" << cfg.seed;
    return key.str();
}

} // namespace starisac
