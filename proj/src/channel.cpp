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


#include "starisac/channel.hpp"

#include "starisac/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace starisac {

using std::numbers::pi;

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void SystemParams::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be positive and finite");
    };
    positive(carrier_freq_hz, "carrier frequency");
    positive(bandwidth_hz, "bandwidth");
    positive(pri_s, "PRI");
    positive(pulse_power_w, "pulse power");
    positive(feeder_gain, "feeder gain");
    positive(feeder_distance_m, "feeder distance");
    positive(radar_noise_var, "radar noise variance");
    if (pulses_per_cpi <= 0)
        throw ConfigError("pulses per CPI must be positive");
    if (pulse_width() > pri_s / 10.0)
        throw ConfigError("pulse width 1/B must not exceed PRI/10");
}

AngularRect AngularRect::from_degrees(double az_lo, double az_hi, double el_lo, double el_hi)
{
    return {deg_to_rad(az_lo), deg_to_rad(az_hi), deg_to_rad(el_lo), deg_to_rad(el_hi)};
}

AngularDirection AngularRect::center() const
{
    return AngularDirection::from_radians(0.5 * (az_lo + az_hi), 0.5 * (el_lo + el_hi));
}

double UserSideConfig::delay_max_s(const SystemParams& params) const noexcept
{
    return delay_min_s + (taps - 1) / params.bandwidth_hz;
}

void UserSideConfig::validate(const SystemParams& params) const
{
    if (paths < 1)
        throw ConfigError("user paths K must be >= 1");
    if (taps < 1)
        throw ConfigError("user taps L must be >= 1");
    if (!(path_variance > 0.0))
        throw ConfigError("user path variance must be positive");
    if (delay_min_s < 0.0)
        throw ConfigError("minimum user delay must be non-negative");
    if (delay_max_s(params) > params.pri_s - 2.0 * params.pulse_width())
        throw ConfigError("user delay grid exceeds T - 2/B");
    if (!(departure.az_lo < departure.az_hi) || !(departure.el_lo < departure.el_hi))
        throw ConfigError("user departure rectangle is empty");
    const bool tr = side == Side::transmissive;
    const bool az_ok = tr ? (departure.az_lo >= pi / 2 && departure.az_hi <= 3 * pi / 2)
                          : (departure.az_lo >= -pi / 2 && departure.az_hi <= pi / 2);
    const bool el_ok = departure.el_lo >= -pi / 2 && departure.el_hi <= pi / 2;
    if (!az_ok || !el_ok)
        throw ConfigError(std::string("user departure rectangle is not inside the ") + to_string(side) +
                          " half-space");
}

cvec feeder_ris_channel(const SystemParams& params, const ArrayGeometry& ris)
{
    const double scale = std::sqrt(params.feeder_gain * element_gain(params.feeder_direction)) *
                         params.wavelength() / (4.0 * pi * params.feeder_distance_m);
    return scale * steering_vector(ris, params.feeder_direction);
}

double target_amplitude_variance(double rcs_m2, double range_m)
{
    if (!(rcs_m2 >= 0.0))
        throw std::invalid_argument("RCS must be non-negative");
    if (!(range_m > 0.0))
        throw std::invalid_argument("target range must be positive");
    const double four_pi = 4.0 * pi;
    return rcs_m2 / (four_pi * four_pi * std::pow(range_m, 4));
}

std::complex<double> draw_target_amplitude(double rcs_m2, double range_m, Rng& rng)
{
    const double variance = target_amplitude_variance(rcs_m2, range_m);
    if (variance == 0.0)
        return {0.0, 0.0};
    return rng.complex_normal(variance);
}

double pulse_autocorr(double t, double pulse_width) noexcept
{
    const double x = std::abs(t) / pulse_width;
    return x < 1.0 ? 1.0 - x : 0.0;
}

std::vector<UserPath> draw_user_paths(const UserSideConfig& cfg, const SystemParams& params, Rng& rng)
{
    std::vector<UserPath> paths;
    paths.reserve(static_cast<std::size_t>(cfg.paths));
    const double step = 1.0 / params.bandwidth_hz;
    for (int k = 0; k < cfg.paths; ++k) {
        const auto tap = rng.uniform_index(static_cast<std::uint64_t>(cfg.taps));
        const double delay = cfg.delay_min_s + static_cast<double>(tap) * step;
        const double az = rng.uniform(cfg.departure.az_lo, cfg.departure.az_hi);
        const double el = rng.uniform(cfg.departure.el_lo, cfg.departure.el_hi);
        const auto amplitude = rng.complex_normal(cfg.path_variance);
        paths.push_back({amplitude, delay, AngularDirection::from_radians(az, el)});
    }
    return paths;
}

cvec user_channel_taps(std::span<const UserPath> paths, const cvec& side_weights, const cvec& g,
                       const ArrayGeometry& ris, const UserSideConfig& cfg, const SystemParams& params)
{
    const double b = params.bandwidth_hz;
    const double delta = params.pulse_width();
    const cvec gs = g.cwiseProduct(side_weights);
    cvec beta = cvec::Zero(cfg.taps);
    for (const UserPath& path : paths) {
        // Offset of tap 0 from the path delay, in samples. Grid delays land
        // within rounding of an integer; snap them so r_psi vanishes exactly.
        double shift = (path.delay_s - cfg.delay_min_s) * b;
        if (const double r = std::round(shift); std::abs(shift - r) < 1e-9)
            shift = r;
        std::complex<double> pattern;
        bool pattern_ready = false;
        for (int l = 0; l < cfg.taps; ++l) {
            const double offset = (static_cast<double>(l) - shift) * delta;
            const double weight = pulse_autocorr(offset, delta);
            if (weight == 0.0)
                continue;
            if (!pattern_ready) {
                pattern = steering_vector(ris, path.departure).transpose() * gs;
                pattern *= std::sqrt(params.pulse_energy() * element_gain(path.departure));
                pattern_ready = true;
            }
            beta[l] += path.amplitude * weight * pattern;
        }
    }
    return beta;
}

} // namespace starisac
