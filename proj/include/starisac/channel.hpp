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

#include "starisac/geometry.hpp"
#include "starisac/rng.hpp"

#include <complex>
#include <span>
#include <vector>

namespace starisac {

inline constexpr double kSpeedOfLight = 299792458.0;

double db_to_linear(double db) noexcept;
double dbm_to_watts(double dbm) noexcept;

/// Physical parameters shared by the radar and communication paths.
/// Defaults reproduce the reference scenario (28 GHz, 50 MHz, 30 dBm,
/// T = 0.25 ms, G_f = 20 dB, d_f = 3 m, feeder at [-45; 0] deg,
/// -164 dBm/Hz radar noise).
struct SystemParams {
    double carrier_freq_hz = 28e9;
    double bandwidth_hz = 50e6;
    double pri_s = 0.25e-3;
    int pulses_per_cpi = 16;
    double pulse_power_w = 1.0;
    double feeder_gain = 100.0;
    double feeder_distance_m = 3.0;
    AngularDirection feeder_direction = AngularDirection::from_degrees(-45.0, 0.0);
    /// Per slow-time sample noise variance of the radar channel [W].
    double radar_noise_var = 3.981071705534973e-20;

    double wavelength() const noexcept { return kSpeedOfLight / carrier_freq_hz; }
    /// Delta = 1/B exactly.
    double pulse_width() const noexcept { return 1.0 / bandwidth_hz; }
    /// P * Delta: energy of one emitted pulse.
    double pulse_energy() const noexcept { return pulse_power_w * pulse_width(); }

    /// Throws ConfigError when a quantity is non-positive or Delta > T/10.
    void validate() const;
};

/// Open azimuth/elevation rectangle in radians.
struct AngularRect {
    double az_lo = 0, az_hi = 0, el_lo = 0, el_hi = 0;

    static AngularRect from_degrees(double az_lo, double az_hi, double el_lo, double el_hi);
    AngularDirection center() const;
};

/// Multipath model of the link from the STAR-RIS to one user.
struct UserSideConfig {
    Side side = Side::reflective;
    int paths = 3;              ///< K
    int taps = 15;              ///< L
    double delay_min_s = 0.0;   ///< tau_min
    AngularRect departure;      ///< angles of departure, inside the side's half-space
    double path_variance = 1.0; ///< sigma_u^2

    /// tau_min + (L-1)/B: last point of the delay grid.
    double delay_max_s(const SystemParams& params) const noexcept;
    void validate(const SystemParams& params) const;
};

struct UserPath {
    std::complex<double> amplitude;
    double delay_s;
    AngularDirection departure;
};

/// g = sqrt(G_f G_ris(phi_f)) * lambda / (4 pi d_f) * u_ris(phi_f).
cvec feeder_ris_channel(const SystemParams& params, const ArrayGeometry& ris);

/// Swerling I amplitude: CN(0, rcs / ((4 pi)^2 range^4)); rcs == 0 gives 0.
std::complex<double> draw_target_amplitude(double rcs_m2, double range_m, Rng& rng);
double target_amplitude_variance(double rcs_m2, double range_m);

/// Autocorrelation of a unit-energy rectangular pulse of width Delta.
double pulse_autocorr(double t, double pulse_width) noexcept;

/// K paths with delays on {tau_min + l/B}, angles uniform over the
/// departure rectangle and CN(0, sigma_u^2) amplitudes.
std::vector<UserPath> draw_user_paths(const UserSideConfig& cfg, const SystemParams& params, Rng& rng);

/// Discrete-time taps beta(l), l = 0..L-1, of the feeder -> STAR-RIS -> user
/// channel seen through the matched filter. `side_weights` is the spatial
/// beamformer of the user's half-space.
cvec user_channel_taps(std::span<const UserPath> paths, const cvec& side_weights, const cvec& g,
                       const ArrayGeometry& ris, const UserSideConfig& cfg, const SystemParams& params);

} // namespace starisac
