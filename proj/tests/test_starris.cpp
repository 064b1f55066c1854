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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "starisac/channel.hpp"
#include "starisac/radar.hpp"
#include "starisac/starris.hpp"

#include <cmath>
#include <numbers>

using namespace starisac;

namespace {

AngularDirection deg(double az, double el) { return AngularDirection::from_degrees(az, el); }

} // namespace

TEST_CASE("spatial beamformer design")
{
    const SystemParams p;
    const ArrayGeometry ris(256);
    const cvec g = feeder_ris_channel(p, ris);
    const auto target = deg(20, 0);
    const auto s = design_spatial_beamformer(g, target, ris, Side::reflective);
    CHECK((s.weights.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);

    const auto value = ris_beampattern_gain(s, g, target, ris);
    CHECK(std::abs(value.imag()) < 1e-12 * value.real());
    CHECK(value.real() == doctest::Approx(256 * std::abs(g(0))).epsilon(1e-12));
    CHECK(value.real() == doctest::Approx(g.cwiseAbs().sum()).epsilon(1e-12));

    CHECK_THROWS_AS(design_spatial_beamformer(g, target, ris, Side::transmissive), std::invalid_argument);

    const ArrayGeometry small(16);
    const auto ones = design_spatial_beamformer(cvec::Ones(16), deg(0, 0), small, Side::reflective);
    CHECK((ones.weights - cvec::Ones(16)).norm() < 1e-15);
}

TEST_CASE("beampattern bounds and single element")
{
    const SystemParams p;
    const ArrayGeometry ris(64);
    const cvec g = feeder_ris_channel(p, ris);
    const auto s = design_spatial_beamformer(g, deg(160, 5), ris, Side::transmissive);
    const double peak = g.cwiseAbs().sum();
    for (double az = 95; az < 265; az += 7)
        for (double el = -60; el <= 60; el += 15)
            CHECK(std::abs(ris_beampattern_gain(s, g, deg(az, el), ris)) <= peak * (1 + 1e-12));

    // Matched design beats any other unit-modulus weighting at the target.
    Rng rng(5, 0, 0, 0);
    const double matched = std::abs(ris_beampattern_gain(s, g, deg(160, 5), ris));
    for (int k = 0; k < 50; ++k) {
        SpatialBeamformer other{Side::transmissive, cvec(64)};
        for (Eigen::Index n = 0; n < 64; ++n)
            other.weights(n) = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
        CHECK(std::abs(ris_beampattern_gain(other, g, deg(160, 5), ris)) < matched);
    }

    const ArrayGeometry one(1);
    const cvec g1 = feeder_ris_channel(p, one);
    const auto s1 = design_spatial_beamformer(g1, deg(30, 10), one, Side::reflective);
    const auto v = ris_beampattern_gain(s1, g1, deg(30, 10), one);
    CHECK(v == g1(0) * s1.weights(0) * steering_vector(one, deg(30, 10))(0));
    CHECK(std::abs(v) == doctest::Approx(std::abs(g1(0))).epsilon(1e-14));
}

TEST_CASE("radar gain coefficient closed form")
{
    const SystemParams p;
    const ArrayGeometry ris(256), rad(256);
    const cvec g = feeder_ris_channel(p, ris);
    const double lambda = p.wavelength();
    for (const auto& dir : {deg(160, 0), deg(20, 0)}) {
        const Side side = half_space_of(dir);
        const auto s = design_spatial_beamformer(g, dir, ris, side);
        const cvec s_rad = design_pesa_beamformer(dir, rad);
        const auto gamma = radar_gain_coefficient(dir, s, s_rad, g, p, ris, rad);
        const double gain = std::numbers::pi / 4 * std::pow(std::cos(dir.az()) * std::cos(dir.el()), 2);
        const double closed = std::sqrt(p.pulse_energy() * gain * gain * lambda * lambda / (4 * std::numbers::pi)) *
                              std::sqrt(256.0) * 256.0 * std::abs(g(0));
        CHECK(std::abs(std::abs(gamma) / closed - 1.0) < 1e-10);
        CHECK(std::abs(gamma) == doctest::Approx(2.16e-6).epsilon(0.01));
        CHECK_THROWS(radar_gain_coefficient(mirror_direction(dir), s, s_rad, g, p, ris, rad));
    }

    // Both mirrored targets see the same gain.
    const auto s_tr = design_spatial_beamformer(g, deg(160, 0), ris, Side::transmissive);
    const auto s_re = design_spatial_beamformer(g, deg(20, 0), ris, Side::reflective);
    const cvec s_rad = design_pesa_beamformer(deg(160, 0), rad);
    CHECK(std::abs(radar_gain_coefficient(deg(160, 0), s_tr, s_rad, g, p, ris, rad)) ==
          doctest::Approx(std::abs(radar_gain_coefficient(deg(20, 0), s_re, s_rad, g, p, ris, rad))).epsilon(1e-12));

    SystemParams loud = p;
    loud.pulse_power_w *= 4;
    CHECK(std::abs(radar_gain_coefficient(deg(160, 0), s_tr, s_rad, g, loud, ris, rad)) ==
          doctest::Approx(2 * std::abs(radar_gain_coefficient(deg(160, 0), s_tr, s_rad, g, p, ris, rad))).epsilon(1e-12));

    const auto edge = deg(90.0001, 0);
    const auto s_edge = design_spatial_beamformer(g, edge, ris, Side::transmissive);
    CHECK(std::abs(radar_gain_coefficient(edge, s_edge, design_pesa_beamformer(edge, rad), g, p, ris, rad)) < 1e-12);
}
