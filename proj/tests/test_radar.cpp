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
#include "starisac/errors.hpp"
#include "starisac/radar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace starisac;

namespace {

constexpr double kPri = 0.25e-3;

cmat random_covariance(Eigen::Index n, Rng& rng, bool diagonal)
{
    if (diagonal) {
        cmat c = cmat::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            c(i, i) = rng.uniform(0.5, 3.0);
        return c;
    }
    cmat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = rng.complex_normal();
    return a * a.adjoint() / static_cast<double>(n) + 0.2 * cmat::Identity(n, n);
}

double ks_exponential(std::vector<double> x)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = 1.0 - std::exp(-x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

} // namespace

TEST_CASE("doppler templates")
{
    const cvec c = radar_only_codes(8).tr.values;
    CHECK((doppler_template(c, 0.0, kPri) - c).norm() == 0.0);
    const cvec h = doppler_template(radar_only_codes(2).tr.values, 0.5 / kPri, kPri);
    CHECK(std::abs(h(0) - std::sqrt(0.5)) < 1e-15);
    CHECK(std::abs(h(1) + std::sqrt(0.5)) < 1e-12);
    for (double nu : {-1999.0, 13.0, 1875.5})
        CHECK(doppler_template(c, nu, kPri).squaredNorm() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK((doppler_template(c, 733.0, kPri) - oracle::template_of(c, 733.0, kPri)).norm() < 1e-13);
}

TEST_CASE("pesa beamformer")
{
    const cvec s = design_pesa_beamformer(AngularDirection::from_degrees(0, 0), ArrayGeometry(4));
    CHECK((s - 0.5 * cvec::Ones(4)).norm() < 1e-15);
    const ArrayGeometry rad(256);
    const auto dir = AngularDirection::from_degrees(160, 0);
    const cvec s_rad = design_pesa_beamformer(dir, rad);
    CHECK(std::abs(s_rad.dot(steering_vector(rad, dir)) - 16.0) < 1e-12);
    CHECK(std::abs(s_rad.dot(steering_vector(rad, mirror_direction(dir))) - 16.0) < 1e-12);
}

TEST_CASE("noise covariance")
{
    CHECK_THROWS(NoiseCovariance::from_matrix(cmat::Ones(2, 3)));
    cmat asym = cmat::Identity(3, 3);
    asym(0, 1) = 0.5;
    CHECK_THROWS(NoiseCovariance::from_matrix(asym));
    cmat indefinite = cmat::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS(NoiseCovariance::from_matrix(indefinite));
    CHECK(NoiseCovariance::from_matrix(2.5 * cmat::Identity(4, 4)).is_scaled_identity());

    const double var = SystemParams{}.radar_noise_var;
    const NoiseCovariance c = NoiseCovariance::scaled_identity(4, var);
    Rng rng(9, 0, 0, 0);
    cmat acc = cmat::Zero(4, 4);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const cvec z = c.draw(rng);
        acc += z * z.adjoint();
    }
    acc /= static_cast<double>(n);
    CHECK((acc - var * cmat::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.03 * var);

    const NoiseCovariance full = NoiseCovariance::from_matrix(random_covariance(4, rng, false));
    const cvec v = cvec::Random(4);
    CHECK((full.matrix() * full.solve(v) - v).norm() < 1e-12);
}

TEST_CASE("whitened templates")
{
    Rng rng(11, 0, 0, 0);
    const CodePair codes = radar_only_codes(8);
    const NoiseCovariance scalar = NoiseCovariance::scaled_identity(8, 4e-20);
    const NoiseCovariance full = NoiseCovariance::from_matrix(random_covariance(8, rng, false));
    for (const auto* c : {&scalar, &full}) {
        const cvec xi = whitened_template(codes.re.values, 1234.0, kPri, *c);
        CHECK(std::abs((xi.adjoint() * c->matrix() * xi)(0, 0) - 1.0) < 1e-12);
    }
    cvec unit = codes.tr.values / codes.tr.values.norm();
    CHECK((whitened_template(unit, 0.0, kPri, NoiseCovariance::scaled_identity(8, 1.0)) - unit).norm() < 1e-15);

    // |xi^H y|^2 is Exp(1) under noise only.
    std::vector<double> stat;
    for (int i = 0; i < 10000; ++i) {
        const cvec xi = whitened_template(codes.tr.values, 1900.0, kPri, full);
        stat.push_back(std::norm(xi.dot(full.draw(rng))));
    }
    CHECK(ks_exponential(stat) < 1.358 / std::sqrt(10000.0));
}

TEST_CASE("observation synthesis")
{
    const CodePair codes = radar_only_codes(16);
    const RadarLink quiet{{2e-6, 1e-6}, {1e-6, -3e-6}, kPri, NoiseCovariance::scaled_identity(16, 1e-300)};
    Rng rng(12, 0, 0, 0);
    const RadarObservation none = synth_radar_observation(quiet, RadarTruth{}, codes, rng);
    CHECK(none.samples.norm() < 1e-140);

    RadarTruth one;
    one.alpha_tr = {0.3, 0.1};
    one.doppler_tr_hz = 1800;
    const cvec expected = one.alpha_tr * quiet.gamma_tr * doppler_template(codes.tr.values, 1800, kPri);
    CHECK((synth_radar_observation(quiet, one, codes, rng).samples - expected).norm() < 1e-140 + 1e-15 * expected.norm());

    RadarTruth too_fast = one;
    too_fast.doppler_tr_hz = 2000.0;
    CHECK_THROWS(synth_radar_observation(quiet, too_fast, codes, rng));
}

TEST_CASE("doppler grids")
{
    const DopplerGrid g = DopplerGrid::for_cpi(1750, 2000, 16, kPri, 16);
    CHECK(g.size() == 16);
    CHECK(g.spacing_hz == doctest::Approx(15.625));
    CHECK(g.points.front() > 1750);
    CHECK(g.points.back() < 2000);
    CHECK(g.points.front() - 1750 == doctest::Approx(2000 - g.points.back()));
    CHECK(g.is_uniform());
    CHECK(DopplerGrid::for_cpi(1750, 2000, 8, kPri, 16).size() == 8);
    CHECK_FALSE(DopplerGrid::explicit_points({1, 5, 6}).is_uniform());
}

TEST_CASE("velocity conversion")
{
    const double lambda = SystemParams{}.wavelength();
    CHECK(doppler_to_velocity(2000, lambda) == doctest::Approx(10.71).epsilon(0.05 / 10.71));
    CHECK(doppler_to_velocity(250, lambda) == doctest::Approx(1.34).epsilon(0.02 / 1.34));
    CHECK(doppler_to_velocity(0, lambda) == 0.0);
}

TEST_CASE("detector behaviour on constructed observations")
{
    const int P = 16;
    const double var = 1e-3;
    const NoiseCovariance noise = NoiseCovariance::scaled_identity(P, var);
    const DopplerGrid grid = DopplerGrid::for_cpi(1750, 2000, P, kPri, 16);
    REQUIRE(grid.size() == 16);
    const CodePair codes = radar_only_codes(P);
    GicDetector det(grid, grid, noise, kPri);
    det.set_codes(codes);

    Rng rng(21, 0, 0, 0);
    const cvec y0 = noise.draw(rng);
    const double total = y0.squaredNorm() / var;
    CHECK(det.detect(y0, total + 1.0).hypothesis == Hypothesis::h0);
    CHECK(det.detect(y0, 0.0).hypothesis != Hypothesis::h0);

    const double nu0 = grid.points[5];
    const cvec single = 3.0 * doppler_template(codes.tr.values, nu0, kPri);
    const auto r1 = det.detect(single, 10.0);
    CHECK(r1.hypothesis == Hypothesis::h1_tr);
    REQUIRE(r1.doppler_tr_hz);
    CHECK(*r1.doppler_tr_hz == nu0);
    CHECK(det.statistics(single).single_tr == doctest::Approx(9.0 * P / 2 / var).epsilon(1e-12));

    // Two targets at zero Doppler: orthogonal templates, joint statistic splits.
    const DopplerGrid zero = DopplerGrid::explicit_points({0.0});
    GicDetector det0(zero, zero, noise, kPri);
    det0.set_codes(codes);
    const cvec both = 2.0 * codes.tr.values + std::complex<double>(0, 1.5) * codes.re.values;
    const auto s = det0.statistics(both);
    CHECK(s.joint == doctest::Approx(s.single_tr + s.single_re).epsilon(1e-12));
    CHECK(det0.detect(both, 1.0).hypothesis == Hypothesis::h2);

    // Tie rule: equal objectives prefer fewer targets.
    CHECK(select_hypothesis({5.0, 5.0, 10.0}, 5.0) == Hypothesis::h0);
    CHECK(select_hypothesis({6.0, 6.0, 10.0}, 5.0) == Hypothesis::h1_tr);
    CHECK(select_hypothesis({5.0, 6.0, 11.0}, 5.0) == Hypothesis::h1_re);
}

TEST_CASE("detector matches exhaustive evaluation")
{
    Rng rng(31, 0, 0, 0);
    int counts[4] = {};
    for (int trial = 0; trial < 400; ++trial) {
        const int P = trial % 2 ? 8 : 4;
        const int mode = trial % 4; // scalar, diagonal, full covariance
        NoiseCovariance noise = NoiseCovariance::scaled_identity(P, rng.uniform(0.5, 2.0));
        if (mode == 1)
            noise = NoiseCovariance::from_matrix(random_covariance(P, rng, true));
        else if (mode >= 2)
            noise = NoiseCovariance::from_matrix(random_covariance(P, rng, false));

        const std::size_t n_tr = 1 + rng.uniform_index(4), n_re = 1 + rng.uniform_index(4);
        const DopplerGrid grid_tr = trial % 3 == 0 ? DopplerGrid::uniform(-1900, 1900, 3800.0 / static_cast<double>(n_tr))
                                                   : DopplerGrid::for_cpi(1750, 2000, P, kPri, 1);
        std::vector<double> pts;
        for (std::size_t k = 0; k < n_re; ++k)
            pts.push_back(rng.uniform(-1999, 1999));
        const DopplerGrid grid_re = DopplerGrid::explicit_points(pts);

        const CodePair codes = trial % 5 < 2 ? radar_only_codes(P)
                                             : CodePlan::with_comm(P, 4, 1, ColumnOrder::reversed_tr).draw(rng);
        RadarTruth truth;
        truth.alpha_tr = rng.uniform() < 0.6 ? rng.complex_normal(rng.uniform(0.0, 8.0)) : 0.0;
        truth.alpha_re = rng.uniform() < 0.6 ? rng.complex_normal(rng.uniform(0.0, 8.0)) : 0.0;
        truth.doppler_tr_hz = rng.uniform(-1999, 1999);
        truth.doppler_re_hz = rng.uniform(-1999, 1999);
        const RadarLink link{1.0, 1.0, kPri, noise};
        const cvec y = synth_radar_observation(link, truth, codes, rng).samples;
        const double penalty = rng.uniform(0.5, 6.0);

        GicDetector det(grid_tr, grid_re, noise, kPri);
        det.set_codes(codes);
        const DetectionResult got = det.detect(y, penalty);
        const auto want = oracle::exhaustive_gic(y, codes, grid_tr.points, grid_re.points, noise.matrix(), kPri, penalty);
        ++counts[static_cast<int>(want.hypothesis)];
        CHECK(got.hypothesis == want.hypothesis);
        CHECK(got.doppler_tr_hz == want.nu_tr);
        CHECK(got.doppler_re_hz == want.nu_re);
        for (int k = 0; k < 4; ++k)
            if (std::isfinite(want.objective[k]))
                CHECK(got.objective[k] == doctest::Approx(want.objective[k]).epsilon(1e-8).scale(1.0));
        CHECK(det.declares_target(y, penalty) == (want.hypothesis != Hypothesis::h0));
        const double eta_star = det.critical_penalty(y);
        CHECK(det.detect(y, eta_star * (1 + 1e-9)).hypothesis == Hypothesis::h0);
        if (eta_star > 0)
            CHECK(det.detect(y, eta_star * (1 - 1e-9)).hypothesis != Hypothesis::h0);
    }
    for (int c : counts)
        CHECK(c > 10);
}

TEST_CASE("uniform-grid fast path agrees with the generic path")
{
    Rng rng(41, 0, 0, 0);
    const int P = 16;
    const DopplerGrid grid = DopplerGrid::for_cpi(1750, 2000, P, kPri, 16);
    // A non-scalar covariance that is numerically a scaled identity forces the generic path.
    cmat almost = 2.0 * cmat::Identity(P, P);
    almost(0, 1) = almost(1, 0) = 1e-13;
    const NoiseCovariance fast = NoiseCovariance::scaled_identity(P, 2.0);
    const NoiseCovariance slow = NoiseCovariance::from_matrix(almost);
    REQUIRE_FALSE(slow.is_scaled_identity());
    const CodePlan plan = CodePlan::with_comm(P, 4, 1, ColumnOrder::reversed_tr);
    for (int trial = 0; trial < 200; ++trial) {
        const CodePair codes = plan.draw(rng);
        GicDetector a(grid, grid, fast, kPri), b(grid, grid, slow, kPri);
        a.set_codes(codes);
        b.set_codes(codes);
        RadarTruth truth{rng.complex_normal(3.0), rng.complex_normal(3.0), rng.uniform(1750, 2000), rng.uniform(1750, 2000)};
        const cvec y = synth_radar_observation(RadarLink{1.0, 1.0, kPri, fast}, truth, codes, rng).samples;
        const auto sa = a.statistics(y), sb = b.statistics(y);
        CHECK(sa.single_tr == doctest::Approx(sb.single_tr).epsilon(1e-9));
        CHECK(sa.single_re == doctest::Approx(sb.single_re).epsilon(1e-9));
        CHECK(sa.joint == doctest::Approx(sb.joint).epsilon(1e-9));
    }
}

TEST_CASE("scale equivariance")
{
    Rng rng(51, 0, 0, 0);
    const int P = 8;
    const DopplerGrid grid = DopplerGrid::for_cpi(1750, 2000, P, kPri, 4);
    const CodePair codes = radar_only_codes(P);
    const cmat c = random_covariance(P, rng, false);
    GicDetector a(grid, grid, NoiseCovariance::from_matrix(c), kPri);
    GicDetector b(grid, grid, NoiseCovariance::from_matrix(1e-20 * c), kPri);
    a.set_codes(codes);
    b.set_codes(codes);
    for (int i = 0; i < 50; ++i) {
        cvec y(P);
        for (auto& v : y)
            v = rng.complex_normal(3.0);
        const auto sa = a.statistics(y), sb = b.statistics(1e-10 * y);
        CHECK(sa.joint == doctest::Approx(sb.joint).epsilon(1e-9));
        CHECK(a.detect(y, 2.0).hypothesis == b.detect(1e-10 * y, 2.0).hypothesis);
    }
}

TEST_CASE("penalty calibration")
{
    const int P = 8;
    const NoiseCovariance noise = NoiseCovariance::scaled_identity(P, 3e-20);
    const DopplerGrid one = DopplerGrid::explicit_points({1875.0});
    DetectionSetup setup{CodePlan::radar_only(P), one, one, noise, kPri};
    const StreamKey key(1, "calibration-test");

    const auto res = calibrate_penalty(setup, 1e-2, 200000, FaCounting::event, key, 0, 2);
    CHECK(std::abs(res.penalty - oracle::single_point_penalty(1e-2)) < 0.1);
    CHECK(res.false_alarm_rate <= 1e-2);
    CHECK(std::abs(res.penalty - std::log(2.0 / 1e-2)) < 0.1);

    const double at = measure_false_alarm_rate(setup, 5.0, 100000, FaCounting::event, StreamKey(2, "x"), 0, 2);
    CHECK(at == doctest::Approx(oracle::single_point_false_alarm(5.0)).epsilon(0.1));
    CHECK(measure_false_alarm_rate(setup, 0.0, 1000, FaCounting::event, key, 0, 1) == 1.0);
    CHECK(measure_false_alarm_rate(setup, 60.0, 1000, FaCounting::event, key, 0, 1) == 0.0);

    // Per-target counting never needs a smaller penalty.
    const auto per_target = calibrate_penalty(setup, 1e-2, 200000, FaCounting::per_target, key, 0, 2);
    CHECK(per_target.penalty >= res.penalty);

    // Same answer for any worker count.
    CHECK(calibrate_penalty(setup, 1e-2, 20000, FaCounting::event, key, 3, 1).penalty ==
          calibrate_penalty(setup, 1e-2, 20000, FaCounting::event, key, 3, 4).penalty);

    CHECK_THROWS_AS(calibrate_penalty(setup, 1e-4, 100000, FaCounting::event, key, 0, 1), CalibrationError);
    CHECK(parse_fa_counting("per_target") == FaCounting::per_target);
    CHECK_THROWS_AS(parse_fa_counting("sometimes"), ConfigError);
}

TEST_CASE("code plans")
{
    const CodePlan plan = CodePlan::with_comm(16, 4, 1, ColumnOrder::reversed_tr);
    CHECK(plan.carries_messages());
    CHECK(plan.slot_pulses() == 4);
    Rng rng(61, 0, 0, 0);
    for (int i = 0; i < 20; ++i) {
        const CodePair c = plan.draw(rng);
        CHECK(c.tr.messages.size() == 4);
        CHECK((c.tr.values.cwiseAbs2() + c.re.values.cwiseAbs2() - Eigen::VectorXd::Ones(16)).norm() < 1e-14);
    }
    const CodePlan radar = CodePlan::radar_only(16);
    CHECK_FALSE(radar.carries_messages());
    CHECK(radar.slot_pulses() == 16);
    CHECK(radar.bits() == 0);
    CHECK_THROWS(CodePlan::with_comm(16, 3, 1, ColumnOrder::natural));
}
