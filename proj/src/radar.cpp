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


#include "starisac/radar.hpp"

#include "starisac/errors.hpp"
#include "starisac/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace starisac {

using std::numbers::pi;

namespace {

constexpr double kDegenerateRatio = 1e-10;

// Eigenvalue test and 1/det for the 2x2 Hermitian Gram [[a, x], [x*, d]].
// Returns 0 when the pair is numerically singular.
double gram_inverse_det(double a, double d, std::complex<double> x, double& lambda_min)
{
    const double half_gap = 0.5 * (a - d);
    const double lambda_max = 0.5 * (a + d) + std::sqrt(half_gap * half_gap + std::norm(x));
    const double det = a * d - std::norm(x);
    lambda_min = lambda_max > 0.0 ? det / lambda_max : 0.0;
    if (!(lambda_max > 0.0) || lambda_min < kDegenerateRatio * lambda_max)
        return 0.0;
    return 1.0 / det;
}

} // namespace

cvec doppler_template(const cvec& code, double doppler_hz, double pri_s)
{
    cvec h(code.size());
    const double rate = 2.0 * pi * doppler_hz * pri_s;
    for (Eigen::Index p = 0; p < code.size(); ++p)
        h[p] = code[p] * std::polar(1.0, rate * static_cast<double>(p));
    return h;
}

cvec design_pesa_beamformer(const AngularDirection& dir, const ArrayGeometry& rad)
{
    return steering_vector(rad, dir) / std::sqrt(static_cast<double>(rad.size()));
}

// ---------------------------------------------------------------------------
// NoiseCovariance

NoiseCovariance NoiseCovariance::scaled_identity(Eigen::Index size, double variance)
{
    if (size <= 0)
        throw std::invalid_argument("covariance size must be positive");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("noise variance must be positive");
    NoiseCovariance c;
    c.size_ = size;
    c.scalar_ = true;
    c.variance_ = variance;
    return c;
}

NoiseCovariance NoiseCovariance::from_matrix(const cmat& m)
{
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("covariance must be a non-empty square matrix");
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("covariance is not Hermitian");

    const bool diagonal_constant = [&] {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (i == j ? m(i, j) != m(0, 0) : m(i, j) != 0.0)
                    return false;
        return true;
    }();
    if (diagonal_constant)
        return scaled_identity(m.rows(), m(0, 0).real());

    Eigen::LLT<cmat> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("covariance is singular or not positive definite");
    cmat l = llt.matrixL();
    const Eigen::VectorXd diag = l.diagonal().real();
    if (diag.minCoeff() <= 1e-8 * diag.maxCoeff())
        throw std::invalid_argument("covariance is numerically singular");
    NoiseCovariance c;
    c.size_ = m.rows();
    c.scalar_ = false;
    c.variance_ = 0.0;
    c.chol_ = std::move(l);
    return c;
}

cmat NoiseCovariance::matrix() const
{
    if (scalar_)
        return variance_ * cmat::Identity(size_, size_);
    return chol_ * chol_.adjoint();
}

cvec NoiseCovariance::whiten(const cvec& v) const
{
    if (scalar_)
        return v / std::sqrt(variance_);
    return chol_.triangularView<Eigen::Lower>().solve(v);
}

cmat NoiseCovariance::whiten(const cmat& v) const
{
    if (scalar_)
        return v / std::sqrt(variance_);
    return chol_.triangularView<Eigen::Lower>().solve(v);
}

cvec NoiseCovariance::solve(const cvec& v) const
{
    if (scalar_)
        return v / variance_;
    const cvec w = chol_.triangularView<Eigen::Lower>().solve(v);
    return chol_.adjoint().triangularView<Eigen::Upper>().solve(w);
}

cvec NoiseCovariance::draw(Rng& rng) const
{
    cvec z(size_);
    if (scalar_) {
        for (Eigen::Index p = 0; p < size_; ++p)
            z[p] = rng.complex_normal(variance_);
        return z;
    }
    for (Eigen::Index p = 0; p < size_; ++p)
        z[p] = rng.complex_normal(1.0);
    return chol_ * z;
}

cvec whitened_template(const cvec& code, double doppler_hz, double pri_s, const NoiseCovariance& noise)
{
    if (code.size() != noise.size())
        throw std::invalid_argument("code length does not match the covariance");
    const cvec h = doppler_template(code, doppler_hz, pri_s);
    const double norm = noise.whiten(h).norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("template has zero energy");
    return noise.solve(h) / norm;
}

RadarObservation synth_radar_observation(const RadarLink& link, const RadarTruth& truth, const CodePair& codes,
                                         Rng& rng)
{
    const double limit = 0.5 / link.pri_s;
    if (!(std::abs(truth.doppler_tr_hz) < limit) || !(std::abs(truth.doppler_re_hz) < limit))
        throw std::invalid_argument("Doppler shift outside the unambiguous interval (-1/(2T), 1/(2T))");
    if (codes.tr.length() != link.noise.size() || codes.re.length() != link.noise.size())
        throw std::invalid_argument("code length does not match the CPI");

    RadarObservation obs{link.noise.draw(rng), truth};
    if (truth.alpha_tr != 0.0)
        obs.samples += (truth.alpha_tr * link.gamma_tr) * doppler_template(codes.tr.values, truth.doppler_tr_hz, link.pri_s);
    if (truth.alpha_re != 0.0)
        obs.samples += (truth.alpha_re * link.gamma_re) * doppler_template(codes.re.values, truth.doppler_re_hz, link.pri_s);
    return obs;
}

// ---------------------------------------------------------------------------
// Doppler grids

DopplerGrid DopplerGrid::uniform(double lo_hz, double hi_hz, double spacing_hz)
{
    if (!(lo_hz < hi_hz))
        throw std::invalid_argument("Doppler interval is empty");
    if (!(spacing_hz > 0.0))
        throw std::invalid_argument("Doppler grid spacing must be positive");
    const double width = hi_hz - lo_hz;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(width / spacing_hz - 1e-9)));
    DopplerGrid grid{lo_hz, hi_hz, spacing_hz, {}};
    grid.points.resize(n);
    const double start = 0.5 * (lo_hz + hi_hz) - 0.5 * static_cast<double>(n - 1) * spacing_hz;
    for (std::size_t k = 0; k < n; ++k)
        grid.points[k] = start + static_cast<double>(k) * spacing_hz;
    return grid;
}

DopplerGrid DopplerGrid::for_cpi(double lo_hz, double hi_hz, int pulses, double pri_s, int oversampling)
{
    if (pulses <= 0 || oversampling <= 0 || !(pri_s > 0.0))
        throw std::invalid_argument("invalid CPI for Doppler grid");
    return uniform(lo_hz, hi_hz, 1.0 / (pulses * pri_s) / oversampling);
}

DopplerGrid DopplerGrid::explicit_points(std::vector<double> points)
{
    if (points.empty())
        throw std::invalid_argument("Doppler grid must not be empty");
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    DopplerGrid grid{*lo, *hi, 0.0, std::move(points)};
    return grid;
}

// ---------------------------------------------------------------------------
// Hypotheses

const char* to_string(Hypothesis h) noexcept
{
    switch (h) {
    case Hypothesis::h0: return "H0";
    case Hypothesis::h1_tr: return "H1_tr";
    case Hypothesis::h1_re: return "H1_re";
    case Hypothesis::h2: return "H2";
    }
    return "?";
}

int target_count(Hypothesis h) noexcept
{
    switch (h) {
    case Hypothesis::h0: return 0;
    case Hypothesis::h2: return 2;
    default: return 1;
    }
}

Hypothesis select_hypothesis(const HypothesisStatistics& stats, double penalty) noexcept
{
    const std::array<double, 4> mu{0.0, stats.single_tr - penalty, stats.single_re - penalty,
                                   stats.joint - 2.0 * penalty};
    std::size_t best = 0;
    for (std::size_t i = 1; i < mu.size(); ++i)
        if (mu[i] > mu[best])
            best = i;
    return static_cast<Hypothesis>(best);
}

// ---------------------------------------------------------------------------
// GicDetector

GicDetector::GicDetector(DopplerGrid grid_tr, DopplerGrid grid_re, NoiseCovariance noise, double pri_s)
    : grid_tr_(std::move(grid_tr)), grid_re_(std::move(grid_re)), noise_(std::move(noise)), pri_s_(pri_s)
{
    if (grid_tr_.points.empty() || grid_re_.points.empty())
        throw std::invalid_argument("Doppler grids must not be empty");
    toeplitz_ = noise_.is_scaled_identity() && grid_tr_.is_uniform() && grid_re_.is_uniform() &&
                std::abs(grid_tr_.spacing_hz - grid_re_.spacing_hz) <= 1e-12 * grid_tr_.spacing_hz;
    if (!toeplitz_)
        return;

    const Eigen::Index pulses = noise_.size();
    auto phasors = [&](const DopplerGrid& grid) {
        cmat e(static_cast<Eigen::Index>(grid.size()), pulses);
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (Eigen::Index p = 0; p < pulses; ++p)
                e(static_cast<Eigen::Index>(k), p) =
                    std::polar(1.0, -2.0 * pi * grid.points[k] * pri_s_ * static_cast<double>(p));
        return e;
    };
    phasor_tr_ = phasors(grid_tr_);
    phasor_re_ = phasors(grid_re_);

    const auto n_tr = static_cast<Eigen::Index>(grid_tr_.size());
    const auto n_re = static_cast<Eigen::Index>(grid_re_.size());
    const double offset = grid_tr_.points.front() - grid_re_.points.front();
    lag_phasor_.resize(n_tr + n_re - 1, pulses);
    for (Eigen::Index m = 0; m < lag_phasor_.rows(); ++m) {
        const double diff = offset + static_cast<double>(m - (n_re - 1)) * grid_tr_.spacing_hz;
        for (Eigen::Index p = 0; p < pulses; ++p)
            lag_phasor_(m, p) = std::polar(1.0, 2.0 * pi * diff * pri_s_ * static_cast<double>(p));
    }
}

void GicDetector::set_codes(const CodePair& codes)
{
    const Eigen::Index pulses = noise_.size();
    if (codes.tr.length() != pulses || codes.re.length() != pulses)
        throw std::invalid_argument("code length does not match the detector CPI");
    lambda_min_ = std::numeric_limits<double>::infinity();
    bool any_valid = false;

    if (toeplitz_) {
        const double var = noise_.variance();
        code_tr_conj_ = codes.tr.values.conjugate() / var;
        code_re_conj_ = codes.re.values.conjugate() / var;
        gram_tr0_ = codes.tr.values.squaredNorm() / var;
        gram_re0_ = codes.re.values.squaredNorm() / var;
        const cvec d = codes.re.values.conjugate().cwiseProduct(codes.tr.values) / var;
        cross_lag_ = lag_phasor_ * d;
        inv_det_lag_.resize(cross_lag_.size());
        valid_lag_.assign(static_cast<std::size_t>(cross_lag_.size()), 0);
        for (Eigen::Index m = 0; m < cross_lag_.size(); ++m) {
            double lmin = 0.0;
            inv_det_lag_[m] = gram_inverse_det(gram_re0_, gram_tr0_, cross_lag_[m], lmin);
            if (inv_det_lag_[m] != 0.0) {
                valid_lag_[static_cast<std::size_t>(m)] = 1;
                lambda_min_ = std::min(lambda_min_, lmin);
                any_valid = true;
            }
        }
    } else {
        auto templates = [&](const cvec& code, const DopplerGrid& grid) {
            cmat h(pulses, static_cast<Eigen::Index>(grid.size()));
            for (std::size_t k = 0; k < grid.size(); ++k)
                h.col(static_cast<Eigen::Index>(k)) = doppler_template(code, grid.points[k], pri_s_);
            return noise_.whiten(h);
        };
        white_tr_ = templates(codes.tr.values, grid_tr_);
        white_re_ = templates(codes.re.values, grid_re_);
        gram_tr_ = white_tr_.colwise().squaredNorm().transpose();
        gram_re_ = white_re_.colwise().squaredNorm().transpose();
        cross_ = white_re_.adjoint() * white_tr_;
        inv_det_.resize(cross_.rows(), cross_.cols());
        for (Eigen::Index j = 0; j < cross_.rows(); ++j)
            for (Eigen::Index k = 0; k < cross_.cols(); ++k) {
                double lmin = 0.0;
                inv_det_(j, k) = gram_inverse_det(gram_re_[j], gram_tr_[k], cross_(j, k), lmin);
                if (inv_det_(j, k) != 0.0) {
                    lambda_min_ = std::min(lambda_min_, lmin);
                    any_valid = true;
                }
            }
    }
    if (!any_valid)
        lambda_min_ = 0.0;
    has_codes_ = true;
}

GicDetector::Scan GicDetector::scan(const cvec& y) const
{
    if (!has_codes_)
        throw std::logic_error("GicDetector used before set_codes()");
    if (y.size() != noise_.size())
        throw std::invalid_argument("observation length does not match the detector CPI");

    Scan s;
    Eigen::VectorXd gram_tr, gram_re;
    if (toeplitz_) {
        s.corr_tr = phasor_tr_ * code_tr_conj_.cwiseProduct(y);
        s.corr_re = phasor_re_ * code_re_conj_.cwiseProduct(y);
    } else {
        const cvec yw = noise_.whiten(y);
        s.corr_tr = white_tr_.adjoint() * yw;
        s.corr_re = white_re_.adjoint() * yw;
    }
    auto best = [&](const cvec& corr, double gram0, const Eigen::VectorXd& gram, double& value, std::size_t& arg,
                    double& max_sq) {
        value = -1.0;
        max_sq = 0.0;
        for (Eigen::Index k = 0; k < corr.size(); ++k) {
            const double sq = std::norm(corr[k]);
            const double g = toeplitz_ ? gram0 : gram[k];
            const double stat = g > 0.0 ? sq / g : 0.0;
            max_sq = std::max(max_sq, sq);
            if (stat > value) {
                value = stat;
                arg = static_cast<std::size_t>(k);
            }
        }
    };
    best(s.corr_tr, gram_tr0_, gram_tr_, s.best_tr, s.arg_tr, s.max_sq_tr);
    best(s.corr_re, gram_re0_, gram_re_, s.best_re, s.arg_re, s.max_sq_re);
    return s;
}

GicDetector::JointMax GicDetector::joint_max(const Scan& s) const
{
    JointMax out;
    const auto n_tr = s.corr_tr.size();
    const auto n_re = s.corr_re.size();
    for (Eigen::Index j = 0; j < n_re; ++j) {
        const std::complex<double> a_re = s.corr_re[j];
        const double sq_re = std::norm(a_re);
        for (Eigen::Index k = 0; k < n_tr; ++k) {
            const std::complex<double> a_tr = s.corr_tr[k];
            double inv_det, g_re, g_tr;
            std::complex<double> x;
            if (toeplitz_) {
                const Eigen::Index m = k - j + n_re - 1;
                if (!valid_lag_[static_cast<std::size_t>(m)])
                    continue;
                inv_det = inv_det_lag_[m];
                x = cross_lag_[m];
                g_re = gram_re0_;
                g_tr = gram_tr0_;
            } else {
                inv_det = inv_det_(j, k);
                if (inv_det == 0.0)
                    continue;
                x = cross_(j, k);
                g_re = gram_re_[j];
                g_tr = gram_tr_[k];
            }
            // a^H G^{-1} a with G = [[g_re, x], [conj(x), g_tr]], a = [a_re; a_tr].
            const double value =
                (g_tr * sq_re + g_re * std::norm(a_tr) - 2.0 * (std::conj(a_re) * x * a_tr).real()) * inv_det;
            if (!out.found || value > out.value) {
                out.value = value;
                out.arg_tr = static_cast<std::size_t>(k);
                out.arg_re = static_cast<std::size_t>(j);
                out.found = true;
            }
        }
    }
    return out;
}

double GicDetector::joint_bound(const Scan& s) const
{
    if (!(lambda_min_ > 0.0))
        return 0.0;
    return (s.max_sq_tr + s.max_sq_re) / lambda_min_;
}

DetectionResult GicDetector::detect(const cvec& y, double penalty) const
{
    const Scan s = scan(y);
    const JointMax joint = joint_max(s);
    DetectionResult r;
    r.objective = {0.0, s.best_tr - penalty, s.best_re - penalty,
                   joint.found ? joint.value - 2.0 * penalty : -std::numeric_limits<double>::infinity()};
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.objective.size(); ++i)
        if (r.objective[i] > r.objective[best])
            best = i;
    r.hypothesis = static_cast<Hypothesis>(best);
    switch (r.hypothesis) {
    case Hypothesis::h0:
        break;
    case Hypothesis::h1_tr:
        r.doppler_tr_hz = grid_tr_.points[s.arg_tr];
        break;
    case Hypothesis::h1_re:
        r.doppler_re_hz = grid_re_.points[s.arg_re];
        break;
    case Hypothesis::h2:
        r.doppler_tr_hz = grid_tr_.points[joint.arg_tr];
        r.doppler_re_hz = grid_re_.points[joint.arg_re];
        break;
    }
    return r;
}

HypothesisStatistics GicDetector::statistics(const cvec& y) const
{
    const Scan s = scan(y);
    const JointMax joint = joint_max(s);
    return {s.best_tr, s.best_re, joint.found ? joint.value : -std::numeric_limits<double>::infinity()};
}

bool GicDetector::declares_target(const cvec& y, double penalty) const
{
    const Scan s = scan(y);
    if (s.best_tr > penalty || s.best_re > penalty)
        return true;
    // joint <= ||a||^2 / lambda_min(G) over every grid pair.
    if (joint_bound(s) <= 2.0 * penalty)
        return false;
    const JointMax joint = joint_max(s);
    return joint.found && joint.value > 2.0 * penalty;
}

double GicDetector::critical_penalty(const cvec& y) const
{
    const Scan s = scan(y);
    const double single = std::max(s.best_tr, s.best_re);
    if (0.5 * joint_bound(s) <= single)
        return single;
    const JointMax joint = joint_max(s);
    return joint.found ? std::max(single, 0.5 * joint.value) : single;
}

DetectionResult gic_detect(const cvec& y, const CodePair& codes, const DopplerGrid& grid_tr,
                           const DopplerGrid& grid_re, const NoiseCovariance& noise, double pri_s, double penalty)
{
    if (!(penalty > 0.0))
        throw std::invalid_argument("GIC penalty must be positive");
    GicDetector det(grid_tr, grid_re, noise, pri_s);
    det.set_codes(codes);
    return det.detect(y, penalty);
}

// ---------------------------------------------------------------------------
// Calibration

const char* to_string(FaCounting counting) noexcept
{
    return counting == FaCounting::event ? "event" : "per_target";
}

FaCounting parse_fa_counting(const std::string& name)
{
    if (name == "event")
        return FaCounting::event;
    if (name == "per_target")
        return FaCounting::per_target;
    throw ConfigError("unknown fa_counting '" + name + "'");
}

CodePlan CodePlan::radar_only(int pulses)
{
    CodePlan plan;
    plan.pulses_ = pulses;
    plan.fixed_ = radar_only_codes(pulses);
    return plan;
}

CodePlan CodePlan::with_comm(int pulses, int slot_pulses, int bits, ColumnOrder order)
{
    if (!is_power_of_two(pulses))
        throw std::invalid_argument("P must be a power of 2");
    if (slot_pulses <= 0 || pulses % slot_pulses != 0)
        throw std::invalid_argument("P/M must be an integer");
    CodePlan plan;
    plan.pulses_ = pulses;
    plan.order_ = order;
    plan.books_ = build_codebooks(slot_pulses, bits, order);
    const std::vector<unsigned> zeros(static_cast<std::size_t>(pulses / slot_pulses), 0u);
    plan.fixed_ = {assemble_code_sequence(plan.books_->transmissive, zeros, pulses),
                   assemble_code_sequence(plan.books_->reflective, zeros, pulses)};
    return plan;
}

CodePair CodePlan::draw(Rng& rng) const
{
    if (!books_)
        return fixed_;
    const std::size_t slots = static_cast<std::size_t>(pulses_ / books_->transmissive.slot_pulses);
    const std::uint64_t words = books_->transmissive.size();
    std::vector<unsigned> msg_tr(slots), msg_re(slots);
    for (std::size_t s = 0; s < slots; ++s) {
        msg_tr[s] = static_cast<unsigned>(rng.uniform_index(words));
        msg_re[s] = static_cast<unsigned>(rng.uniform_index(words));
    }
    return {assemble_code_sequence(books_->transmissive, msg_tr, pulses_),
            assemble_code_sequence(books_->reflective, msg_re, pulses_)};
}

GicDetector DetectionSetup::make_detector() const
{
    GicDetector det(grid_tr, grid_re, noise, pri_s);
    det.set_codes(codes.fixed());
    return det;
}

namespace {

template <class PerTrial>
void run_null_trials(const DetectionSetup& setup, std::size_t trials, const StreamKey& key, std::uint32_t cell,
                     unsigned jobs, PerTrial&& per_trial)
{
    if (setup.codes.pulses() != setup.noise.size())
        throw std::invalid_argument("code plan and covariance disagree on P");
    parallel_for(trials, jobs, [&](std::size_t begin, std::size_t end) {
        GicDetector det = setup.make_detector();
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = key.stream(cell, static_cast<std::uint32_t>(t));
            if (setup.codes.carries_messages())
                det.set_codes(setup.codes.draw(rng));
            const cvec y = setup.noise.draw(rng);
            per_trial(det, y, t);
        }
    });
}

void check_rate(double target_rate)
{
    if (!(target_rate > 0.0 && target_rate < 1.0))
        throw CalibrationError("false-alarm target must lie in (0, 1)");
}

} // namespace

CalibrationResult calibrate_penalty(const DetectionSetup& setup, double target_rate, std::size_t trials,
                                    FaCounting counting, const StreamKey& key, std::uint32_t cell, unsigned jobs)
{
    check_rate(target_rate);
    if (static_cast<double>(trials) * target_rate < 100.0)
        throw CalibrationError("false-alarm target " + std::to_string(target_rate) + " is unreachable with " +
                               std::to_string(trials) + " trials (need trials * target >= 100)");

    const double n = static_cast<double>(trials);
    std::vector<double> critical;
    std::vector<HypothesisStatistics> stats;
    std::function<double(double)> rate;
    double hi = 0.0;

    if (counting == FaCounting::event) {
        critical.resize(trials);
        run_null_trials(setup, trials, key, cell, jobs,
                        [&](const GicDetector& det, const cvec& y, std::size_t t) { critical[t] = det.critical_penalty(y); });
        std::sort(critical.begin(), critical.end());
        hi = critical.back();
        rate = [&](double eta) {
            const auto above = critical.end() - std::upper_bound(critical.begin(), critical.end(), eta);
            return static_cast<double>(above) / n;
        };
    } else {
        stats.resize(trials);
        run_null_trials(setup, trials, key, cell, jobs,
                        [&](const GicDetector& det, const cvec& y, std::size_t t) { stats[t] = det.statistics(y); });
        for (const auto& s : stats)
            hi = std::max({hi, s.single_tr, s.single_re, 0.5 * s.joint});
        rate = [&](double eta) {
            std::size_t count = 0;
            for (const auto& s : stats)
                count += static_cast<std::size_t>(target_count(select_hypothesis(s, eta)));
            return static_cast<double>(count) / n;
        };
    }

    double lo = 0.0;
    if (rate(lo) <= target_rate)
        return {lo, rate(lo), trials};
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (rate(mid) <= target_rate)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, rate(hi), trials};
}

double measure_false_alarm_rate(const DetectionSetup& setup, double penalty, std::size_t trials,
                                FaCounting counting, const StreamKey& key, std::uint32_t cell, unsigned jobs)
{
    if (trials == 0)
        throw std::invalid_argument("need at least one trial");
    std::atomic<std::uint64_t> total{0};
    parallel_for(trials, jobs, [&](std::size_t begin, std::size_t end) {
        GicDetector det = setup.make_detector();
        std::uint64_t count = 0;
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng = key.stream(cell, static_cast<std::uint32_t>(t));
            if (setup.codes.carries_messages())
                det.set_codes(setup.codes.draw(rng));
            const cvec y = setup.noise.draw(rng);
            if (counting == FaCounting::event)
                count += det.declares_target(y, penalty) ? 1u : 0u;
            else
                count += static_cast<std::uint64_t>(target_count(select_hypothesis(det.statistics(y), penalty)));
        }
        total += count;
    });
    return static_cast<double>(total.load()) / static_cast<double>(trials);
}

double doppler_to_velocity(double doppler_hz, double wavelength_m) noexcept
{
    return 0.5 * wavelength_m * doppler_hz;
}

} // namespace starisac
