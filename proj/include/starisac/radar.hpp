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

#include "starisac/codebook.hpp"
#include "starisac/geometry.hpp"
#include "starisac/rng.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace starisac {

/// h(c, nu)[p] = c[p] exp(i 2 pi nu T p), p = 0..P-1.
cvec doppler_template(const cvec& code, double doppler_hz, double pri_s);

/// s_rad = u_rad(dir) / sqrt(N_rad): unit norm, constant modulus.
cvec design_pesa_beamformer(const AngularDirection& dir, const ArrayGeometry& rad);

/// Hermitian positive-definite slow-time noise covariance with a cached
/// lower Cholesky factor C = L L^H.
class NoiseCovariance {
public:
    static NoiseCovariance scaled_identity(Eigen::Index size, double variance);
    /// Throws std::invalid_argument if `c` is not Hermitian positive definite.
    static NoiseCovariance from_matrix(const cmat& c);

    Eigen::Index size() const noexcept { return size_; }
    bool is_scaled_identity() const noexcept { return scalar_; }
    /// Diagonal value when the covariance is a scaled identity.
    double variance() const noexcept { return variance_; }
    cmat matrix() const;

    cvec whiten(const cvec& v) const; ///< L^{-1} v
    cmat whiten(const cmat& v) const;
    cvec solve(const cvec& v) const;  ///< C^{-1} v
    /// CN(0, C) sample.
    cvec draw(Rng& rng) const;

private:
    NoiseCovariance() = default;

    Eigen::Index size_ = 0;
    bool scalar_ = true;
    double variance_ = 1.0;
    cmat chol_;
};

/// xi = C^{-1} h / ||C^{-1/2} h||, normalized so that xi^H C xi = 1.
cvec whitened_template(const cvec& code, double doppler_hz, double pri_s, const NoiseCovariance& noise);

struct RadarTruth {
    std::complex<double> alpha_tr{0.0, 0.0};
    std::complex<double> alpha_re{0.0, 0.0};
    double doppler_tr_hz = 0.0;
    double doppler_re_hz = 0.0;
};

struct RadarObservation {
    cvec samples;
    RadarTruth truth;
};

/// Everything the slow-time signal model needs besides the codes.
struct RadarLink {
    std::complex<double> gamma_tr;
    std::complex<double> gamma_re;
    double pri_s;
    NoiseCovariance noise;
};

/// y = alpha_tr gamma_tr h(c_tr, nu_tr) + alpha_re gamma_re h(c_re, nu_re) + z.
/// Dopplers must lie in (-1/(2T), 1/(2T)).
RadarObservation synth_radar_observation(const RadarLink& link, const RadarTruth& truth, const CodePair& codes,
                                         Rng& rng);

/// Search grid over one feasible Doppler set.
struct DopplerGrid {
    double lo_hz = 0.0;
    double hi_hz = 0.0;
    double spacing_hz = 0.0; ///< 0 for explicit (non-uniform) grids
    std::vector<double> points;

    /// Points spaced `spacing` apart, centered in the open interval (lo, hi).
    static DopplerGrid uniform(double lo_hz, double hi_hz, double spacing_hz);
    /// Spacing 1/(P T) / oversampling.
    static DopplerGrid for_cpi(double lo_hz, double hi_hz, int pulses, double pri_s, int oversampling);
    static DopplerGrid explicit_points(std::vector<double> points);

    std::size_t size() const noexcept { return points.size(); }
    bool is_uniform() const noexcept { return spacing_hz > 0.0; }
};

enum class Hypothesis { h0 = 0, h1_tr = 1, h1_re = 2, h2 = 3 };

const char* to_string(Hypothesis h) noexcept;
int target_count(Hypothesis h) noexcept;

struct DetectionResult {
    Hypothesis hypothesis = Hypothesis::h0;
    std::optional<double> doppler_tr_hz;
    std::optional<double> doppler_re_hz;
    /// Objective mu(L) for H0, H1_tr, H1_re, H2 (penalty included).
    std::array<double, 4> objective{};
};

/// Grid maxima of the three data statistics, penalty excluded.
struct HypothesisStatistics {
    double single_tr = 0.0; ///< max |xi_tr^H y|^2
    double single_re = 0.0; ///< max |xi_re^H y|^2
    double joint = 0.0;     ///< max ||Xi^H y||^2
};

/// argmax of {0, s_tr - eta, s_re - eta, joint - 2 eta}; ties go to fewer targets.
Hypothesis select_hypothesis(const HypothesisStatistics& stats, double penalty) noexcept;

/// Four-hypothesis GIC detector with grid search over the feasible Doppler sets.
///
/// Construction precomputes the grid phasors; set_codes() rebinds the code
/// pair and recomputes the whitened Gram data. The joint statistic uses
/// ||Xi^H y||^2 = a^H G^{-1} a with a = H^H C^{-1} y and G = H^H C^{-1} H,
/// H = [h_re, h_tr]. Grid pairs whose Gram matrix has eigenvalue ratio below
/// 1e-10 are skipped.
class GicDetector {
public:
    GicDetector(DopplerGrid grid_tr, DopplerGrid grid_re, NoiseCovariance noise, double pri_s);

    void set_codes(const CodePair& codes);

    DetectionResult detect(const cvec& y, double penalty) const;
    HypothesisStatistics statistics(const cvec& y) const;

    /// Same as detect(y, penalty).hypothesis != H0, with an exact early exit.
    bool declares_target(const cvec& y, double penalty) const;
    /// Smallest penalty at which H0 is selected: max(s_tr, s_re, joint / 2).
    double critical_penalty(const cvec& y) const;

    const DopplerGrid& grid_tr() const noexcept { return grid_tr_; }
    const DopplerGrid& grid_re() const noexcept { return grid_re_; }
    Eigen::Index pulses() const noexcept { return noise_.size(); }

private:
    struct Scan {
        Eigen::VectorXcd corr_tr, corr_re; // h^H C^{-1} y per grid point
        double best_tr = 0.0, best_re = 0.0;
        std::size_t arg_tr = 0, arg_re = 0;
        double max_sq_tr = 0.0, max_sq_re = 0.0; // max |corr|^2
    };
    struct JointMax {
        double value = 0.0;
        std::size_t arg_tr = 0, arg_re = 0;
        bool found = false;
    };

    Scan scan(const cvec& y) const;
    JointMax joint_max(const Scan& s) const;
    double joint_bound(const Scan& s) const;

    DopplerGrid grid_tr_, grid_re_;
    NoiseCovariance noise_;
    double pri_s_;
    bool toeplitz_; // scaled-identity noise and equal uniform spacing

    // Grid phasors e^{-i 2 pi nu_k T p}, one row per grid point.
    cmat phasor_tr_, phasor_re_;
    // e^{i 2 pi (nu_tr[k] - nu_re[j]) T p} indexed by lag k - j + n_re - 1.
    cmat lag_phasor_;

    bool has_codes_ = false;
    // Scalar path.
    cvec code_tr_conj_, code_re_conj_; // conj(c) / sigma^2
    double gram_tr0_ = 0.0, gram_re0_ = 0.0;
    cvec cross_lag_;
    Eigen::VectorXd inv_det_lag_;
    std::vector<char> valid_lag_;
    // Generic path.
    cmat white_tr_, white_re_; // L^{-1} h per grid point (columns)
    Eigen::VectorXd gram_tr_, gram_re_;
    cmat cross_;               // n_re x n_tr, h_re^H C^{-1} h_tr
    Eigen::MatrixXd inv_det_;  // 0 marks a degenerate pair
    double lambda_min_ = 0.0;  // smallest Gram eigenvalue over valid pairs
};

/// Penalty-free wrapper around GicDetector for one-off use.
DetectionResult gic_detect(const cvec& y, const CodePair& codes, const DopplerGrid& grid_tr,
                           const DopplerGrid& grid_re, const NoiseCovariance& noise, double pri_s, double penalty);

/// How false alarms are counted under H0: one per declared event, or one per
/// declared target (H2 counts twice).
enum class FaCounting { event, per_target };

const char* to_string(FaCounting counting) noexcept;
FaCounting parse_fa_counting(const std::string& name);

/// Code sequences used over a CPI: fixed radar-only codes, or Hadamard slot
/// codewords carrying uniformly random messages.
class CodePlan {
public:
    static CodePlan radar_only(int pulses);
    static CodePlan with_comm(int pulses, int slot_pulses, int bits, ColumnOrder order);

    int pulses() const noexcept { return pulses_; }
    bool carries_messages() const noexcept { return books_.has_value(); }
    int slot_pulses() const noexcept { return books_ ? books_->transmissive.slot_pulses : pulses_; }
    int bits() const noexcept { return books_ ? books_->transmissive.bits : 0; }
    ColumnOrder column_order() const noexcept { return order_; }

    /// Radar-only codes are returned as is; otherwise draws one message per
    /// slot and side.
    CodePair draw(Rng& rng) const;
    const CodePair& fixed() const noexcept { return fixed_; }

private:
    int pulses_ = 0;
    ColumnOrder order_ = ColumnOrder::reversed_tr;
    std::optional<CodebookPair> books_;
    CodePair fixed_;
};

struct DetectionSetup {
    CodePlan codes;
    DopplerGrid grid_tr;
    DopplerGrid grid_re;
    NoiseCovariance noise;
    double pri_s;

    GicDetector make_detector() const;
};

struct CalibrationResult {
    double penalty = 0.0;
    double false_alarm_rate = 0.0; ///< empirical rate at `penalty` on the calibration trials
    std::size_t trials = 0;
};

/// Bisection for the smallest penalty whose empirical false-alarm rate under
/// noise-only observations is <= target_rate. Trial t of cell `cell` uses
/// stream key.stream(cell, t). Requires trials * target_rate >= 100.
CalibrationResult calibrate_penalty(const DetectionSetup& setup, double target_rate, std::size_t trials,
                                    FaCounting counting, const StreamKey& key, std::uint32_t cell, unsigned jobs);

/// Empirical false-alarm rate at a fixed penalty (noise-only trials).
double measure_false_alarm_rate(const DetectionSetup& setup, double penalty, std::size_t trials,
                                FaCounting counting, const StreamKey& key, std::uint32_t cell, unsigned jobs);

/// v = lambda nu / 2.
double doppler_to_velocity(double doppler_hz, double wavelength_m) noexcept;

} // namespace starisac
