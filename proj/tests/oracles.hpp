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


// Independent reference implementations used only by the tests. They favour
// brute force and textbook formulas over the fast paths in the library.

#pragma once

#include "starisac/codebook.hpp"
#include "starisac/radar.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

using starisac::cmat;
using starisac::cvec;

/// Sylvester Hadamard entry via the bit-parity identity H[i][j] = (-1)^popcount(i & j).
inline int hadamard_entry(unsigned i, unsigned j)
{
    return (std::popcount(i & j) & 1) ? -1 : 1;
}

/// Steering vector straight from the element positions.
inline cvec steering(std::size_t side, double az, double el)
{
    const double ky = std::numbers::pi * std::cos(el) * std::sin(az);
    const double kz = std::numbers::pi * std::sin(el);
    cvec u(static_cast<Eigen::Index>(side * side));
    for (std::size_t m = 0; m < side; ++m)
        for (std::size_t n = 0; n < side; ++n)
            u(static_cast<Eigen::Index>(m * side + n)) =
                std::exp(std::complex<double>(0.0, ky * static_cast<double>(m) + kz * static_cast<double>(n)));
    return u;
}

/// Hermitian inverse square root via an eigendecomposition.
inline cmat inverse_sqrt(const cmat& c)
{
    Eigen::SelfAdjointEigenSolver<cmat> eig(c);
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
           eig.eigenvectors().adjoint();
}

inline cvec template_of(const cvec& code, double nu, double pri)
{
    cvec h(code.size());
    for (Eigen::Index p = 0; p < code.size(); ++p)
        h(p) = code(p) * std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * nu * pri * static_cast<double>(p)));
    return h;
}

/// Squared norm of the projection of w onto the column space of a.
/// Returns nullopt when a is numerically rank deficient (singular value
/// ratio squared below 1e-10).
inline std::optional<double> projection_energy(const cmat& a, const cvec& w)
{
    Eigen::JacobiSVD<cmat> svd(a);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) * s(s.size() - 1) < 1e-10 * s(0) * s(0))
        return std::nullopt;
    Eigen::HouseholderQR<cmat> qr(a);
    const cmat q = qr.householderQ() * cmat::Identity(a.rows(), a.cols());
    return (q.adjoint() * w).squaredNorm();
}

struct GicAnswer {
    starisac::Hypothesis hypothesis = starisac::Hypothesis::h0;
    std::optional<double> nu_tr, nu_re;
    std::array<double, 4> objective{};
};

/// Exhaustive model-order selection: every hypothesis, every grid point or
/// pair, projections computed by QR in the whitened domain.
inline GicAnswer exhaustive_gic(const cvec& y, const starisac::CodePair& codes, const std::vector<double>& grid_tr,
                                const std::vector<double>& grid_re, const cmat& cov, double pri, double penalty)
{
    const cmat w = inverse_sqrt(cov);
    const cvec wy = w * y;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    GicAnswer ans;
    ans.objective = {0.0, neg_inf, neg_inf, neg_inf};
    std::optional<double> tr1, re1, tr2, re2;

    for (double nu : grid_tr) {
        const cmat a = w * template_of(codes.tr.values, nu, pri);
        const double v = projection_energy(a, wy).value() - penalty;
        if (v > ans.objective[1]) {
            ans.objective[1] = v;
            tr1 = nu;
        }
    }
    for (double nu : grid_re) {
        const cmat a = w * template_of(codes.re.values, nu, pri);
        const double v = projection_energy(a, wy).value() - penalty;
        if (v > ans.objective[2]) {
            ans.objective[2] = v;
            re1 = nu;
        }
    }
    for (double nt : grid_tr)
        for (double nr : grid_re) {
            cmat h(y.size(), 2);
            h.col(0) = template_of(codes.re.values, nr, pri);
            h.col(1) = template_of(codes.tr.values, nt, pri);
            const auto e = projection_energy(w * h, wy);
            if (!e)
                continue;
            const double v = *e - 2.0 * penalty;
            if (v > ans.objective[3]) {
                ans.objective[3] = v;
                tr2 = nt;
                re2 = nr;
            }
        }

    int best = 0;
    for (int k = 1; k < 4; ++k)
        if (ans.objective[k] > ans.objective[best])
            best = k;
    ans.hypothesis = static_cast<starisac::Hypothesis>(best);
    if (best == 1)
        ans.nu_tr = tr1;
    else if (best == 2)
        ans.nu_re = re1;
    else if (best == 3) {
        ans.nu_tr = tr2;
        ans.nu_re = re2;
    }
    return ans;
}

/// Profiled-likelihood decoder: for every codeword fit the taps by least
/// squares and keep the smallest residual; ties to the lowest index.
inline unsigned profiled_ml_decode(const cmat& y, const Eigen::MatrixXd& codewords)
{
    unsigned best = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < codewords.cols(); ++i) {
        const cmat c = codewords.col(i).cast<std::complex<double>>();
        const auto qr = c.colPivHouseholderQr();
        double residual = 0.0;
        for (Eigen::Index l = 0; l < y.cols(); ++l) {
            const cvec beta = qr.solve(y.col(l));
            residual += (y.col(l) - c * beta).squaredNorm();
        }
        if (residual < best_residual) {
            best_residual = residual;
            best = static_cast<unsigned>(i);
        }
    }
    return best;
}

/// Closed-form false-alarm rate with one grid point per side and orthogonal
/// whitened templates: 1 - (1 - e^-eta)^2.
inline double single_point_false_alarm(double eta)
{
    const double q = 1.0 - std::exp(-eta);
    return 1.0 - q * q;
}

/// Penalty giving `rate` under single_point_false_alarm.
inline double single_point_penalty(double rate)
{
    return -std::log(1.0 - std::sqrt(1.0 - rate));
}

} // namespace oracle
