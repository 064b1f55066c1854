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


#include "starisac/comm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starisac {

UserSlotObservation synth_user_slot(const cvec& taps, const Eigen::VectorXd& codeword, double noise_var, Rng& rng)
{
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("noise variance must be non-negative");
    UserSlotObservation obs;
    obs.samples = codeword.cast<std::complex<double>>() * taps.transpose();
    if (noise_var > 0.0)
        for (Eigen::Index l = 0; l < obs.samples.cols(); ++l)
            for (Eigen::Index p = 0; p < obs.samples.rows(); ++p)
                obs.samples(p, l) += rng.complex_normal(noise_var);
    return obs;
}

std::vector<double> correlation_metrics(const cmat& y, const Codebook& book)
{
    if (y.rows() != book.slot_pulses)
        throw std::invalid_argument("slot observation has " + std::to_string(y.rows()) + " rows, codebook M=" +
                                    std::to_string(book.slot_pulses));
    // Real codewords: c^H Y = c^T Y.
    const cmat corr = book.codewords.transpose().cast<std::complex<double>>() * y;
    const Eigen::VectorXd energy = book.codewords.colwise().squaredNorm().transpose();
    std::vector<double> metric(book.size());
    for (std::size_t i = 0; i < metric.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        metric[i] = corr.row(r).squaredNorm() / energy[r];
    }
    return metric;
}

SlotDecision ml_decode_slot(const cmat& y, const Codebook& book)
{
    if (book.size() == 0)
        throw std::invalid_argument("empty codebook");
    const std::vector<double> metric = correlation_metrics(y, book);
    std::size_t best = 0;
    for (std::size_t i = 1; i < metric.size(); ++i)
        if (metric[i] > metric[best])
            best = i;
    SlotDecision d;
    d.index = static_cast<unsigned>(best);
    d.bits = index_to_bits(d.index, book.bits);
    d.metric = metric[best];
    return d;
}

ReferenceLink reference_link(const SystemParams& params, const ArrayGeometry& ris, const cvec& g,
                             const SpatialBeamformer& s, const UserSideConfig& user)
{
    const AngularDirection centre = user.departure.center();
    const double pattern = std::norm(ris_beampattern_gain(s, g, centre, ris));
    return {params.pulse_energy() * element_gain(centre) * pattern * user.path_variance / user.taps};
}

double reference_snr_to_noise(double snr, const ReferenceLink& link)
{
    if (!(snr > 0.0))
        throw std::invalid_argument("reference SNR must be positive");
    if (std::isinf(snr))
        return 0.0;
    return link.signal_power / snr;
}

double noise_to_reference_snr(double noise_var, const ReferenceLink& link)
{
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("noise variance must be non-negative");
    if (noise_var == 0.0)
        return std::numeric_limits<double>::infinity();
    return link.signal_power / noise_var;
}

double db_to_ratio(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

} // namespace starisac
