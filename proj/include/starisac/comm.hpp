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

#include "starisac/channel.hpp"
#include "starisac/codebook.hpp"
#include "starisac/rng.hpp"
#include "starisac/starris.hpp"

#include <cstdint>
#include <vector>

namespace starisac {

/// Matched-filter samples of one slot at a user: M x L, rows are pulses
/// (slow time), columns are delay taps.
struct UserSlotObservation {
    cmat samples;
    unsigned message = 0;
};

/// Y = c beta^T + Z, Z with iid CN(0, noise_var) entries.
UserSlotObservation synth_user_slot(const cvec& taps, const Eigen::VectorXd& codeword, double noise_var, Rng& rng);

struct SlotDecision {
    unsigned index = 0;
    std::vector<std::uint8_t> bits;
    double metric = 0.0; ///< ||c^H Y||^2 / ||c||^2 at the chosen codeword
};

/// Non-coherent ML decoder: argmax over the codebook of ||c^H Y||^2 / ||c||^2,
/// ties to the lowest index. Never looks at the channel taps.
SlotDecision ml_decode_slot(const cmat& y, const Codebook& book);

/// Correlation metric for every codeword, in message-index order.
std::vector<double> correlation_metrics(const cmat& y, const Codebook& book);

/// Numerator of the reference SNR: P Delta G_ris(phi) |u_ris^T(phi) diag(g) s|^2 sigma_u^2 / L
/// evaluated at the centre of the user's departure rectangle.
struct ReferenceLink {
    double signal_power = 0.0;
};

/// Reference link toward the centre of `user.departure` through beamformer `s`.
ReferenceLink reference_link(const SystemParams& params, const ArrayGeometry& ris, const cvec& g,
                             const SpatialBeamformer& s, const UserSideConfig& user);

/// sigma_com^2 = signal_power / SNR. An infinite SNR gives zero noise.
double reference_snr_to_noise(double snr, const ReferenceLink& link);
double noise_to_reference_snr(double noise_var, const ReferenceLink& link);

double db_to_ratio(double db) noexcept;

} // namespace starisac
