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
#include "starisac/geometry.hpp"

#include <complex>

namespace starisac {

/// Unit-modulus spatial weights applied by the STAR-RIS toward one half-space.
struct SpatialBeamformer {
    Side side = Side::transmissive;
    cvec weights;
};

/// Phase-conjugating design: weight_n = exp(-i(arg g_n + arg u_ris(dir)_n)),
/// which makes every term of u^T diag(g) s real and positive.
/// Throws std::invalid_argument if dir is not in `side`.
SpatialBeamformer design_spatial_beamformer(const cvec& g, const AngularDirection& dir, const ArrayGeometry& ris,
                                            Side side);

/// u_ris(dir)^T diag(g) s.
std::complex<double> ris_beampattern_gain(const SpatialBeamformer& s, const cvec& g, const AngularDirection& dir,
                                          const ArrayGeometry& ris);

/// Two-way radar path coefficient gamma for a target at `dir`:
/// sqrt(P Delta G_rad G_ris lambda^2 / (4 pi)) (s_rad^H u_rad) (u_ris^T diag(g) s).
std::complex<double> radar_gain_coefficient(const AngularDirection& dir, const SpatialBeamformer& s_side,
                                            const cvec& s_rad, const cvec& g, const SystemParams& params,
                                            const ArrayGeometry& ris, const ArrayGeometry& rad);

} // namespace starisac
