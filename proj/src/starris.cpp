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


#include "starisac/starris.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starisac {

SpatialBeamformer design_spatial_beamformer(const cvec& g, const AngularDirection& dir, const ArrayGeometry& ris,
                                            Side side)
{
    if (half_space_of(dir) != side)
        throw std::invalid_argument(std::string("beam direction is not in the ") + to_string(side) + " half-space");
    if (g.size() != static_cast<Eigen::Index>(ris.size()))
        throw std::invalid_argument("feeder channel length does not match the STAR-RIS");
    const cvec u = steering_vector(ris, dir);
    SpatialBeamformer s{side, cvec(g.size())};
    for (Eigen::Index n = 0; n < g.size(); ++n)
        s.weights[n] = std::polar(1.0, -(std::arg(g[n]) + std::arg(u[n])));
    return s;
}

std::complex<double> ris_beampattern_gain(const SpatialBeamformer& s, const cvec& g, const AngularDirection& dir,
                                          const ArrayGeometry& ris)
{
    const cvec u = steering_vector(ris, dir);
    return (u.transpose() * g.cwiseProduct(s.weights))(0, 0);
}

std::complex<double> radar_gain_coefficient(const AngularDirection& dir, const SpatialBeamformer& s_side,
                                            const cvec& s_rad, const cvec& g, const SystemParams& params,
                                            const ArrayGeometry& ris, const ArrayGeometry& rad)
{
    if (half_space_of(dir) != s_side.side)
        throw std::invalid_argument("target direction and beamformer side disagree");
    const double lambda = params.wavelength();
    const double gain = element_gain(dir);
    const double amplitude =
        std::sqrt(params.pulse_energy() * gain * gain * lambda * lambda / (4.0 * std::numbers::pi));
    const std::complex<double> receive = s_rad.dot(steering_vector(rad, dir)); // s_rad^H u_rad
    return amplitude * receive * ris_beampattern_gain(s_side, g, dir, ris);
}

} // namespace starisac
