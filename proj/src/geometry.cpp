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


#include "starisac/geometry.hpp"

#include "starisac/errors.hpp"

#include <cmath>
#include <numbers>

namespace starisac {

using std::numbers::pi;

const char* to_string(Side side) noexcept
{
    return side == Side::transmissive ? "transmissive" : "reflective";
}

Side parse_side(const std::string& name)
{
    if (name == "transmissive" || name == "tr")
        return Side::transmissive;
    if (name == "reflective" || name == "re")
        return Side::reflective;
    throw ConfigError("unknown side '" + name + "'");
}

double deg_to_rad(double deg) noexcept { return deg * (pi / 180.0); }
double rad_to_deg(double rad) noexcept { return rad * (180.0 / pi); }

AngularDirection AngularDirection::from_radians(double az, double el)
{
    if (!std::isfinite(az) || !(az > -pi / 2 && az < 3 * pi / 2))
        throw std::invalid_argument("azimuth " + std::to_string(az) + " rad outside (-pi/2, 3pi/2)");
    if (az == pi / 2)
        throw std::invalid_argument("azimuth pi/2 lies in the array plane");
    if (!std::isfinite(el) || !(el > -pi / 2 && el < pi / 2))
        throw std::invalid_argument("elevation " + std::to_string(el) + " rad outside (-pi/2, pi/2)");
    return AngularDirection(az, el);
}

AngularDirection AngularDirection::from_degrees(double az_deg, double el_deg)
{
    if (!(az_deg > -90.0 && az_deg < 270.0) || az_deg == 90.0)
        throw std::invalid_argument("azimuth " + std::to_string(az_deg) + " deg outside (-90, 270) or in the array plane");
    if (!(el_deg > -90.0 && el_deg < 90.0))
        throw std::invalid_argument("elevation " + std::to_string(el_deg) + " deg outside (-90, 90)");
    return from_radians(deg_to_rad(az_deg), deg_to_rad(el_deg));
}

ArrayGeometry::ArrayGeometry(std::size_t n_elements) : n_(n_elements), side_(0)
{
    while (side_ * side_ < n_)
        ++side_;
    if (n_ == 0 || side_ * side_ != n_)
        throw std::invalid_argument("array size " + std::to_string(n_elements) + " is not a positive perfect square");
}

HalfSpace half_space_of(const AngularDirection& dir) noexcept
{
    return dir.az() > pi / 2 ? Side::transmissive : Side::reflective;
}

double element_gain(const AngularDirection& dir) noexcept
{
    const double ca = std::cos(dir.az());
    const double ce = std::cos(dir.el());
    return (pi / 4) * ca * ca * ce * ce;
}

cvec steering_vector(const ArrayGeometry& geom, const AngularDirection& dir)
{
    const std::size_t side = geom.side_length();
    const double row_rate = pi * std::cos(dir.el()) * std::sin(dir.az());
    const double col_rate = pi * std::sin(dir.el());
    cvec u(static_cast<Eigen::Index>(geom.size()));
    for (std::size_t m = 0; m < side; ++m)
        for (std::size_t n = 0; n < side; ++n)
            u[static_cast<Eigen::Index>(m * side + n)] =
                std::polar(1.0, row_rate * static_cast<double>(m) + col_rate * static_cast<double>(n));
    return u;
}

AngularDirection mirror_direction(const AngularDirection& dir)
{
    // pi - az stays inside (-pi/2, 3pi/2) and never equals pi/2 for valid input.
    return AngularDirection::from_radians(pi - dir.az(), dir.el());
}

} // namespace starisac
