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

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

namespace starisac {

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

enum class Side { transmissive, reflective };
using HalfSpace = Side;

const char* to_string(Side side) noexcept;
Side parse_side(const std::string& name);

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

/// Far-field direction [azimuth; elevation] in radians.
///
/// Azimuth lives in (-pi/2, 3pi/2) and elevation in (-pi/2, pi/2), both open.
/// The in-plane azimuth pi/2 belongs to neither half-space and is rejected.
class AngularDirection {
public:
    static AngularDirection from_radians(double az, double el);
    static AngularDirection from_degrees(double az_deg, double el_deg);

    double az() const noexcept { return az_; }
    double el() const noexcept { return el_; }

    bool operator==(const AngularDirection&) const = default;

private:
    AngularDirection(double az, double el) noexcept : az_(az), el_(el) {}

    double az_;
    double el_;
};

/// Uniform square array with half-wavelength spacing in the y-z plane,
/// normal along +x. Element (m, n) sits at (y, z) = (m, n) * lambda/2 and has
/// flat index m * side + n.
class ArrayGeometry {
public:
    explicit ArrayGeometry(std::size_t n_elements);

    std::size_t size() const noexcept { return n_; }
    std::size_t side_length() const noexcept { return side_; }

private:
    std::size_t n_;
    std::size_t side_;
};

HalfSpace half_space_of(const AngularDirection& dir) noexcept;

/// Element power gain (pi/4) cos^2(az) cos^2(el), shared by RIS and PESA elements.
double element_gain(const AngularDirection& dir) noexcept;

/// Entry m*side+n is exp(i*pi*(m*cos(el)*sin(az) + n*sin(el))).
cvec steering_vector(const ArrayGeometry& geom, const AngularDirection& dir);

/// [pi - az; el]; swaps half-spaces and leaves steering vectors unchanged.
AngularDirection mirror_direction(const AngularDirection& dir);

} // namespace starisac
