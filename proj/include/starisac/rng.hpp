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

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <string_view>

namespace starisac {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Stable 32-bit identifier for an experiment name (FNV-1a).
std::uint32_t experiment_id(std::string_view name) noexcept;

/// Random stream addressed by (seed, experiment, cell, trial).
///
/// Every Monte Carlo trial owns one stream; the stream position is the first
/// counter word, the remaining three words carry the trial address. Two
/// streams with different addresses never share a Philox input block, so
/// results do not depend on how trials are scheduled across workers.
///
/// Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint32_t experiment, std::uint32_t cell, std::uint32_t trial) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0) noexcept;

private:
    void refill() noexcept;

    PhiloxKey key_;
    PhiloxCounter counter_;
    PhiloxCounter block_{};
    unsigned used_ = 4;
};

/// Seed plus experiment name; hands out per-(cell, trial) streams.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t experiment = 0;

    StreamKey() = default;
    StreamKey(std::uint64_t s, std::string_view name) : seed(s), experiment(experiment_id(name)) {}

    Rng stream(std::uint32_t cell, std::uint32_t trial) const noexcept { return Rng(seed, experiment, cell, trial); }
};

} // namespace starisac
