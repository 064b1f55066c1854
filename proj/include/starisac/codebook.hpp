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

#include "starisac/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace starisac {

bool is_power_of_two(long long n) noexcept;

/// Sylvester Hadamard matrix of order n (n a power of two), entries +-1.
Eigen::MatrixXi hadamard(int n);

/// Message-index -> Hadamard-column enumeration inside each codebook.
/// `reversed_tr` walks the transmissive set right to left and the reflective
/// set left to right; `natural` walks both left to right. The codeword sets
/// are identical under both orders.
enum class ColumnOrder { natural, reversed_tr };

const char* to_string(ColumnOrder order) noexcept;
ColumnOrder parse_column_order(const std::string& name);

/// 2^b orthogonal codewords of length M for one half-space.
/// Transmissive takes the first 2^b columns of H_M / sqrt(2), reflective the
/// last 2^b.
struct Codebook {
    int slot_pulses = 0; ///< M
    int bits = 0;        ///< b
    Side side = Side::transmissive;
    ColumnOrder order = ColumnOrder::reversed_tr;
    std::vector<int> columns;     ///< Hadamard column used by message index i
    Eigen::MatrixXi signs;        ///< M x 2^b, +-1; codeword i is signs.col(i) / sqrt(2)
    Eigen::MatrixXd codewords;    ///< M x 2^b, +-1/sqrt(2)

    std::size_t size() const noexcept { return columns.size(); }
    Eigen::VectorXd codeword(std::size_t index) const;
};

struct CodebookPair {
    Codebook transmissive;
    Codebook reflective;
};

CodebookPair build_codebooks(int slot_pulses, int bits, ColumnOrder order = ColumnOrder::reversed_tr);

/// Per-CPI code sequence: P entries, a slot boundary every `slot_pulses`.
struct CodeSequence {
    cvec values;
    int slot_pulses = 0;
    std::vector<unsigned> messages;

    Eigen::Index length() const noexcept { return values.size(); }
};

struct CodePair {
    CodeSequence tr;
    CodeSequence re;
};

/// Concatenates codeword messages[m] for every slot m. Requires P to be a
/// multiple of M and messages.size() == P/M.
CodeSequence assemble_code_sequence(const Codebook& book, std::span<const unsigned> messages, int pulses);

/// Radar-only pair: first and last column of H_P scaled by 1/sqrt(2).
CodePair radar_only_codes(int pulses);

/// Natural binary labeling, most significant bit first.
std::vector<std::uint8_t> index_to_bits(unsigned index, int bits);
unsigned bits_to_index(std::span<const std::uint8_t> bits);

/// One codeword per line, entries space separated.
std::string codebook_to_text(const Codebook& book);
/// Reads a text dump back as an M x 2^b matrix (codewords as columns).
Eigen::MatrixXd codebook_from_text(const std::string& text);

} // namespace starisac
