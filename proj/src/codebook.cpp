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


#include "starisac/codebook.hpp"

#include "starisac/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace starisac {

bool is_power_of_two(long long n) noexcept
{
    return n > 0 && (n & (n - 1)) == 0;
}

Eigen::MatrixXi hadamard(int n)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("Hadamard order " + std::to_string(n) + " is not a power of 2");
    Eigen::MatrixXi h(n, n);
    h(0, 0) = 1;
    for (int m = 1; m < n; m *= 2) {
        h.block(0, m, m, m) = h.block(0, 0, m, m);
        h.block(m, 0, m, m) = h.block(0, 0, m, m);
        h.block(m, m, m, m) = -h.block(0, 0, m, m);
    }
    return h;
}

const char* to_string(ColumnOrder order) noexcept
{
    return order == ColumnOrder::natural ? "natural" : "reversed_tr";
}

ColumnOrder parse_column_order(const std::string& name)
{
    if (name == "natural")
        return ColumnOrder::natural;
    if (name == "reversed_tr")
        return ColumnOrder::reversed_tr;
    throw ConfigError("unknown column order '" + name + "'");
}

Eigen::VectorXd Codebook::codeword(std::size_t index) const
{
    if (index >= size())
        throw std::out_of_range("codeword index " + std::to_string(index) + " >= " + std::to_string(size()));
    return codewords.col(static_cast<Eigen::Index>(index));
}

namespace {

Codebook make_book(const Eigen::MatrixXi& h, int bits, Side side, ColumnOrder order)
{
    const int m = static_cast<int>(h.cols());
    const int count = 1 << bits;
    Codebook book;
    book.slot_pulses = m;
    book.bits = bits;
    book.side = side;
    book.order = order;
    book.columns.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        int column;
        if (side == Side::transmissive)
            column = order == ColumnOrder::reversed_tr ? count - 1 - i : i;
        else
            column = m - count + i;
        book.columns[static_cast<std::size_t>(i)] = column;
    }
    book.signs.resize(m, count);
    for (int i = 0; i < count; ++i)
        book.signs.col(i) = h.col(book.columns[static_cast<std::size_t>(i)]);
    book.codewords = book.signs.cast<double>() * std::numbers::sqrt2 / 2.0;
    return book;
}

} // namespace

CodebookPair build_codebooks(int slot_pulses, int bits, ColumnOrder order)
{
    if (!is_power_of_two(slot_pulses))
        throw std::invalid_argument("slot length M=" + std::to_string(slot_pulses) + " is not a power of 2");
    if (bits < 0 || bits > 30 || (2LL << bits) > slot_pulses)
        throw std::invalid_argument("need M >= 2^(b+1); got M=" + std::to_string(slot_pulses) +
                                    ", b=" + std::to_string(bits));
    const Eigen::MatrixXi h = hadamard(slot_pulses);
    return {make_book(h, bits, Side::transmissive, order), make_book(h, bits, Side::reflective, order)};
}

CodeSequence assemble_code_sequence(const Codebook& book, std::span<const unsigned> messages, int pulses)
{
    const int m = book.slot_pulses;
    if (m <= 0 || pulses <= 0 || pulses % m != 0)
        throw std::invalid_argument("CPI length " + std::to_string(pulses) + " is not a multiple of M=" +
                                    std::to_string(m));
    const std::size_t slots = static_cast<std::size_t>(pulses / m);
    if (messages.size() != slots)
        throw std::invalid_argument("expected " + std::to_string(slots) + " slot messages, got " +
                                    std::to_string(messages.size()));
    CodeSequence seq;
    seq.slot_pulses = m;
    seq.messages.assign(messages.begin(), messages.end());
    seq.values.resize(pulses);
    for (std::size_t s = 0; s < slots; ++s) {
        if (messages[s] >= book.size())
            throw std::out_of_range("message index " + std::to_string(messages[s]) + " >= " +
                                    std::to_string(book.size()));
        seq.values.segment(static_cast<Eigen::Index>(s) * m, m) =
            book.codewords.col(messages[s]).cast<std::complex<double>>();
    }
    return seq;
}

CodePair radar_only_codes(int pulses)
{
    if (!is_power_of_two(pulses) || pulses < 2)
        throw std::invalid_argument("radar-only codes need P a power of 2, P >= 2; got " + std::to_string(pulses));
    const CodebookPair books = build_codebooks(pulses, 0, ColumnOrder::natural);
    const unsigned zero = 0;
    return {assemble_code_sequence(books.transmissive, {&zero, 1}, pulses),
            assemble_code_sequence(books.reflective, {&zero, 1}, pulses)};
}

std::vector<std::uint8_t> index_to_bits(unsigned index, int bits)
{
    if (bits < 0 || bits > 31 || (bits < 31 && index >= (1u << bits)))
        throw std::out_of_range("index " + std::to_string(index) + " does not fit in " + std::to_string(bits) + " bits");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
    for (int k = 0; k < bits; ++k)
        out[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((index >> (bits - 1 - k)) & 1u);
    return out;
}

unsigned bits_to_index(std::span<const std::uint8_t> bits)
{
    unsigned index = 0;
    for (std::uint8_t bit : bits)
        index = (index << 1) | (bit & 1u);
    return index;
}

std::string codebook_to_text(const Codebook& book)
{
    std::string out;
    char buf[64];
    for (Eigen::Index i = 0; i < book.codewords.cols(); ++i) {
        for (Eigen::Index p = 0; p < book.codewords.rows(); ++p) {
            if (p > 0)
                out += ' ';
            const auto res = std::to_chars(buf, buf + sizeof buf, book.codewords(p, i));
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

Eigen::MatrixXd codebook_from_text(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v)
            row.push_back(v);
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("ragged codebook dump");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        return {};
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t p = 0; p < rows[i].size(); ++p)
            out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) = rows[i][p];
    return out;
}

} // namespace starisac
