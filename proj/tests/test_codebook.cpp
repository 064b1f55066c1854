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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "starisac/codebook.hpp"
#include "starisac/errors.hpp"

#include <cmath>

using namespace starisac;

namespace {

const double r = std::sqrt(0.5);

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

bool same_set(const Eigen::MatrixXd& got, const std::vector<Eigen::VectorXd>& want)
{
    if (got.cols() != static_cast<Eigen::Index>(want.size()))
        return false;
    for (const auto& w : want) {
        bool found = false;
        for (Eigen::Index j = 0; j < got.cols(); ++j)
            found = found || (got.col(j) - w).cwiseAbs().maxCoeff() < 1e-15;
        if (!found)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("hadamard matrices")
{
    CHECK(hadamard(1)(0, 0) == 1);
    Eigen::MatrixXi h2(2, 2);
    h2 << 1, 1, 1, -1;
    CHECK(hadamard(2) == h2);
    const Eigen::MatrixXi h4 = hadamard(4);
    CHECK(h4.col(1) == Eigen::Vector4i(1, -1, 1, -1));
    CHECK(h4.col(2) == Eigen::Vector4i(1, 1, -1, -1));
    CHECK(h4.col(3) == Eigen::Vector4i(1, -1, -1, 1));
    CHECK_THROWS_AS(hadamard(12), std::invalid_argument);

    for (int n : {8, 64, 256}) {
        const Eigen::MatrixXi h = hadamard(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                REQUIRE(h(i, j) == oracle::hadamard_entry(static_cast<unsigned>(i), static_cast<unsigned>(j)));
        CHECK(h.transpose() * h == n * Eigen::MatrixXi::Identity(n, n));
    }
}

TEST_CASE("codebook selection")
{
    const auto books = build_codebooks(4, 1);
    CHECK(same_set(books.transmissive.codewords, {r * vec({1, 1, 1, 1}), r * vec({1, -1, 1, -1})}));
    CHECK(same_set(books.reflective.codewords, {r * vec({1, 1, -1, -1}), r * vec({1, -1, -1, 1})}));

    const auto tiny = build_codebooks(2, 0);
    CHECK(same_set(tiny.transmissive.codewords, {r * vec({1, 1})}));
    CHECK(same_set(tiny.reflective.codewords, {r * vec({1, -1})}));

    CHECK_THROWS_AS(build_codebooks(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_codebooks(6, 1), std::invalid_argument);

    // Both enumeration orders use the same sets.
    for (auto [m, b] : {std::pair{8, 2}, {16, 3}, {32, 2}}) {
        const auto nat = build_codebooks(m, b, ColumnOrder::natural);
        const auto rev = build_codebooks(m, b, ColumnOrder::reversed_tr);
        std::vector<Eigen::VectorXd> cols;
        for (Eigen::Index j = 0; j < rev.transmissive.codewords.cols(); ++j)
            cols.push_back(rev.transmissive.codewords.col(j));
        CHECK(same_set(nat.transmissive.codewords, cols));
        CHECK(nat.reflective.columns == rev.reflective.columns);
        CHECK(rev.transmissive.columns.front() == (1 << b) - 1);
        CHECK(nat.transmissive.columns.front() == 0);
        CHECK(rev.reflective.columns.front() == m - (1 << b));
    }
}

TEST_CASE("codebook orthogonality")
{
    for (auto [m, b] : {std::pair{4, 1}, {8, 1}, {8, 2}, {16, 2}, {64, 5}}) {
        const auto books = build_codebooks(m, b);
        Eigen::MatrixXi all(m, 2 << b);
        all << books.transmissive.signs, books.reflective.signs;
        CHECK(all.transpose() * all == m * Eigen::MatrixXi::Identity(2 << b, 2 << b));
        CHECK(books.transmissive.codeword(0).squaredNorm() == doctest::Approx(m / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("radar-only codes")
{
    const CodePair p2 = radar_only_codes(2);
    CHECK((p2.tr.values - r * cvec::Ones(2)).norm() < 1e-15);
    CHECK(std::abs(p2.re.values(1) + r) < 1e-15);
    const CodePair p4 = radar_only_codes(4);
    CHECK((p4.re.values.real() - r * vec({1, -1, -1, 1})).norm() < 1e-15);
    CHECK(std::abs(radar_only_codes(8).tr.values.dot(radar_only_codes(8).re.values)) < 1e-15);

    // Same as one slot with M = P and b = 0.
    const auto books = build_codebooks(16, 0);
    const std::vector<unsigned> zero{0};
    const CodePair p16 = radar_only_codes(16);
    CHECK((assemble_code_sequence(books.transmissive, zero, 16).values - p16.tr.values).norm() == 0.0);
    CHECK((assemble_code_sequence(books.reflective, zero, 16).values - p16.re.values).norm() == 0.0);
}

TEST_CASE("code sequence assembly")
{
    const auto books = build_codebooks(4, 1, ColumnOrder::natural);
    const std::vector<unsigned> msgs{1, 0};
    const CodeSequence seq = assemble_code_sequence(books.transmissive, msgs, 8);
    CHECK((seq.values.real() - r * vec({1, -1, 1, -1, 1, 1, 1, 1})).norm() < 1e-15);
    CHECK(seq.values.imag().norm() == 0.0);
    CHECK(seq.messages == msgs);

    const std::vector<unsigned> zeros(4, 0);
    const CodeSequence rep = assemble_code_sequence(books.reflective, zeros, 16);
    for (int p = 0; p < 16; ++p)
        CHECK(rep.values(p) == rep.values(p % 4));

    CHECK_THROWS(assemble_code_sequence(books.transmissive, msgs, 12));
    const std::vector<unsigned> bad{2, 0};
    CHECK_THROWS(assemble_code_sequence(books.transmissive, bad, 8));

    const auto b2 = build_codebooks(8, 2);
    const std::vector<unsigned> a{3, 1, 0, 2}, c{0, 2, 2, 1};
    const cvec tr = assemble_code_sequence(b2.transmissive, a, 32).values;
    const cvec re = assemble_code_sequence(b2.reflective, c, 32).values;
    CHECK((tr.cwiseAbs2() + re.cwiseAbs2() - Eigen::VectorXd::Ones(32)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("bit labels and text round trip")
{
    CHECK(index_to_bits(6, 3) == std::vector<std::uint8_t>{1, 1, 0});
    CHECK(index_to_bits(1, 2) == std::vector<std::uint8_t>{0, 1});
    for (unsigned i = 0; i < 16; ++i)
        CHECK(bits_to_index(index_to_bits(i, 4)) == i);

    const auto book = build_codebooks(8, 2).reflective;
    CHECK(codebook_from_text(codebook_to_text(book)) == book.codewords);
    CHECK(parse_column_order(to_string(ColumnOrder::natural)) == ColumnOrder::natural);
    CHECK_THROWS_AS(parse_column_order("sideways"), ConfigError);
}
