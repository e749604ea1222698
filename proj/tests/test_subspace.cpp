// SPDX-License-Identifier: Apache-2.0
//
// sarsub: quantitative signal-subspace SAR imaging toolkit
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

#include "support.hpp"

#include "sarsub/errors.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

using namespace sarsub;

namespace {

Eigen::VectorXd singular_values(const Eigen::MatrixXcd &m)
{
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

BlockSVD diagonal_svd(const Eigen::VectorXd &s)
{
    const auto M = s.size();
    return BlockSVD{{BlockFactors{Eigen::MatrixXcd::Identity(M, M), s, Eigen::MatrixXcd::Identity(M, M)}}};
}

} // namespace

TEST_SUITE("prony")
{
    TEST_CASE("pronyfy builds a Hankel matrix")
    {
        const std::vector<Complex> col{1, 2, 3, 4, 5};
        Eigen::MatrixXcd expected(3, 3);
        expected << 1, 2, 3, 2, 3, 4, 3, 4, 5;
        CHECK(pronyfy(col) == expected);
    }

    TEST_CASE("constant column gives a rank one block")
    {
        const std::vector<Complex> col(9, Complex(0.5, -2.0));
        const auto block = pronyfy(col);
        CHECK(block.isApprox(Eigen::MatrixXcd::Constant(5, 5, Complex(0.5, -2.0))));
        const auto s = singular_values(block);
        CHECK(s[1] / s[0] < 1e-12);
    }

    TEST_CASE("unit-modulus geometric column is rank one")
    {
        const int M = 20;
        const Complex z = std::polar(1.0, 0.731);
        std::vector<Complex> col;
        for (int k = 0; k < 2 * M - 1; ++k)
            col.push_back(std::pow(z, k));
        const auto block = pronyfy(col);
        Eigen::VectorXcd u(M);
        for (int k = 0; k < M; ++k)
            u[k] = std::pow(z, k);
        CHECK((block - u * u.transpose()).norm() < 1e-12 * block.norm());
        const auto s = singular_values(block);
        CHECK(s[1] / s[0] < 1e-12);
    }

    TEST_CASE("pronyfy is linear")
    {
        std::vector<Complex> u, v, w;
        const Complex alpha(0.3, -1.1);
        for (int k = 0; k < 7; ++k) {
            u.emplace_back(std::sin(k + 1.0), std::cos(2.0 * k));
            v.emplace_back(k * 0.5, -k * 0.25);
            w.push_back(alpha * u.back() + v.back());
        }
        CHECK((pronyfy(w) - (alpha * pronyfy(u) + pronyfy(v))).norm() < 1e-14);
    }

    TEST_CASE("even or short columns are rejected")
    {
        CHECK_THROWS_AS((void)pronyfy(std::vector<Complex>(4)), DimensionError);
        CHECK_THROWS_AS((void)pronyfy(std::vector<Complex>(1)), DimensionError);
    }

    TEST_CASE("assemble keeps position order")
    {
        const auto g = testing::small_geometry(5, 4);
        const auto cube = simulate_born(testing::three_targets(), g);
        const auto blocks = assemble_blocks(cube);
        REQUIRE(blocks.blocks.size() == 4);
        CHECK(blocks.block_size == 5);
        for (int n = 0; n < 4; ++n) {
            const Eigen::VectorXcd col = cube.values.col(n);
            CHECK(blocks.blocks[static_cast<std::size_t>(n)] ==
                  pronyfy(std::span<const Complex>(col.data(), static_cast<std::size_t>(col.size()))));
        }
    }

    TEST_CASE("assemble rejects a cube that does not match its geometry")
    {
        const auto g = testing::small_geometry(5, 4);
        auto cube = simulate_born(testing::single_target(), g);
        cube.values.conservativeResize(cube.values.rows() - 1, Eigen::NoChange);
        CHECK_THROWS_AS((void)assemble_blocks(cube), DimensionError);
    }

    TEST_CASE("single target blocks are rank one with the predicted norm")
    {
        const auto g = testing::default_geometry();
        const auto cube = simulate_born(testing::single_target(), g);
        const auto svd = block_svd(assemble_blocks(cube));
        for (int n = 0; n < g.num_positions(); ++n) {
            const auto &s = svd.factors[static_cast<std::size_t>(n)].singular_values;
            const double r = (g.position(n) - Vec3(1.0, 1.0, 0.0)).norm();
            CHECK(s[1] / s[0] < 1e-10);
            CHECK(s[0] == doctest::Approx(g.num_freq_M() * 3.4 / std::pow(4.0 * kPi * r, 2)).epsilon(1e-10));
        }
    }

    TEST_CASE("three target blocks have rank three")
    {
        const auto g = testing::default_geometry();
        const auto svd = block_svd(assemble_blocks(simulate_born(testing::three_targets(), g)));
        for (const auto &f : svd.factors) {
            const auto &s = f.singular_values;
            CHECK(s[3] / s[0] < 1e-8);
            CHECK(s[2] / s[0] > 1e-8);
        }
    }
}

TEST_SUITE("subspace")
{
    TEST_CASE("zero and identity blocks")
    {
        PronyBlocks blocks;
        blocks.block_size = 4;
        blocks.blocks = {Eigen::MatrixXcd::Zero(4, 4), Eigen::MatrixXcd::Identity(4, 4)};
        const auto svd = block_svd(blocks);
        CHECK(svd.factors[0].singular_values.norm() == 0.0);
        CHECK((svd.factors[1].singular_values - Eigen::VectorXd::Ones(4)).norm() < 1e-14);
    }

    TEST_CASE("factors reconstruct the block")
    {
        const auto g = testing::default_geometry();
        auto cube = add_noise(simulate_born(testing::three_targets(), g), 30.0, 8);
        const auto blocks = assemble_blocks(cube);
        const auto svd = block_svd(blocks, 2);
        for (std::size_t n = 0; n < blocks.blocks.size(); ++n) {
            const auto &f = svd.factors[n];
            const Eigen::MatrixXcd rebuilt = f.U * f.singular_values.asDiagonal() * f.V.adjoint();
            CHECK((rebuilt - blocks.blocks[n]).norm() < 1e-10 * blocks.blocks[n].norm());
            for (Eigen::Index j = 1; j < f.singular_values.size(); ++j)
                CHECK(f.singular_values[j] <= f.singular_values[j - 1]);
        }
    }

    TEST_CASE("non-finite blocks are a numerical error")
    {
        PronyBlocks blocks;
        blocks.block_size = 2;
        blocks.blocks = {Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)};
        blocks.blocks[1](0, 1) = Complex(std::nan(""), 0.0);
        try {
            (void)block_svd(blocks);
            FAIL("expected NumericalError");
        } catch (const NumericalError &e) {
            CHECK(std::string(e.what()).find("block 1") != std::string::npos);
        }
    }

    TEST_CASE("single dominant value")
    {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(5);
        s[0] = 2.0;
        for (auto w : {SignalWeighting::pseudo_inverse, SignalWeighting::as_published}) {
            const auto spec = regularize_spectrum(diagonal_svd(s), 0.5, 0.01, std::nullopt, w);
            CHECK(spec.rank[0] == 1);
            Eigen::VectorXd expected = Eigen::VectorXd::Ones(5);
            expected[0] = 0.5;
            CHECK((spec.inverse[0] - expected).norm() < 1e-15);
        }
    }

    TEST_CASE("full rank has no regularized entries")
    {
        Eigen::VectorXd s(4);
        s << 4.0, 2.0, 1.0, 0.5;
        const auto pinv = regularize_spectrum(diagonal_svd(s), 1e-6, 0.1);
        CHECK(pinv.rank[0] == 4);
        for (int j = 0; j < 4; ++j)
            CHECK(pinv.inverse[0][j] == doctest::Approx(1.0 / s[j]));
        const auto verbatim = regularize_spectrum(diagonal_svd(s), 1e-6, 0.1, std::nullopt,
                                                  SignalWeighting::as_published);
        for (int j = 0; j < 4; ++j)
            CHECK(verbatim.inverse[0][j] == doctest::Approx(s[j] / 16.0));
    }

    TEST_CASE("rank threshold and override")
    {
        Eigen::VectorXd s(5);
        s << 1.0, 0.2, 0.01, 0.0099, 0.0;
        auto spec = regularize_spectrum(diagonal_svd(s), 1e-4, 0.01);
        CHECK(spec.rank[0] == 3);
        CHECK(spec.inverse[0][3] == doctest::Approx(1e4));
        CHECK(spec.inverse[0][4] == doctest::Approx(1e4));
        spec = regularize_spectrum(diagonal_svd(s), 1e-4, 0.01, 1);
        CHECK(spec.rank[0] == 1);
        CHECK(spec.inverse[0][1] == doctest::Approx(1e4));
    }

    TEST_CASE("all-zero block has an all-zero spectrum")
    {
        const auto spec = regularize_spectrum(diagonal_svd(Eigen::VectorXd::Zero(3)), 1e-3);
        CHECK(spec.rank[0] == 0);
        CHECK(spec.inverse[0].norm() == 0.0);
    }

    TEST_CASE("invalid regularization parameters")
    {
        const auto svd = diagonal_svd(Eigen::VectorXd::Ones(3));
        CHECK_THROWS_AS((void)regularize_spectrum(svd, 0.0), ConfigError);
        CHECK_THROWS_AS((void)regularize_spectrum(svd, -1e-3), ConfigError);
        CHECK_THROWS_AS((void)regularize_spectrum(svd, 1e-3, 0.0), ConfigError);
        CHECK_THROWS_AS((void)regularize_spectrum(svd, 1e-3, 1.0), ConfigError);
        CHECK_THROWS_AS((void)regularize_spectrum(svd, 1e-3, 0.01, 4), ConfigError);
        CHECK_THROWS_AS((void)regularize_spectrum(svd, 1e-3, 0.01, -1), ConfigError);
    }

    TEST_CASE("noiseless three target rank is detected")
    {
        const auto g = testing::default_geometry();
        const auto d = testing::decompose(simulate_born(testing::three_targets(), g), 1e-8);
        for (int r : d.spectrum.rank)
            CHECK(r == 3);
    }

    TEST_CASE("spectrum scales inversely with the data")
    {
        Eigen::VectorXd s(5);
        s << 3.0, 1.0, 0.5, 1e-4, 0.0;
        const double lambda = 7.5;
        for (auto w : {SignalWeighting::pseudo_inverse, SignalWeighting::as_published}) {
            const auto a = regularize_spectrum(diagonal_svd(s), 1e-3, 0.01, std::nullopt, w);
            const auto b = regularize_spectrum(diagonal_svd(lambda * s), 1e-3, 0.01, std::nullopt, w);
            CHECK((b.inverse[0] * lambda - a.inverse[0]).norm() < 1e-12 * a.inverse[0].norm());
        }
    }

    TEST_CASE("smaller epsilon raises only the noise entries")
    {
        Eigen::VectorXd s(4);
        s << 3.0, 1.0, 1e-3, 0.0;
        const auto a = regularize_spectrum(diagonal_svd(s), 1e-2);
        const auto b = regularize_spectrum(diagonal_svd(s), 1e-4);
        REQUIRE(a.rank[0] == 2);
        CHECK(b.inverse[0].head(2) == a.inverse[0].head(2));
        CHECK((b.inverse[0].tail(2).array() > a.inverse[0].tail(2).array()).all());
    }
}
