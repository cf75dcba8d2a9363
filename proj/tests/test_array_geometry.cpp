// SPDX-License-Identifier: Apache-2.0
//
// hmimo - hybrid millimeter-wave multiuser MIMO link-level simulator
// Copyright (C) 2026 The hmimo authors
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

#include <catch2/catch_amalgamated.hpp>

#include "hmimo/array_geometry.hpp"
#include "hmimo/random.hpp"

using namespace hmimo;
using Catch::Approx;

// Covered tests:
// - steering vector values at broadside and endfire
// - unit-modulus entries / norm
// - angle domain errors
// - detection matrix shape, normalization, grid columns
// - matched-filter peak on the grid and Dirichlet-kernel symmetry

TEST_CASE("ArrayGeometry - Invariants")
{
    CHECK(ArrayGeometry(8).spacing_ratio() == 0.5);
    CHECK_THROWS_AS(ArrayGeometry(0), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(4, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(4, -1.0), InvalidArgument);
}

TEST_CASE("AngleGrid - Spans [0, pi) without the endpoint")
{
    const AngleGrid grid(180);
    REQUIRE(grid.size() == 180);
    CHECK(grid.angle(0) == 0.0);
    CHECK(grid.angle(90) == Approx(kPi / 2));
    for (int i = 1; i < grid.size(); ++i)
        CHECK(grid.angle(i) > grid.angle(i - 1));
    CHECK(grid.angles().back() < kPi);
    CHECK_THROWS_AS(AngleGrid(0), InvalidArgument);
}

TEST_CASE("steering_vector - Known values")
{
    const CVector broadside = steering_vector(ArrayGeometry(8), kPi / 2, PhaseSign::negative);
    REQUIRE(broadside.size() == 8);
    for (int m = 0; m < 8; ++m)
        CHECK(std::abs(broadside(m) - cd(1.0, 0.0)) < 1e-14);

    const CVector endfire = steering_vector(ArrayGeometry(2, 0.5), 0.0, PhaseSign::negative);
    CHECK(std::abs(endfire(0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(endfire(1) - cd(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering_vector - Unit-modulus entries for any angle")
{
    Rng rng(3);
    for (int t = 0; t < 200; ++t)
    {
        const int m = 1 + static_cast<int>(rng() % 64);
        const double angle = uniform(rng, 0.0, kPi);
        const auto sign = (t % 2) ? PhaseSign::positive : PhaseSign::negative;
        const CVector v = steering_vector(ArrayGeometry(m), angle, sign);
        CHECK(v.squaredNorm() == Approx(m).epsilon(1e-12));
    }
}

TEST_CASE("steering_vector - Domain errors")
{
    const ArrayGeometry g(4);
    CHECK_THROWS_AS(steering_vector(g, -0.1, PhaseSign::negative), InvalidArgument);
    CHECK_THROWS_AS(steering_vector(g, kPi + 1e-9, PhaseSign::negative), InvalidArgument);
    CHECK_THROWS_AS(steering_vector(g, std::nan(""), PhaseSign::negative), InvalidArgument);
    CHECK_THROWS_AS(steering_vector(g, INFINITY, PhaseSign::positive), InvalidArgument);
    CHECK_NOTHROW(steering_vector(g, kPi, PhaseSign::negative));
}

TEST_CASE("detection_matrix - Shape and unit-norm columns")
{
    const CMatrix d = detection_matrix(ArrayGeometry(16), AngleGrid(180));
    REQUIRE(d.rows() == 16);
    REQUIRE(d.cols() == 180);
    for (int i = 0; i < d.cols(); ++i)
        CHECK(d.col(i).norm() == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("detection_matrix - Two-point grid")
{
    const CMatrix d = detection_matrix(ArrayGeometry(4), AngleGrid(2));
    REQUIRE(d.cols() == 2);
    // column 0 at angle 0: exp(j*pi*m) / 2
    for (int m = 0; m < 4; ++m)
    {
        CHECK(std::abs(d(m, 0) - std::polar(0.5, kPi * m)) < 1e-14);
        CHECK(std::abs(d(m, 1) - cd(0.5, 0.0)) < 1e-14);
    }
}

TEST_CASE("detection_matrix - Matched-filter peak on grid")
{
    const ArrayGeometry g(24);
    const AngleGrid grid(90);
    const CMatrix d = detection_matrix(g, grid);
    for (int i = 0; i < grid.size(); i += 7)
    {
        const CVector h = steering_vector(g, grid.angle(i), PhaseSign::negative);
        const Eigen::VectorXd mag = (d.transpose() * h).cwiseAbs();
        Eigen::Index best;
        mag.maxCoeff(&best);
        CHECK(best == i);
        CHECK(mag(i) == Approx(std::sqrt(24.0)).epsilon(1e-12));
    }
}

TEST_CASE("detection_matrix - Response depends only on the cosine difference")
{
    // Oracle: |gamma^T h| = |sin(pi M d u) / sin(pi d u)| / sqrt(M), u = cos(grid) - cos(alpha).
    const int m = 16;
    const double d = 0.5;
    const ArrayGeometry g(m, d);
    const AngleGrid grid(36);
    const CMatrix det = detection_matrix(g, grid);
    Rng rng(11);
    for (int t = 0; t < 100; ++t)
    {
        const double alpha = uniform(rng, 0.0, kPi);
        const int i = static_cast<int>(rng() % 36);
        const double u = std::cos(grid.angle(i)) - std::cos(alpha);
        const double value = std::abs((det.col(i).transpose() * steering_vector(g, alpha, PhaseSign::negative)).value());
        const double denom = std::sin(kPi * d * u);
        const double oracle =
            std::abs(denom) < 1e-12 ? std::sqrt(static_cast<double>(m)) : std::abs(std::sin(kPi * m * d * u) / denom) / std::sqrt(m);
        CHECK(value == Approx(oracle).margin(1e-9));

        // mirrored offset gives the same magnitude
        const double c_mirror = std::cos(grid.angle(i)) + u;
        if (c_mirror >= -1.0 && c_mirror <= 1.0)
        {
            const double mirrored =
                std::abs((det.col(i).transpose() * steering_vector(g, std::acos(c_mirror), PhaseSign::negative)).value());
            CHECK(mirrored == Approx(value).margin(1e-9));
        }
    }
}
