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

#include "hmimo/channel_model.hpp"

using namespace hmimo;
using Catch::Approx;

TEST_CASE("RicianFactor - Weights")
{
    for (double k : {0.0, 0.5, 1.0, 2.0, 10.0, 1e9})
    {
        const RicianFactor r(k);
        CHECK(r.los_weight() * r.los_weight() + r.scatter_weight() * r.scatter_weight() == Approx(1.0).epsilon(1e-14));
    }
    CHECK(RicianFactor(0.0).los_weight() == 0.0);
    CHECK(RicianFactor(INFINITY).scatter_weight() == 0.0);
    CHECK_THROWS_AS(RicianFactor(-1.0), InvalidArgument);
    CHECK_THROWS_AS(RicianFactor(std::nan("")), InvalidArgument);
}

TEST_CASE("los_channel - Broadside, norm and rank")
{
    const ArrayGeometry bs(4), ue(2);
    const CMatrix h = los_channel(bs, ue, kPi / 2, kPi / 2);
    REQUIRE(h.rows() == 4);
    REQUIRE(h.cols() == 2);
    CHECK((h - CMatrix::Ones(4, 2)).cwiseAbs().maxCoeff() < 1e-14);

    Rng rng(5);
    for (int t = 0; t < 50; ++t)
    {
        const CMatrix r = los_channel(bs, ue, uniform(rng, 0, kPi), uniform(rng, 0, kPi));
        CHECK(r.squaredNorm() == Approx(8.0).epsilon(1e-12));
        const Eigen::VectorXd s = Eigen::JacobiSVD<CMatrix>(r).singularValues();
        CHECK(s(1) < 1e-12 * s(0));
    }
    CHECK_THROWS_AS(los_channel(bs, ue, 4.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(los_channel(bs, ue, 0.0, -1.0), InvalidArgument);
}

TEST_CASE("scatter_iid - Moments and determinism")
{
    Rng rng(42);
    const CMatrix s = scatter_iid(1000, 100, rng);
    const double n = static_cast<double>(s.size());
    const cd mean = s.sum() / n;
    CHECK(std::abs(mean) < 0.02);
    const double var = (s.array() - mean).abs2().sum() / (n - 1);
    CHECK(var >= 0.97);
    CHECK(var <= 1.03);
    // real and imaginary parts each carry half the power
    const double re_var = s.real().array().square().mean();
    CHECK(re_var == Approx(0.5).margin(0.02));

    Rng a(9), b(9);
    CHECK(scatter_iid(8, 4, a) == scatter_iid(8, 4, b));
    CHECK_THROWS_AS(scatter_iid(0, 4, a), InvalidArgument);
}

TEST_CASE("scatter_clustered - Degenerate single path equals LOS")
{
    const ArrayGeometry bs(8), ue(4);
    const ScatterPath path{0.7, 2.1, cd(1.0, 0.0)};
    const CMatrix s = scatter_from_paths(bs, ue, std::span<const ScatterPath>(&path, 1));
    CHECK((s - los_channel(bs, ue, 0.7, 2.1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("scatter_clustered - Normalization by total path count")
{
    const ArrayGeometry bs(8), ue(4);
    // eight identical unit-gain paths sum to 8 * LOS, scaled by 1/sqrt(8)
    const std::vector<ScatterPath> paths(8, ScatterPath{1.0, 0.4, cd(1.0, 0.0)});
    const CMatrix s = scatter_from_paths(bs, ue, paths);
    CHECK((s - std::sqrt(8.0) * los_channel(bs, ue, 1.0, 0.4)).cwiseAbs().maxCoeff() < 1e-12);

    ClusterConfig cfg{8, std::vector<int>(8, 1), 0.1};
    Rng rng(1);
    CHECK(draw_cluster_paths(cfg, rng).size() == 8);
}

TEST_CASE("scatter_clustered - Expected energy is M*P")
{
    const ArrayGeometry bs(16), ue(4);
    const ClusterConfig cfg{3, {2, 3, 1}, 0.1};
    Rng rng(77);
    double sum = 0.0;
    for (int t = 0; t < 1000; ++t)
        sum += scatter_clustered(bs, ue, cfg, rng).squaredNorm();
    CHECK(sum / 1000.0 == Approx(64.0).epsilon(0.10));
}

TEST_CASE("scatter_clustered - Path angles stay in [0, pi]")
{
    const ClusterConfig cfg{4, {5, 5, 5, 5}, 1.0};
    Rng rng(3);
    for (int t = 0; t < 100; ++t)
        for (const auto &p : draw_cluster_paths(cfg, rng))
        {
            CHECK(p.theta >= 0.0);
            CHECK(p.theta <= kPi);
            CHECK(p.phi >= 0.0);
            CHECK(p.phi <= kPi);
        }
}

TEST_CASE("ClusterConfig - Validation")
{
    CHECK_THROWS_AS((ClusterConfig{2, {1}, 0.1}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ClusterConfig{1, {0}, 0.1}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ClusterConfig{0, {}, 0.1}).validate(), InvalidArgument);
    CHECK_NOTHROW((ClusterConfig{2, {1, 3}, 0.0}).validate());
}

TEST_CASE("assemble - Limits of the K-factor")
{
    const ArrayGeometry bs(8), ue(2);
    Rng rng(12);
    UserChannel u;
    u.los = los_channel(bs, ue, 1.2, 0.3);
    u.scatter = scatter_iid(8, 2, rng);

    u.rician = RicianFactor(1e9);
    CHECK((assemble(u) - u.los).norm() / u.los.norm() < 1e-4);

    u.rician = RicianFactor(0.0);
    CHECK(assemble(u) == u.scatter);

    UserChannel bad = u;
    bad.scatter = CMatrix::Zero(8, 3);
    CHECK_THROWS_AS(assemble(bad), InvalidArgument);
}

TEST_CASE("assemble - Energy and power split")
{
    const ArrayGeometry bs(16), ue(4);
    for (double kappa : {0.5, 2.0, 8.0})
    {
        Rng rng(100 + static_cast<std::uint64_t>(kappa * 10));
        double total = 0.0, los_part = 0.0;
        for (int t = 0; t < 1000; ++t)
        {
            const UserChannel u = draw_user_channel(bs, ue, RicianFactor(kappa), ScatterMode::iid, std::nullopt, rng);
            const CMatrix h = assemble(u);
            total += h.squaredNorm();
            los_part += (h - u.rician.scatter_weight() * u.scatter).squaredNorm();
        }
        CHECK(total / 1000.0 == Approx(64.0).epsilon(0.10));
        CHECK(los_part / total == Approx(kappa / (kappa + 1.0)).epsilon(0.10));
    }
}

TEST_CASE("draw_user_channel - Fixed angles and clustered mode")
{
    const ArrayGeometry bs(8), ue(4);
    Rng rng(4);
    const UserChannel u = draw_user_channel(bs, ue, RicianFactor(1.0), ScatterMode::iid, std::nullopt, rng, 0.5, 1.5);
    CHECK(u.theta == 0.5);
    CHECK(u.phi == 1.5);
    CHECK((u.los - los_channel(bs, ue, 0.5, 1.5)).norm() < 1e-14);
    CHECK_THROWS_AS(draw_user_channel(bs, ue, RicianFactor(1.0), ScatterMode::clustered, std::nullopt, rng), InvalidArgument);
    const auto c = draw_user_channel(bs, ue, RicianFactor(1.0), ScatterMode::clustered, ClusterConfig{}, rng);
    CHECK(c.scatter.rows() == 8);
    CHECK(c.scatter.cols() == 4);
}
