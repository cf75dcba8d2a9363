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

#ifndef HMIMO_CHANNEL_MODEL_HPP
#define HMIMO_CHANNEL_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "array_geometry.hpp"
#include "random.hpp"

namespace hmimo
{
    /// Rician K-factor on a linear scale. An infinite value denotes pure LOS.
    class RicianFactor
    {
    public:
        explicit RicianFactor(double kappa = 0.0) : kappa_(kappa)
        {
            if (std::isnan(kappa) || kappa < 0.0)
                throw InvalidArgument("RicianFactor: kappa must be >= 0");
        }

        double kappa() const { return kappa_; }

        double los_weight() const
        {
            if (std::isinf(kappa_))
                return 1.0;
            return std::sqrt(kappa_ / (kappa_ + 1.0));
        }

        double scatter_weight() const
        {
            if (std::isinf(kappa_))
                return 0.0;
            return std::sqrt(1.0 / (kappa_ + 1.0));
        }

        bool operator==(const RicianFactor &) const = default;

    private:
        double kappa_;
    };

    struct ClusterConfig
    {
        int num_clusters = 1;
        std::vector<int> paths_per_cluster{1};
        double angle_spread = 0.1; // rad, std-dev of per-path AoA around the cluster centre

        int total_paths() const { return std::accumulate(paths_per_cluster.begin(), paths_per_cluster.end(), 0); }

        void validate() const
        {
            if (num_clusters < 1)
                throw InvalidArgument("ClusterConfig: num_clusters must be >= 1");
            if (static_cast<int>(paths_per_cluster.size()) != num_clusters)
                throw InvalidArgument("ClusterConfig: paths_per_cluster must have num_clusters entries");
            for (int n : paths_per_cluster)
                if (n < 1)
                    throw InvalidArgument("ClusterConfig: every cluster needs at least one path");
            if (!(angle_spread >= 0.0) || !std::isfinite(angle_spread))
                throw InvalidArgument("ClusterConfig: angle_spread must be finite and >= 0");
        }

        bool operator==(const ClusterConfig &) const = default;
    };

    /// Uplink channel of one user. The downlink channel is the transpose of the
    /// same object (TDD reciprocity).
    struct UserChannel
    {
        CMatrix los;     // M x P, rank one, unit-modulus entries
        CMatrix scatter; // M x P
        RicianFactor rician;
        double theta = 0.0; // BS-side LOS AoA
        double phi = 0.0;   // user-side LOS AoA

        Eigen::Index bs_antennas() const { return los.rows(); }
        Eigen::Index ue_antennas() const { return los.cols(); }
    };

    inline CMatrix los_channel(const ArrayGeometry &bs, const ArrayGeometry &ue, double theta, double phi)
    {
        check_angle(theta, "los_channel(theta)");
        check_angle(phi, "los_channel(phi)");
        const CVector h_bs = steering_vector(bs, theta, PhaseSign::negative);
        const CVector h_ue = steering_vector(ue, phi, PhaseSign::negative);
        return h_bs * h_ue.adjoint();
    }

    inline CMatrix scatter_iid(int bs_antennas, int ue_antennas, Rng &rng)
    {
        if (bs_antennas < 1 || ue_antennas < 1)
            throw InvalidArgument("scatter_iid: dimensions must be positive");
        return complex_normal_matrix(bs_antennas, ue_antennas, rng, 1.0);
    }

    struct ScatterPath
    {
        double theta; // BS side
        double phi;   // user side
        cd gain;
    };

    /// Normalized sum of rank-one path contributions, scaled by 1/sqrt(number of paths).
    inline CMatrix scatter_from_paths(const ArrayGeometry &bs, const ArrayGeometry &ue, std::span<const ScatterPath> paths)
    {
        if (paths.empty())
            throw InvalidArgument("scatter_from_paths: need at least one path");
        CMatrix out = CMatrix::Zero(bs.num_elements(), ue.num_elements());
        for (const auto &p : paths)
            out += p.gain * los_channel(bs, ue, p.theta, p.phi);
        out /= std::sqrt(static_cast<double>(paths.size()));
        return out;
    }

    /// Cluster centres uniform on [0, pi] at both ends; per-path angles are Gaussian
    /// around the centre, clipped to [0, pi]; gains CN(0, 1).
    inline std::vector<ScatterPath> draw_cluster_paths(const ClusterConfig &cfg, Rng &rng)
    {
        cfg.validate();
        std::normal_distribution<double> spread(0.0, 1.0);
        std::vector<ScatterPath> paths;
        paths.reserve(static_cast<std::size_t>(cfg.total_paths()));
        for (int c = 0; c < cfg.num_clusters; ++c)
        {
            const double centre_bs = uniform(rng, 0.0, kPi);
            const double centre_ue = uniform(rng, 0.0, kPi);
            for (int l = 0; l < cfg.paths_per_cluster[static_cast<std::size_t>(c)]; ++l)
            {
                ScatterPath p{};
                p.theta = std::clamp(centre_bs + cfg.angle_spread * spread(rng), 0.0, kPi);
                p.phi = std::clamp(centre_ue + cfg.angle_spread * spread(rng), 0.0, kPi);
                p.gain = complex_normal(rng, 1.0);
                paths.push_back(p);
            }
        }
        return paths;
    }

    inline CMatrix scatter_clustered(const ArrayGeometry &bs, const ArrayGeometry &ue, const ClusterConfig &cfg, Rng &rng)
    {
        const auto paths = draw_cluster_paths(cfg, rng);
        return scatter_from_paths(bs, ue, paths);
    }

    /// H_k = sqrt(k/(k+1)) * H_L + sqrt(1/(k+1)) * H_S
    inline CMatrix assemble(const UserChannel &user)
    {
        if (user.los.rows() != user.scatter.rows() || user.los.cols() != user.scatter.cols())
            throw InvalidArgument("assemble: LOS and scattering shapes differ");
        const double wl = user.rician.los_weight();
        const double ws = user.rician.scatter_weight();
        if (ws == 0.0)
            return wl * user.los;
        if (wl == 0.0)
            return user.scatter;
        return wl * user.los + ws * user.scatter;
    }

    enum class ScatterMode
    {
        iid,
        clustered
    };

    /// Draws one user's channel. LOS angles are uniform on [0, pi] unless given.
    inline UserChannel draw_user_channel(const ArrayGeometry &bs, const ArrayGeometry &ue, RicianFactor rician,
                                         ScatterMode mode, const std::optional<ClusterConfig> &cluster, Rng &rng,
                                         std::optional<double> theta = std::nullopt,
                                         std::optional<double> phi = std::nullopt)
    {
        UserChannel user;
        user.rician = rician;
        user.theta = theta ? *theta : uniform(rng, 0.0, kPi);
        user.phi = phi ? *phi : uniform(rng, 0.0, kPi);
        user.los = los_channel(bs, ue, user.theta, user.phi);
        if (mode == ScatterMode::clustered)
        {
            if (!cluster)
                throw InvalidArgument("draw_user_channel: clustered scattering needs a ClusterConfig");
            user.scatter = scatter_clustered(bs, ue, *cluster, rng);
        }
        else
            user.scatter = scatter_iid(bs.num_elements(), ue.num_elements(), rng);
        return user;
    }
} // namespace hmimo

#endif
