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

#ifndef HMIMO_PRECODING_HPP
#define HMIMO_PRECODING_HPP

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "estimation.hpp"

namespace hmimo
{
    inline constexpr double kMaxConditionNumber = 1e12;

    /// Baseband precoder: columns of weights are per-user streams, beta the
    /// total-power normalization, beta^2 = 1 / tr(W W^H).
    struct Precoder
    {
        CMatrix weights;
        double beta = 1.0;
    };

    struct LinkResult
    {
        double desired_power = 0.0;
        double interference_power = 0.0;
        double noise_power = 1.0;
        double sinr = 0.0;
        double rate = 0.0; // bits/s/Hz
        double symbol_energy = 1.0;
    };

    namespace detail
    {
        inline double condition_number(const CMatrix &hermitian)
        {
            Eigen::JacobiSVD<CMatrix> svd(hermitian);
            const auto &s = svd.singularValues();
            if (s.size() == 0)
                return 0.0;
            const double smin = s(s.size() - 1);
            if (!(smin > 0.0))
                return std::numeric_limits<double>::infinity();
            return s(0) / smin;
        }

        /// ZF for a channel whose rows are the per-user effective channels:
        /// W = G^H (G G^H)^{-1}, so that G W = I.
        inline Precoder zf_rows(const CMatrix &rows, const char *what)
        {
            const CMatrix gram = rows * rows.adjoint();
            const double cond = condition_number(gram);
            if (!(cond <= kMaxConditionNumber))
            {
                std::ostringstream msg;
                msg << what << ": channel Gram matrix is singular (condition number " << cond
                    << "); users likely share a beam";
                throw SingularChannelError(msg.str());
            }
            Precoder p;
            p.weights = rows.adjoint() * gram.inverse();
            p.beta = 1.0 / std::sqrt((p.weights * p.weights.adjoint()).trace().real());
            return p;
        }
    } // namespace detail

    /// W = H_eq^* (H_eq^T H_eq^*)^{-1}.
    inline Precoder zf_precoder(const CMatrix &h_eq)
    {
        if (h_eq.rows() != h_eq.cols() || h_eq.rows() == 0)
            throw InvalidArgument("zf_precoder: equivalent channel must be square and non-empty");
        return detail::zf_rows(h_eq.transpose(), "zf_precoder");
    }

    /// SINR and rate from the effective gain matrix g(k, j), the amplitude of
    /// stream j at user k after combining.
    inline std::vector<LinkResult> link_results(const CMatrix &gains, double symbol_energy, double noise_power)
    {
        if (!(noise_power > 0.0))
            throw InvalidArgument("link_results: noise power must be > 0");
        std::vector<LinkResult> out(static_cast<std::size_t>(gains.rows()));
        for (Eigen::Index k = 0; k < gains.rows(); ++k)
        {
            LinkResult &r = out[static_cast<std::size_t>(k)];
            r.symbol_energy = symbol_energy;
            r.noise_power = noise_power;
            r.desired_power = std::norm(gains(k, k)) * symbol_energy;
            double interference = 0.0;
            for (Eigen::Index j = 0; j < gains.cols(); ++j)
                if (j != k)
                    interference += std::norm(gains(k, j));
            r.interference_power = interference * symbol_energy;
            r.sinr = r.desired_power / (r.interference_power + noise_power);
            r.rate = std::log2(1.0 + r.sinr);
        }
        return out;
    }

    /// Gains through the true channel: g(k, j) = omega_k^H H_k^T F_RF beta w_j.
    inline CMatrix downlink_gains(std::span<const UserChannel> users, const BeamformerSet &beams, const Precoder &precoder)
    {
        const CMatrix heq_t = true_equivalent_channel(users, beams).transpose();
        if (precoder.weights.rows() != heq_t.cols() || precoder.weights.cols() != heq_t.rows())
            throw InvalidArgument("downlink_gains: precoder shape does not match the equivalent channel");
        return heq_t * precoder.weights * precoder.beta;
    }

    inline std::vector<LinkResult> evaluate_downlink(std::span<const UserChannel> users, const BeamformerSet &beams,
                                                     const Precoder &precoder, double symbol_energy, double noise_power)
    {
        return link_results(downlink_gains(users, beams, precoder), symbol_energy, noise_power);
    }

    /// Identity baseband precoder with equal power per stream.
    inline Precoder analog_only_precoder(Eigen::Index num_users)
    {
        return {CMatrix::Identity(num_users, num_users), 1.0 / std::sqrt(static_cast<double>(num_users))};
    }

    inline std::vector<LinkResult> analog_only_baseline(std::span<const UserChannel> users, const BeamformerSet &beams,
                                                        double symbol_energy, double noise_power)
    {
        return evaluate_downlink(users, beams, analog_only_precoder(beams.num_users()), symbol_energy, noise_power);
    }

    /// Fully digital reference with perfect CSI: each user combines with the dominant
    /// left singular vector of H_k^T, the BS zero-forces over all M antennas.
    inline CMatrix fully_digital_gains(std::span<const UserChannel> users)
    {
        if (users.empty())
            throw InvalidArgument("fully_digital_gains: user list is empty");
        const auto n = static_cast<Eigen::Index>(users.size());
        const Eigen::Index m = users.front().bs_antennas();
        CMatrix effective(n, m);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const CMatrix hdl = assemble(users[static_cast<std::size_t>(k)]).transpose(); // P x M
            Eigen::JacobiSVD<CMatrix> svd(hdl, Eigen::ComputeThinU);
            const CVector combiner = svd.matrixU().col(0);
            effective.row(k) = combiner.adjoint() * hdl;
        }
        const Precoder p = detail::zf_rows(effective, "fully_digital_baseline");
        return effective * p.weights * p.beta;
    }

    inline std::vector<LinkResult> fully_digital_baseline(std::span<const UserChannel> users, double symbol_energy,
                                                          double noise_power)
    {
        return link_results(fully_digital_gains(users), symbol_energy, noise_power);
    }

    /// Mean of log2(1 + SINR) over all users of all trials.
    inline double rate_per_user(std::span<const std::vector<LinkResult>> trials)
    {
        if (trials.empty())
            throw InvalidArgument("rate_per_user: need at least one trial");
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto &trial : trials)
            for (const auto &r : trial)
            {
                sum += std::log2(1.0 + r.sinr);
                ++count;
            }
        if (count == 0)
            throw InvalidArgument("rate_per_user: trials contain no users");
        return sum / static_cast<double>(count);
    }
} // namespace hmimo

#endif
