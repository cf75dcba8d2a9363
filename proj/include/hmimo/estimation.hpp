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

#ifndef HMIMO_ESTIMATION_HPP
#define HMIMO_ESTIMATION_HPP

#include <cmath>
#include <span>
#include <vector>

#include "channel_model.hpp"

namespace hmimo
{
    /// Result of one angular sweep: chosen beam per user (as columns) and its grid index.
    struct SweepResult
    {
        CMatrix beams;
        std::vector<int> indices;
    };

    /// Analog beamformers produced by the two sweeps.
    ///   bs_beams: M x N, column k is the BS beam of user k (F_RF)
    ///   ue_beams: P x N, column k is the conjugate of user k's combiner (Q_RF)
    struct BeamformerSet
    {
        CMatrix bs_beams;
        CMatrix ue_beams;
        std::vector<int> bs_aoa_indices;
        std::vector<int> ue_aoa_indices;

        Eigen::Index num_users() const { return bs_beams.cols(); }

        /// Receive combiner of user k; combining applies its Hermitian.
        CVector ue_combiner(Eigen::Index k) const { return ue_beams.col(k).conjugate(); }

        /// ||F_RF^H F_RF||_F^2
        double bs_gram_fro_sq() const { return (bs_beams.adjoint() * bs_beams).squaredNorm(); }
    };

    inline BeamformerSet combine_sweeps(SweepResult bs, SweepResult ue)
    {
        return {std::move(bs.beams), std::move(ue.beams), std::move(bs.indices), std::move(ue.indices)};
    }

    /// Index of the largest magnitude; ties go to the lowest index.
    inline int argmax_magnitude(const CVector &responses)
    {
        int best = 0;
        double best_mag = -1.0;
        for (Eigen::Index i = 0; i < responses.size(); ++i)
        {
            const double mag = std::abs(responses(i));
            if (mag > best_mag)
            {
                best_mag = mag;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

    namespace detail
    {
        // One observation per candidate direction, each with its own noise draw.
        // A unit-norm detection column maps CN(0, s2 I) onto a scalar CN(0, s2), so
        // the projected noise is drawn directly.
        inline CVector add_sweep_noise(CVector responses, double noise_variance, Rng &rng)
        {
            if (noise_variance > 0.0)
                for (Eigen::Index i = 0; i < responses.size(); ++i)
                    responses(i) += complex_normal(rng, noise_variance);
            return responses;
        }

        inline void check_users(std::span<const UserChannel> users, Eigen::Index grid_cols)
        {
            if (users.empty())
                throw InvalidArgument("channel estimation: user list is empty");
            if (grid_cols < 1)
                throw InvalidArgument("channel estimation: detection grid is empty");
        }
    } // namespace detail

    /// Uplink tone sweep at the BS. User k transmits from antenna 0, so the tone
    /// channel is column 0 of H_k; r_i = gamma_i^T h + gamma_i^T z.
    inline SweepResult step1_uplink_aoa(std::span<const UserChannel> users, const CMatrix &bs_detection,
                                        double noise_variance, Rng &rng)
    {
        detail::check_users(users, bs_detection.cols());
        const auto n = static_cast<Eigen::Index>(users.size());
        SweepResult out{CMatrix(bs_detection.rows(), n), std::vector<int>(users.size())};
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const auto &user = users[static_cast<std::size_t>(k)];
            if (user.bs_antennas() != bs_detection.rows())
                throw InvalidArgument("step1_uplink_aoa: BS detection matrix does not match channel rows");
            const CVector tone = assemble(user).col(0);
            const CVector r = detail::add_sweep_noise(bs_detection.transpose() * tone, noise_variance, rng);
            const int best = argmax_magnitude(r);
            out.indices[static_cast<std::size_t>(k)] = best;
            out.beams.col(k) = bs_detection.col(best);
        }
        return out;
    }

    /// Downlink tone sweep at every user through its BS beam;
    /// r_i = omega_i^H H_k^T gamma_k + omega_i^H z.
    inline SweepResult step2_downlink_aoa(std::span<const UserChannel> users, const CMatrix &bs_beams,
                                          const CMatrix &ue_detection, double noise_variance, Rng &rng)
    {
        detail::check_users(users, ue_detection.cols());
        const auto n = static_cast<Eigen::Index>(users.size());
        if (bs_beams.cols() != n)
            throw InvalidArgument("step2_downlink_aoa: need one BS beam per user");
        SweepResult out{CMatrix(ue_detection.rows(), n), std::vector<int>(users.size())};
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const auto &user = users[static_cast<std::size_t>(k)];
            if (user.ue_antennas() != ue_detection.rows())
                throw InvalidArgument("step2_downlink_aoa: user detection matrix does not match channel columns");
            const CVector downlink = assemble(user).transpose() * bs_beams.col(k);
            const CVector r = detail::add_sweep_noise(ue_detection.adjoint() * downlink, noise_variance, rng);
            const int best = argmax_magnitude(r);
            out.indices[static_cast<std::size_t>(k)] = best;
            out.beams.col(k) = ue_detection.col(best).conjugate();
        }
        return out;
    }

    /// Orthogonal pilots: symbols = sqrt(E_P) * U with U the unitary DFT matrix.
    /// Column k is user k's pilot sequence over N symbol slots.
    struct PilotMatrix
    {
        CMatrix symbols;
        double pilot_energy = 1.0;

        Eigen::Index length() const { return symbols.rows(); }
    };

    inline PilotMatrix make_pilots(int num_users, double pilot_energy)
    {
        if (num_users < 1)
            throw InvalidArgument("make_pilots: N must be >= 1");
        if (!(pilot_energy > 0.0) || !std::isfinite(pilot_energy))
            throw InvalidArgument("make_pilots: pilot energy must be finite and > 0");
        const double n = static_cast<double>(num_users);
        const double scale = std::sqrt(pilot_energy / n);
        CMatrix psi(num_users, num_users);
        for (int r = 0; r < num_users; ++r)
            for (int c = 0; c < num_users; ++c)
            {
                // reduce r*c modulo N first so the phase argument stays small
                const double idx = static_cast<double>((static_cast<long long>(r) * c) % num_users);
                psi(r, c) = std::polar(scale, -2.0 * kPi * idx / n);
            }
        return {std::move(psi), pilot_energy};
    }

    /// H_eq is N x N with H_eq^T(k, j) = omega_k^H H_k^T gamma_j.
    inline CMatrix true_equivalent_channel(std::span<const UserChannel> users, const BeamformerSet &beams)
    {
        const auto n = static_cast<Eigen::Index>(users.size());
        if (beams.bs_beams.cols() != n || beams.ue_beams.cols() != n)
            throw InvalidArgument("true_equivalent_channel: beam count does not match user count");
        CMatrix heq_t(n, n);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const CMatrix h = assemble(users[static_cast<std::size_t>(k)]);
            heq_t.row(k) = beams.ue_combiner(k).adjoint() * h.transpose() * beams.bs_beams;
        }
        return heq_t.transpose();
    }

    struct EquivalentChannel
    {
        CMatrix true_matrix;
        CMatrix estimate;
        double noise_variance = 0.0;
    };

    /// LS estimate of the equivalent channel from one block of N pilot slots.
    /// The BS receives Y = F^T (B Psi^T + Z) with B = [H_1 w_1^*, ..., H_N w_N^*]
    /// and returns H_eq^T estimate = Psi^H Y^T / E_P.
    inline EquivalentChannel step3_ls_estimate(std::span<const UserChannel> users, const BeamformerSet &beams,
                                               const PilotMatrix &pilots, double noise_variance, Rng &rng)
    {
        const auto n = static_cast<Eigen::Index>(users.size());
        if (pilots.length() != n || pilots.symbols.cols() != n)
            throw InvalidArgument("step3_ls_estimate: pilot dimension must equal the number of users");
        if (beams.bs_beams.cols() != n || beams.ue_beams.cols() != n)
            throw InvalidArgument("step3_ls_estimate: beam count does not match user count");

        const Eigen::Index m = beams.bs_beams.rows();
        CMatrix effective(m, n); // column i = H_i w_i^*
        for (Eigen::Index i = 0; i < n; ++i)
            effective.col(i) = assemble(users[static_cast<std::size_t>(i)]) * beams.ue_beams.col(i);

        CMatrix received = effective * pilots.symbols.transpose(); // M x N pilot slots
        if (noise_variance > 0.0)
            received += complex_normal_matrix(m, n, rng, noise_variance);
        const CMatrix per_chain = beams.bs_beams.transpose() * received; // row k = s_k^T

        EquivalentChannel out;
        out.true_matrix = true_equivalent_channel(users, beams);
        const CMatrix heq_t = pilots.symbols.adjoint() * per_chain.transpose() / pilots.pilot_energy;
        out.estimate = heq_t.transpose();
        out.noise_variance = noise_variance;
        return out;
    }
} // namespace hmimo

#endif
