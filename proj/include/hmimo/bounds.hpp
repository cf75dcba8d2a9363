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

#ifndef HMIMO_BOUNDS_HPP
#define HMIMO_BOUNDS_HPP

#include <cmath>

#include "common.hpp"

namespace hmimo
{
    /// Parameters of the closed-form rate bounds. snr is E_s / sigma_MS^2 (linear)
    /// and frf_gram_fro_sq is ||F_RF^H F_RF||_F^2.
    struct BoundInputs
    {
        int bs_antennas = 1; // M
        int ue_antennas = 1; // P
        int num_users = 1;   // N
        double kappa = 0.0;
        double snr = 1.0;
        double frf_gram_fro_sq = 1.0;

        void validate() const
        {
            if (bs_antennas < 1 || ue_antennas < 1 || num_users < 1)
                throw InvalidArgument("BoundInputs: antenna and user counts must be positive");
            if (std::isnan(kappa) || kappa < 0.0)
                throw InvalidArgument("BoundInputs: kappa must be >= 0");
            if (std::isnan(snr) || snr < 0.0)
                throw InvalidArgument("BoundInputs: snr must be >= 0");
            // a Gram matrix of N unit-norm columns has N ones on its diagonal
            if (frf_gram_fro_sq < static_cast<double>(num_users) * (1.0 - 1e-12))
                throw InvalidArgument("BoundInputs: frf_gram_fro_sq must be >= N");
        }

        double los_share() const { return std::isinf(kappa) ? 1.0 : kappa / (kappa + 1.0); }
        double scatter_share() const { return std::isinf(kappa) ? 0.0 : 1.0 / (kappa + 1.0); }
    };

    /// Upper bound on the ZF per-user rate of the hybrid system for a given F_RF.
    inline double theorem1_upper(const BoundInputs &in)
    {
        in.validate();
        const double n = in.num_users;
        const double mp = static_cast<double>(in.bs_antennas) * in.ue_antennas;
        const double bracket = in.los_share() * mp * in.frf_gram_fro_sq + in.scatter_share() * n * n;
        return std::log2(1.0 + bracket * in.snr / (n * n));
    }

    /// Large-M limit of the hybrid bound (F_RF^H F_RF -> I_N).
    inline double corollary1_asymptotic(const BoundInputs &in)
    {
        in.validate();
        const double mp_over_n = static_cast<double>(in.bs_antennas) * in.ue_antennas / in.num_users;
        return std::log2(1.0 + (mp_over_n * in.los_share() + in.scatter_share()) * in.snr);
    }

    /// Large-M bound of the fully digital system.
    inline double corollary2_fully_digital(const BoundInputs &in)
    {
        in.validate();
        const double mp_over_n = static_cast<double>(in.bs_antennas) * in.ue_antennas / in.num_users;
        return std::log2(1.0 + mp_over_n * in.snr);
    }

    struct TraceBound
    {
        double inverse_trace_reciprocal; // 1 / tr(A^{-1})
        double scaled_trace;             // tr(A) / N^2
        bool holds;
    };

    /// 1 / tr(A^{-1}) <= tr(A) / N^2 for Hermitian positive definite A.
    inline TraceBound trace_inverse_bound_check(const CMatrix &a)
    {
        if (a.rows() != a.cols() || a.rows() == 0)
            throw InvalidArgument("trace_inverse_bound_check: matrix must be square and non-empty");
        const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
        if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw InvalidArgument("trace_inverse_bound_check: matrix is not Hermitian");
        Eigen::LLT<CMatrix> llt(a);
        if (llt.info() != Eigen::Success)
            throw InvalidArgument("trace_inverse_bound_check: matrix is not positive definite");

        const double n = static_cast<double>(a.rows());
        const CMatrix inv = llt.solve(CMatrix::Identity(a.rows(), a.cols()));
        TraceBound out{};
        out.inverse_trace_reciprocal = 1.0 / inv.trace().real();
        out.scaled_trace = a.trace().real() / (n * n);
        // equality when A = c I; allow rounding there
        out.holds = out.inverse_trace_reciprocal <= out.scaled_trace * (1.0 + 1e-12);
        return out;
    }
} // namespace hmimo

#endif
