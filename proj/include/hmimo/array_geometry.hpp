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

#ifndef HMIMO_ARRAY_GEOMETRY_HPP
#define HMIMO_ARRAY_GEOMETRY_HPP

#include <cmath>
#include <vector>

#include "common.hpp"

namespace hmimo
{
    /// Uniform linear array: element count and element spacing in wavelengths (d / lambda).
    class ArrayGeometry
    {
    public:
        explicit ArrayGeometry(int num_elements, double spacing_ratio = 0.5)
            : num_elements_(num_elements), spacing_ratio_(spacing_ratio)
        {
            if (num_elements < 1)
                throw InvalidArgument("ArrayGeometry: num_elements must be >= 1");
            if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
                throw InvalidArgument("ArrayGeometry: spacing_ratio must be finite and > 0");
        }

        int num_elements() const { return num_elements_; }
        double spacing_ratio() const { return spacing_ratio_; }

        bool operator==(const ArrayGeometry &) const = default;

    private:
        int num_elements_;
        double spacing_ratio_;
    };

    /// J candidate directions (i - 1) * pi / J, i = 1..J. The endpoint pi is excluded.
    class AngleGrid
    {
    public:
        explicit AngleGrid(int num_points = 180) : angles_()
        {
            if (num_points < 1)
                throw InvalidArgument("AngleGrid: num_points must be >= 1");
            angles_.reserve(static_cast<std::size_t>(num_points));
            for (int i = 0; i < num_points; ++i)
                angles_.push_back(static_cast<double>(i) * kPi / static_cast<double>(num_points));
        }

        int size() const { return static_cast<int>(angles_.size()); }
        double angle(int index) const { return angles_.at(static_cast<std::size_t>(index)); }
        const std::vector<double> &angles() const { return angles_; }

    private:
        std::vector<double> angles_;
    };

    enum class PhaseSign : int
    {
        negative = -1, // channel response convention
        positive = 1   // detection / beamforming convention
    };

    inline void check_angle(double angle, const char *what)
    {
        if (!std::isfinite(angle) || angle < 0.0 || angle > kPi)
            throw InvalidArgument(std::string(what) + ": angle must be finite and in [0, pi], got " + std::to_string(angle));
    }

    /// Unnormalized ULA response; element m is exp(sign * j * 2 pi * m * (d / lambda) * cos(angle)).
    inline CVector steering_vector(const ArrayGeometry &geometry, double angle, PhaseSign sign)
    {
        check_angle(angle, "steering_vector");
        const double s = static_cast<double>(static_cast<int>(sign));
        const double phase_step = s * 2.0 * kPi * geometry.spacing_ratio() * std::cos(angle);
        CVector out(geometry.num_elements());
        for (int m = 0; m < geometry.num_elements(); ++m)
            out(m) = std::polar(1.0, phase_step * static_cast<double>(m));
        return out;
    }

    /// Columns are unit-norm positive-sign steering vectors over the grid.
    inline CMatrix detection_matrix(const ArrayGeometry &geometry, const AngleGrid &grid)
    {
        const double scale = 1.0 / std::sqrt(static_cast<double>(geometry.num_elements()));
        CMatrix out(geometry.num_elements(), grid.size());
        for (int i = 0; i < grid.size(); ++i)
            out.col(i) = scale * steering_vector(geometry, grid.angle(i), PhaseSign::positive);
        return out;
    }
} // namespace hmimo

#endif
