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

#ifndef HMIMO_RANDOM_HPP
#define HMIMO_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "common.hpp"

namespace hmimo
{
    using Rng = std::mt19937_64;

    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Hashes a master seed and a path of stream coordinates (trial, user, stage, ...)
    /// into an independent generator seed. Streams are a pure function of their path,
    /// so work items can run in any order on any worker.
    inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t h = splitmix64(master);
        for (auto p : path)
            h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
        return h;
    }

    inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        return Rng(derive_seed(master, path));
    }

    /// Circularly symmetric complex Gaussian CN(0, variance).
    inline cd complex_normal(Rng &rng, double variance = 1.0)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    inline CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng, double variance = 1.0)
    {
        CMatrix out(rows, cols);
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        // Fill column-major, real part before imaginary part, for a fixed draw order.
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                const double re = n(rng);
                const double im = n(rng);
                out(r, c) = cd(re, im);
            }
        return out;
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng);
    }
} // namespace hmimo

#endif
