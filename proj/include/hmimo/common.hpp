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

#ifndef HMIMO_COMMON_HPP
#define HMIMO_COMMON_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hmimo
{
    inline constexpr const char *kVersion = "0.1.0";

    using cd = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double kPi = std::numbers::pi;

    /// Base class of every error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// An argument violated a documented precondition (angle domain, dimensions, ...).
    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    /// The equivalent channel could not be inverted. In the hybrid system this
    /// almost always means two users were assigned the same BS beam.
    class SingularChannelError : public Error
    {
    public:
        using Error::Error;
    };

    /// Experiment configuration is malformed or violates an invariant.
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    // ||A||_F^2
    template <typename Derived>
    double frobenius_sq(const Eigen::MatrixBase<Derived> &a)
    {
        return a.squaredNorm();
    }
} // namespace hmimo

#endif
