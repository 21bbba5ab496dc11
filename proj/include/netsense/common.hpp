// SPDX-License-Identifier: Apache-2.0
//
// netsense - networked device-free sensing simulator
// Copyright (C) 2026 The netsense authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace netsense
{
    using cdouble = std::complex<double>;
    using Rng = std::mt19937_64;
    using IntMatrix = Eigen::MatrixXi;

    /// Base class of all errors raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A documented precondition of an operation was violated by the caller.
    class PreconditionError : public Error
    {
    public:
        using Error::Error;
    };

    /// Scenario generation or validation failed.
    class ScenarioError : public Error
    {
    public:
        using Error::Error;
    };

    /// Channel construction produced an index outside the modelled tap range.
    class ChannelError : public Error
    {
    public:
        using Error::Error;
    };

    /// An internal consistency check failed.
    class InvariantError : public Error
    {
    public:
        using Error::Error;
    };

    /// SplitMix64 finaliser; used to derive independent RNG streams from (seed, stream).
    constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept
    {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    inline void require(bool condition, const std::string &message)
    {
        if (!condition)
            throw PreconditionError(message);
    }
}
