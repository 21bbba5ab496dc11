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

#include "fft.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace netsense::detail
{
    namespace
    {
        // FFTW planning is not thread-safe; execution of an existing plan on new
        // arrays is. Plans are created once per length and live for the process.
        std::mutex plan_mutex;
        std::map<int, std::pair<fftw_plan, fftw_plan>> plan_cache;

        std::pair<fftw_plan, fftw_plan> plans_for(int n)
        {
            std::lock_guard lock(plan_mutex);
            auto it = plan_cache.find(n);
            if (it != plan_cache.end())
                return it->second;
            std::vector<std::complex<double>> a(n), b(n);
            auto *in = reinterpret_cast<fftw_complex *>(a.data());
            auto *out = reinterpret_cast<fftw_complex *>(b.data());
            const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
            auto plans = std::make_pair(fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags),
                                        fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags));
            plan_cache.emplace(n, plans);
            return plans;
        }
    }

    Fft::Fft(int n) : n_(n)
    {
        auto [fwd, bwd] = plans_for(n);
        forward_plan_ = fwd;
        backward_plan_ = bwd;
    }

    void Fft::forward(const std::complex<double> *in, std::complex<double> *out) const
    {
        fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                         reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                         reinterpret_cast<fftw_complex *>(out));
    }

    void Fft::backward(const std::complex<double> *in, std::complex<double> *out) const
    {
        fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                         reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                         reinterpret_cast<fftw_complex *>(out));
    }
}
