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

namespace netsense::detail
{
    /// Out-of-place complex DFT of a fixed length backed by a shared FFTW plan.
    /// forward uses exp(-j2pi nk/N), backward exp(+j2pi nk/N); neither is normalised.
    class Fft
    {
    public:
        explicit Fft(int n);

        int size() const { return n_; }
        void forward(const std::complex<double> *in, std::complex<double> *out) const;
        void backward(const std::complex<double> *in, std::complex<double> *out) const;

    private:
        int n_;
        void *forward_plan_;
        void *backward_plan_;
    };
}
