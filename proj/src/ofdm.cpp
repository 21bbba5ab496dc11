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

#include "netsense/ofdm.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"

namespace netsense
{
    void validate(const OfdmConfig &config, int max_taps, int max_sto)
    {
        require(config.n_subcarriers >= 1, "ofdm: n_subcarriers must be >= 1");
        require(config.subcarrier_spacing > 0.0, "ofdm: subcarrier_spacing must be > 0");
        require(config.cp_length > max_taps + max_sto, "ofdm: cyclic prefix must exceed L + tau_max");
        require(max_taps + max_sto <= config.n_subcarriers, "ofdm: L + tau_max must not exceed N");
        require(config.tx_power > 0.0, "ofdm: tx_power must be > 0");
        require(config.noise_variance >= 0.0, "ofdm: noise_variance must be >= 0");
    }

    PilotMatrix::PilotMatrix(int n_bs, int n_subcarriers)
        : symbols_(Eigen::MatrixXcd::Ones(n_bs, n_subcarriers))
    {
    }

    PilotMatrix::PilotMatrix(Eigen::MatrixXcd symbols) : symbols_(std::move(symbols))
    {
        require(symbols_.size() == 0 || (symbols_.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-9,
                "PilotMatrix: pilot symbols must have unit modulus");
    }

    PilotMatrix PilotMatrix::random_qpsk(int n_bs, int n_subcarriers, Rng &rng)
    {
        std::uniform_int_distribution<int> quadrant(0, 3);
        Eigen::MatrixXcd symbols(n_bs, n_subcarriers);
        for (int m = 0; m < n_bs; ++m)
            for (int n = 0; n < n_subcarriers; ++n)
                symbols(m, n) = std::polar(1.0, M_PI / 4.0 + M_PI / 2.0 * quadrant(rng));
        return PilotMatrix(std::move(symbols));
    }

    VirtualChannels::VirtualChannels(int n_bs, int tap_span)
        : n_bs_(n_bs), tap_span_(tap_span),
          blocks_(static_cast<std::size_t>(n_bs) * n_bs, Eigen::VectorXcd::Zero(tap_span))
    {
    }

    Eigen::VectorXcd VirtualChannels::stacked(int m) const
    {
        Eigen::VectorXcd out(static_cast<Eigen::Index>(n_bs_) * tap_span_);
        for (int u = 0; u < n_bs_; ++u)
            out.segment(static_cast<Eigen::Index>(u) * tap_span_, tap_span_) = at(u, m);
        return out;
    }

    VirtualChannels virtual_shift(const TruePathTable &true_taps, const IntMatrix &sto, int tap_span)
    {
        const int n_bs = true_taps.n_bs();
        require(sto.rows() == n_bs && sto.cols() == n_bs, "virtual_shift: STO matrix shape mismatch");
        VirtualChannels out(n_bs, tap_span);
        for (int u = 0; u < n_bs; ++u)
            for (int m = 0; m < n_bs; ++m)
                for (const auto &path : true_taps.at(u, m))
                {
                    const int index = path.delay + sto(u, m);
                    if (index < 0 || index >= tap_span)
                        throw InvariantError("virtual_shift: shifted index " + std::to_string(index) +
                                             " outside [0, " + std::to_string(tap_span) + ") for pair (" +
                                             std::to_string(u) + ", " + std::to_string(m) + ")");
                    out.at(u, m)[index] += path.gain;
                }
        return out;
    }

    Eigen::MatrixXcd sensing_matrix(const PilotMatrix &pilots, int tap_span)
    {
        const int n = pilots.n_subcarriers();
        const int n_bs = pilots.n_bs();
        Eigen::MatrixXcd out(n, static_cast<Eigen::Index>(n_bs) * tap_span);
        for (int u = 0; u < n_bs; ++u)
            for (int l = 0; l < tap_span; ++l)
                for (int row = 0; row < n; ++row)
                {
                    // reduce n*l mod N first to keep the phase argument small
                    const long phase_index = (static_cast<long>(row) * l) % n;
                    out(row, static_cast<Eigen::Index>(u) * tap_span + l) =
                        pilots.symbols()(u, row) * std::polar(1.0, -2.0 * M_PI * phase_index / n);
                }
        return out;
    }

    OfdmSensingOperator::OfdmSensingOperator(PilotMatrix pilots, int tap_span, double tx_power)
        : pilots_(std::move(pilots)), n_(pilots_.n_subcarriers()), n_bs_(pilots_.n_bs()), tap_span_(tap_span),
          amplitude_(std::sqrt(tx_power))
    {
        require(tap_span >= 1 && tap_span <= n_, "OfdmSensingOperator: tap_span must lie in [1, N]");
        require(tx_power > 0.0, "OfdmSensingOperator: tx_power must be > 0");
    }

    Eigen::VectorXcd OfdmSensingOperator::apply(const Eigen::VectorXcd &x) const
    {
        require(x.size() == cols(), "OfdmSensingOperator::apply: dimension mismatch");
        const detail::Fft fft(n_);
        Eigen::VectorXcd padded(n_), spectrum(n_);
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_);
        for (int u = 0; u < n_bs_; ++u)
        {
            padded.setZero();
            padded.head(tap_span_) = x.segment(static_cast<Eigen::Index>(u) * tap_span_, tap_span_);
            fft.forward(padded.data(), spectrum.data());
            y += pilots_.symbols().row(u).transpose().cwiseProduct(spectrum);
        }
        return amplitude_ * y;
    }

    Eigen::VectorXcd OfdmSensingOperator::adjoint(const Eigen::VectorXcd &y) const
    {
        require(y.size() == rows(), "OfdmSensingOperator::adjoint: dimension mismatch");
        const detail::Fft fft(n_);
        Eigen::VectorXcd weighted(n_), taps(n_);
        Eigen::VectorXcd x(cols());
        for (int u = 0; u < n_bs_; ++u)
        {
            weighted = pilots_.symbols().row(u).transpose().conjugate().cwiseProduct(y);
            fft.backward(weighted.data(), taps.data());
            x.segment(static_cast<Eigen::Index>(u) * tap_span_, tap_span_) = amplitude_ * taps.head(tap_span_);
        }
        return x;
    }

    std::vector<Measurement> synthesize(const PilotMatrix &pilots, const VirtualChannels &channels,
                                        const OfdmConfig &config, Rng &rng)
    {
        require(pilots.n_bs() == channels.n_bs(), "synthesize: pilot and channel BS counts differ");
        require(pilots.n_subcarriers() == config.n_subcarriers, "synthesize: pilot length differs from N");
        const OfdmSensingOperator op(pilots, channels.tap_span(), config.tx_power);
        std::normal_distribution<double> normal(0.0, std::sqrt(config.noise_variance / 2.0));

        std::vector<Measurement> out;
        out.reserve(channels.n_bs());
        for (int m = 0; m < channels.n_bs(); ++m)
        {
            Measurement meas{m, op.apply(channels.stacked(m))};
            if (config.noise_variance > 0.0)
                for (auto &value : meas.y)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    value += cdouble(re, im);
                }
            out.push_back(std::move(meas));
        }
        return out;
    }
}
