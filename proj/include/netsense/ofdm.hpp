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

#include <memory>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/geometry.hpp"
#include "netsense/linear_operator.hpp"
#include "netsense/scenario.hpp"

namespace netsense
{
    struct OfdmConfig
    {
        int n_subcarriers = 3300;
        int cp_length = 233;           // Q, samples
        double tx_power = 20.0;        // p, W
        double noise_variance = 0.0;   // sigma_z^2, W
        double subcarrier_spacing = 120e3;

        GridConfig grid(double speed_of_light = kSpeedOfLight) const
        {
            return {n_subcarriers, subcarrier_spacing, speed_of_light};
        }
    };

    /// Requires Q > L + tau_max, L + tau_max <= N, p > 0 and sigma_z^2 >= 0.
    void validate(const OfdmConfig &config, int max_taps, int max_sto);

    /// Frequency-domain pilot symbols s_m, one row per BS.
    class PilotMatrix
    {
    public:
        /// All-ones pilots.
        PilotMatrix(int n_bs, int n_subcarriers);
        /// Throws PreconditionError unless every symbol has unit modulus.
        explicit PilotMatrix(Eigen::MatrixXcd symbols);

        /// Unit-modulus QPSK symbols with independent uniform phases.
        static PilotMatrix random_qpsk(int n_bs, int n_subcarriers, Rng &rng);

        int n_bs() const { return static_cast<int>(symbols_.rows()); }
        int n_subcarriers() const { return static_cast<int>(symbols_.cols()); }
        const Eigen::MatrixXcd &symbols() const { return symbols_; }

    private:
        Eigen::MatrixXcd symbols_;
    };

    /// Virtual channels h~_{u,m}: true taps displaced by the STO, each of
    /// length tap_span = L + tau_max.
    class VirtualChannels
    {
    public:
        VirtualChannels(int n_bs, int tap_span);

        int n_bs() const { return n_bs_; }
        int tap_span() const { return tap_span_; }

        Eigen::VectorXcd &at(int u, int m) { return blocks_[u * n_bs_ + m]; }
        const Eigen::VectorXcd &at(int u, int m) const { return blocks_[u * n_bs_ + m]; }

        /// h~_m = [h~_{1,m}; ...; h~_{M,m}], the unknown of receiver m.
        Eigen::VectorXcd stacked(int m) const;

    private:
        int n_bs_;
        int tap_span_;
        std::vector<Eigen::VectorXcd> blocks_;
    };

    /// Places every true path of pair (u, m) at index delay + tau_{u,m}.
    /// Throws InvariantError when a shifted index leaves [0, tap_span).
    VirtualChannels virtual_shift(const TruePathTable &true_taps, const IntMatrix &sto, int tap_span);

    /// Dense G~ = [diag(s_1) G, ..., diag(s_M) G] with G_{n,l} = exp(-j 2 pi n l / N).
    /// No sqrt(p) factor.
    Eigen::MatrixXcd sensing_matrix(const PilotMatrix &pilots, int tap_span);

    /// sqrt(p) * G~ evaluated with one zero-padded FFT per BS block instead of a
    /// dense product. Reentrant.
    class OfdmSensingOperator final : public LinearOperator
    {
    public:
        OfdmSensingOperator(PilotMatrix pilots, int tap_span, double tx_power);

        Eigen::Index rows() const override { return n_; }
        Eigen::Index cols() const override { return static_cast<Eigen::Index>(n_bs_) * tap_span_; }
        Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override;
        Eigen::VectorXcd adjoint(const Eigen::VectorXcd &y) const override;

        int n_bs() const { return n_bs_; }
        int tap_span() const { return tap_span_; }
        double amplitude() const { return amplitude_; }
        const PilotMatrix &pilots() const { return pilots_; }

    private:
        PilotMatrix pilots_;
        int n_;
        int n_bs_;
        int tap_span_;
        double amplitude_;
    };

    struct Measurement
    {
        int receiver{};
        Eigen::VectorXcd y; // y_m over the N subcarriers
    };

    /// y_m = sqrt(p) G~ h~_m + z_m with z_m ~ CN(0, sigma_z^2 I), one entry per
    /// receiving BS. With sigma_z^2 = 0 no noise samples are drawn.
    std::vector<Measurement> synthesize(const PilotMatrix &pilots, const VirtualChannels &channels,
                                        const OfdmConfig &config, Rng &rng);
}
