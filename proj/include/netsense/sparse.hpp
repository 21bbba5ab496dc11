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

#include <utility>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/linear_operator.hpp"
#include "netsense/ofdm.hpp"

namespace netsense
{
    struct LassoConfig
    {
        double penalty = 0.0;           // absolute floor on alpha
        double relative_penalty = 0.01; // alpha >= this * ||A^H y||_inf, per receiver
        int max_iterations = 3000;
        double convergence_tol = 1e-7;  // relative size of the proximal-gradient step
        double support_threshold = 0.05;
        bool record_objective = false;
    };

    void validate(const LassoConfig &config);

    /// 0.5 * ||y - A x||^2 + penalty * ||x||_1 with ||.||_1 over complex magnitudes.
    double lasso_objective(const LinearOperator &op, const Eigen::VectorXcd &y, const Eigen::VectorXcd &x,
                           double penalty);

    /// Largest eigenvalue of A^H A by power iteration from a fixed start vector,
    /// inflated by 2% so that 1/L stays a safe step.
    double lipschitz_constant(const LinearOperator &op, int iterations = 60);

    /// c * sigma * sqrt(p * N * log(n_columns)); the usual universal-threshold scaling.
    double universal_penalty(double scale, double noise_variance, double tx_power, int n_subcarriers,
                             Eigen::Index n_columns);

    /// Entry-wise complex soft-thresholding v * max(0, 1 - threshold / |v|).
    Eigen::VectorXcd soft_threshold(const Eigen::VectorXcd &v, double threshold);

    struct LassoSolution
    {
        Eigen::VectorXcd x;
        int iterations = 0;
        bool converged = false;
        double objective = 0.0;
        std::vector<double> objective_history; // objective after each iteration
    };

    /// Monotone accelerated proximal gradient (MFISTA). An iterate is only accepted
    /// if it does not raise the objective, so the recorded history is
    /// non-increasing. Without convergence the best iterate is returned with
    /// converged = false. A non-positive `lipschitz` is estimated internally.
    LassoSolution solve_lasso(const LinearOperator &op, const Eigen::VectorXcd &y, const LassoConfig &config,
                              double lipschitz = 0.0);

    /// Per receiving BS m the recovered h_m, sliced into (u, m) blocks.
    struct RecoveredChannels
    {
        int n_bs = 0;
        int tap_span = 0;
        std::vector<Eigen::VectorXcd> per_receiver;
        std::vector<bool> converged;

        Eigen::VectorXcd block(int u, int m) const
        {
            return per_receiver[m].segment(static_cast<Eigen::Index>(u) * tap_span, tap_span);
        }
        bool all_converged() const;
    };

    /// max(penalty, relative_penalty * ||A^H y||_inf); must come out positive.
    double effective_penalty(const LinearOperator &op, const Eigen::VectorXcd &y, const LassoConfig &config);

    /// One solve per measurement with effective_penalty() and a shared Lipschitz estimate.
    RecoveredChannels recover_channels(const OfdmSensingOperator &op, const std::vector<Measurement> &measurements,
                                       const LassoConfig &config);

    /// Indices l with |h_l| > threshold * max|h| and |h_l| > 0, ascending.
    std::vector<int> support_of(const Eigen::VectorXcd &block, double threshold);

    /// Support of every (u, m) block, stored at index u * M + m.
    struct SupportSets
    {
        int n_bs = 0;
        std::vector<std::vector<int>> sets;
        std::vector<std::pair<int, int>> empty_bistatic; // pairs u != m with no detected path

        const std::vector<int> &at(int u, int m) const { return sets[u * n_bs + m]; }
        std::vector<int> &at(int u, int m) { return sets[u * n_bs + m]; }
    };

    SupportSets extract_support(const RecoveredChannels &channels, double threshold);
}
