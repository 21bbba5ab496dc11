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

#include "netsense/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace netsense
{
    namespace
    {
        double l1_norm(const Eigen::VectorXcd &x)
        {
            return x.cwiseAbs().sum();
        }
    }

    void validate(const LassoConfig &config)
    {
        require(config.penalty >= 0.0, "lasso: penalty must be >= 0");
        require(config.relative_penalty >= 0.0 && config.relative_penalty < 1.0,
                "lasso: relative_penalty must lie in [0, 1)");
        require(config.max_iterations >= 1, "lasso: max_iterations must be >= 1");
        require(config.convergence_tol > 0.0, "lasso: convergence_tol must be > 0");
        require(config.support_threshold > 0.0 && config.support_threshold < 1.0,
                "lasso: support_threshold must lie in (0, 1)");
    }

    double lasso_objective(const LinearOperator &op, const Eigen::VectorXcd &y, const Eigen::VectorXcd &x,
                           double penalty)
    {
        return 0.5 * (y - op.apply(x)).squaredNorm() + penalty * l1_norm(x);
    }

    double lipschitz_constant(const LinearOperator &op, int iterations)
    {
        Eigen::VectorXcd v(op.cols());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v[i] = std::polar(1.0, 0.7 * static_cast<double>(i)); // fixed, non-degenerate start
        v.normalize();
        double eigenvalue = 0.0;
        for (int it = 0; it < iterations; ++it)
        {
            Eigen::VectorXcd w = op.adjoint(op.apply(v));
            eigenvalue = w.norm();
            if (eigenvalue == 0.0)
                return 1.0;
            v = w / eigenvalue;
        }
        return 1.02 * eigenvalue;
    }

    double universal_penalty(double scale, double noise_variance, double tx_power, int n_subcarriers,
                             Eigen::Index n_columns)
    {
        return scale * std::sqrt(noise_variance) *
               std::sqrt(tx_power * n_subcarriers * std::log(static_cast<double>(n_columns)));
    }

    Eigen::VectorXcd soft_threshold(const Eigen::VectorXcd &v, double threshold)
    {
        Eigen::VectorXcd out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
        {
            const double magnitude = std::abs(v[i]);
            out[i] = magnitude > threshold ? v[i] * (1.0 - threshold / magnitude) : cdouble(0.0, 0.0);
        }
        return out;
    }

    LassoSolution solve_lasso(const LinearOperator &op, const Eigen::VectorXcd &y, const LassoConfig &config,
                              double lipschitz)
    {
        validate(config);
        require(y.size() == op.rows(), "solve_lasso: measurement length differs from operator rows");
        if (lipschitz <= 0.0)
            lipschitz = lipschitz_constant(op);
        const double step = 1.0 / lipschitz;
        const double alpha = config.penalty;

        LassoSolution out;
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(op.cols());
        Eigen::VectorXcd ax = Eigen::VectorXcd::Zero(op.rows());
        Eigen::VectorXcd z = x, az = ax;
        double best = 0.5 * y.squaredNorm();
        double t = 1.0;

        for (int it = 1; it <= config.max_iterations; ++it)
        {
            const Eigen::VectorXcd gradient = op.adjoint(az - y);
            const Eigen::VectorXcd u = soft_threshold(z - step * gradient, step * alpha);
            const Eigen::VectorXcd au = op.apply(u);
            const double objective_u = 0.5 * (au - y).squaredNorm() + alpha * l1_norm(u);
            // size of the proximal-gradient step taken from the extrapolated point
            const double moved = (u - z).norm();

            const Eigen::VectorXcd x_prev = x, ax_prev = ax;
            const bool accepted = objective_u <= best;
            if (accepted)
            {
                x = u;
                ax = au;
                best = objective_u;
            }
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            z = x + (t / t_next) * (u - x) + ((t - 1.0) / t_next) * (x - x_prev);
            az = ax + (t / t_next) * (au - ax) + ((t - 1.0) / t_next) * (ax - ax_prev);
            t = t_next;

            out.iterations = it;
            if (config.record_objective)
                out.objective_history.push_back(best);

            if (accepted && moved <= config.convergence_tol * std::max(u.norm(), 1e-300))
            {
                out.converged = true;
                break;
            }
        }
        out.x = std::move(x);
        out.objective = best;
        return out;
    }

    bool RecoveredChannels::all_converged() const
    {
        for (bool c : converged)
            if (!c)
                return false;
        return true;
    }

    double effective_penalty(const LinearOperator &op, const Eigen::VectorXcd &y, const LassoConfig &config)
    {
        double alpha = config.penalty;
        if (config.relative_penalty > 0.0 && y.size() > 0)
            alpha = std::max(alpha, config.relative_penalty * op.adjoint(y).cwiseAbs().maxCoeff());
        return alpha;
    }

    RecoveredChannels recover_channels(const OfdmSensingOperator &op, const std::vector<Measurement> &measurements,
                                       const LassoConfig &config)
    {
        RecoveredChannels out;
        out.n_bs = op.n_bs();
        out.tap_span = op.tap_span();
        out.per_receiver.resize(out.n_bs);
        out.converged.assign(out.n_bs, false);
        const double lipschitz = lipschitz_constant(op);
        for (const auto &meas : measurements)
        {
            require(meas.receiver >= 0 && meas.receiver < out.n_bs, "recover_channels: receiver index out of range");
            LassoConfig local = config;
            local.penalty = effective_penalty(op, meas.y, config);
            auto solution = solve_lasso(op, meas.y, local, lipschitz);
            out.per_receiver[meas.receiver] = std::move(solution.x);
            out.converged[meas.receiver] = solution.converged;
        }
        return out;
    }

    std::vector<int> support_of(const Eigen::VectorXcd &block, double threshold)
    {
        std::vector<int> out;
        if (block.size() == 0)
            return out;
        const double peak = block.cwiseAbs().maxCoeff();
        for (Eigen::Index l = 0; l < block.size(); ++l)
        {
            const double magnitude = std::abs(block[l]);
            if (magnitude > 0.0 && magnitude > threshold * peak)
                out.push_back(static_cast<int>(l));
        }
        return out;
    }

    SupportSets extract_support(const RecoveredChannels &channels, double threshold)
    {
        SupportSets out;
        out.n_bs = channels.n_bs;
        out.sets.resize(static_cast<std::size_t>(channels.n_bs) * channels.n_bs);
        for (int u = 0; u < channels.n_bs; ++u)
            for (int m = 0; m < channels.n_bs; ++m)
            {
                out.at(u, m) = support_of(channels.block(u, m), threshold);
                if (u != m && out.at(u, m).empty())
                    out.empty_bistatic.emplace_back(u, m);
            }
        return out;
    }
}
