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

#include "netsense/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace netsense
{
    namespace
    {
        constexpr double kCoincident = 1e-9;

        bool coincides_with_bs(const NlsProblem &problem, Point2D p)
        {
            for (const auto &term : problem.terms)
                if (direct_distance(term.bs_u, p) < kCoincident || direct_distance(term.bs_m, p) < kCoincident)
                    return true;
            return false;
        }

        Eigen::Vector2d unit_towards(Point2D from, Point2D p)
        {
            const double d = direct_distance(from, p);
            if (d < kCoincident)
                return Eigen::Vector2d::Zero();
            return {(p.x - from.x) / d, (p.y - from.y) / d};
        }
    }

    int NlsProblem::distinct_bs() const
    {
        std::set<int> ids;
        for (const auto &term : terms)
        {
            ids.insert(term.u);
            ids.insert(term.m);
        }
        return static_cast<int>(ids.size());
    }

    Eigen::VectorXd nls_residuals(const NlsProblem &problem, Point2D p)
    {
        Eigen::VectorXd r(problem.terms.size());
        for (std::size_t i = 0; i < problem.terms.size(); ++i)
        {
            const auto &term = problem.terms[i];
            r[static_cast<Eigen::Index>(i)] = sum_distance(term.bs_u, term.bs_m, p) - term.range;
        }
        return r;
    }

    double nls_objective(const NlsProblem &problem, Point2D p)
    {
        return nls_residuals(problem, p).squaredNorm();
    }

    Eigen::MatrixX2d nls_jacobian(const NlsProblem &problem, Point2D p)
    {
        Eigen::MatrixX2d jac(problem.terms.size(), 2);
        for (std::size_t i = 0; i < problem.terms.size(); ++i)
        {
            const auto &term = problem.terms[i];
            jac.row(static_cast<Eigen::Index>(i)) = (unit_towards(term.bs_u, p) + unit_towards(term.bs_m, p)).transpose();
        }
        return jac;
    }

    std::vector<Point2D> circle_intersections(Point2D c1, double r1, Point2D c2, double r2)
    {
        const double dx = c2.x - c1.x;
        const double dy = c2.y - c1.y;
        const double d = std::hypot(dx, dy);
        if (d < 1e-12)
            return {};
        const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
        const Point2D base{c1.x + a * dx / d, c1.y + a * dy / d};
        const double h2 = r1 * r1 - a * a;
        // relative tolerance so that exactly tangent circles survive rounding
        if (h2 <= 1e-12 * std::max(1.0, r1 * r1))
            return {base};
        const double h = std::sqrt(h2);
        return {{base.x - h * dy / d, base.y + h * dx / d}, {base.x + h * dy / d, base.y - h * dx / d}};
    }

    std::vector<Point2D> initial_guess(const NlsProblem &problem, int multistart)
    {
        std::vector<const RangeTerm *> echoes;
        for (const auto &term : problem.terms)
            if (term.u == term.m)
                echoes.push_back(&term);
        std::sort(echoes.begin(), echoes.end(),
                  [](const RangeTerm *a, const RangeTerm *b) { return a->range < b->range; });

        std::vector<Point2D> candidates;
        for (std::size_t j = 1; j < echoes.size(); ++j)
        {
            if (echoes[j]->u == echoes[0]->u)
                continue;
            candidates = circle_intersections(echoes[0]->bs_u, 0.5 * echoes[0]->range, echoes[j]->bs_u,
                                              0.5 * echoes[j]->range);
            break;
        }

        std::set<int> seen;
        Point2D centroid{};
        for (const auto &term : problem.terms)
            for (auto [id, pos] : {std::pair{term.u, term.bs_u}, std::pair{term.m, term.bs_m}})
                if (seen.insert(id).second)
                {
                    centroid.x += pos.x;
                    centroid.y += pos.y;
                }
        if (!seen.empty())
        {
            centroid.x /= static_cast<double>(seen.size());
            centroid.y /= static_cast<double>(seen.size());
            candidates.push_back(centroid);
        }

        std::vector<Point2D> out;
        for (const auto &p : candidates)
        {
            const bool duplicate = std::any_of(out.begin(), out.end(),
                                               [&](const Point2D &q) { return direct_distance(p, q) < 1e-9; });
            if (!duplicate && static_cast<int>(out.size()) < multistart)
                out.push_back(p);
        }
        return out;
    }

    LocalizationFit gauss_newton(const NlsProblem &problem, Point2D start, const GnConfig &config)
    {
        require(config.max_iterations >= 1, "gauss_newton: max_iterations must be >= 1");
        require(std::isfinite(start.x) && std::isfinite(start.y), "gauss_newton: start must be finite");

        LocalizationFit out;
        Point2D p = start;
        double lambda = config.damping;
        double objective = nls_objective(problem, p);

        for (int it = 1; it <= config.max_iterations; ++it)
        {
            out.iterations = it;
            if (coincides_with_bs(problem, p))
            {
                p.x += 1e-6;
                objective = nls_objective(problem, p);
            }
            const Eigen::VectorXd r = nls_residuals(problem, p);
            const Eigen::MatrixX2d jac = nls_jacobian(problem, p);
            const Eigen::Matrix2d normal = jac.transpose() * jac;
            const Eigen::Vector2d gradient = jac.transpose() * r;

            bool accepted = false;
            double step_norm = 0.0;
            for (int attempt = 0; attempt < 30 && !accepted; ++attempt)
            {
                Eigen::Matrix2d damped = normal;
                for (int i = 0; i < 2; ++i)
                    damped(i, i) += lambda * std::max(normal(i, i), 1e-12);
                if (std::abs(damped.determinant()) < 1e-18)
                {
                    lambda *= 4.0;
                    continue;
                }
                const Eigen::Vector2d step = -damped.inverse() * gradient;
                const Point2D trial{p.x + step.x(), p.y + step.y()};
                const double trial_objective = nls_objective(problem, trial);
                if (std::isfinite(trial_objective) && trial_objective <= objective)
                {
                    p = trial;
                    objective = trial_objective;
                    step_norm = step.norm();
                    lambda = std::max(0.5 * lambda, 1e-12);
                    accepted = true;
                }
                else
                {
                    lambda *= 4.0;
                }
            }
            // no descent direction left: a stationary point up to damping limits
            if (!accepted || step_norm < config.step_tol)
            {
                out.converged = true;
                break;
            }
        }

        out.location = p;
        out.residual = objective;
        if (!std::isfinite(objective) || !std::isfinite(p.x) || !std::isfinite(p.y))
        {
            out.converged = false;
            out.residual = std::numeric_limits<double>::infinity();
        }
        return out;
    }

    LocalizationFit fit(const NlsProblem &problem, const GnConfig &config)
    {
        if (problem.distinct_bs() < 3)
            throw PreconditionError("fit: at least three distinct BSs are required");
        LocalizationFit best;
        for (const auto &start : initial_guess(problem, std::max(config.multistart, 1)))
        {
            const LocalizationFit candidate = gauss_newton(problem, start, config);
            if (std::isfinite(candidate.residual) && candidate.residual < best.residual)
                best = candidate;
        }
        return best;
    }
}
