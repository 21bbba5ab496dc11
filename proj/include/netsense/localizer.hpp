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

#include <limits>
#include <vector>

#include "netsense/common.hpp"
#include "netsense/geometry.hpp"

namespace netsense
{
    /// One measured path length |p - bs_u| + |p - bs_m| = range. u == m marks a
    /// monostatic (echo) term.
    struct RangeTerm
    {
        int u{};
        int m{};
        Point2D bs_u;
        Point2D bs_m;
        double range{};
    };

    struct NlsProblem
    {
        std::vector<RangeTerm> terms;

        /// Number of distinct BS indices referenced by the terms.
        int distinct_bs() const;
    };

    struct GnConfig
    {
        int max_iterations = 50;
        double step_tol = 1e-6; // m
        double damping = 1e-3;  // initial Marquardt factor
        int multistart = 3;
    };

    struct LocalizationFit
    {
        Point2D location;
        double residual = std::numeric_limits<double>::infinity(); // sum of squares
        bool converged = false;
        int iterations = 0;
    };

    double nls_objective(const NlsProblem &problem, Point2D p);
    Eigen::VectorXd nls_residuals(const NlsProblem &problem, Point2D p);

    /// Rows are d r_i / d(x, y): the sum of the unit vectors from bs_u and bs_m
    /// towards p.
    Eigen::MatrixX2d nls_jacobian(const NlsProblem &problem, Point2D p);

    /// Intersection points of two circles. Tangent circles give one point; disjoint
    /// or nested circles give the point on the centre line at the radical-axis
    /// offset; concentric circles give none.
    std::vector<Point2D> circle_intersections(Point2D c1, double r1, Point2D c2, double r2);

    /// Start points: the intersections of the echo circles (radius D_mm / 2) of
    /// the two shortest monostatic terms, then the centroid of the referenced BSs.
    /// At most `multistart` points, duplicates removed.
    std::vector<Point2D> initial_guess(const NlsProblem &problem, int multistart);

    /// Levenberg-Marquardt damped Gauss-Newton on the stacked residuals. A step is
    /// accepted only if it does not increase the objective; the damping halves
    /// after an accepted step and grows x4 after a rejected or singular one.
    LocalizationFit gauss_newton(const NlsProblem &problem, Point2D start, const GnConfig &config);

    /// Best fit over initial_guess(). Throws PreconditionError with fewer than
    /// three distinct BSs. If every start diverges the fit has converged = false
    /// and an infinite residual.
    LocalizationFit fit(const NlsProblem &problem, const GnConfig &config);
}
