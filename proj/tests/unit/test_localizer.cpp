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

#include <catch2/catch_amalgamated.hpp>

#include "netsense/localizer.hpp"
#include "oracles.hpp"

using namespace netsense;

namespace
{
    NlsProblem exact_problem(const std::vector<Point2D> &bs, Point2D target, double bias = 0.0)
    {
        NlsProblem p;
        const int n = static_cast<int>(bs.size());
        for (int u = 0; u < n; ++u)
            for (int m = 0; m < n; ++m)
                p.terms.push_back({u, m, bs[u], bs[m],
                                   oracle::dist(bs[u], target) + oracle::dist(bs[m], target) + bias});
        return p;
    }

    const std::vector<Point2D> corner_bs{{0, 0}, {80, 0}, {0, 80}};
}

TEST_CASE("circle intersection examples", "[localizer]")
{
    const auto tangent = circle_intersections({0, 0}, 50, {60, 80}, 50);
    REQUIRE(tangent.size() == 1);
    CHECK(tangent[0].x == Catch::Approx(30.0).margin(1e-9));
    CHECK(tangent[0].y == Catch::Approx(40.0).margin(1e-9));

    CHECK(circle_intersections({1, 1}, 5, {1, 1}, 7).empty());

    const auto two = circle_intersections({0, 0}, 5, {8, 0}, 5);
    REQUIRE(two.size() == 2);
    for (const auto &p : two)
    {
        CHECK(oracle::dist(p, {0, 0}) == Catch::Approx(5.0));
        CHECK(oracle::dist(p, {8, 0}) == Catch::Approx(5.0));
    }

    // Disjoint circles fall back to the point on the centre line.
    const auto apart = circle_intersections({0, 0}, 1, {10, 0}, 1);
    REQUIRE(apart.size() == 1);
    CHECK(apart[0].y == Catch::Approx(0.0).margin(1e-12));
    CHECK(apart[0].x == Catch::Approx(5.0));
}

TEST_CASE("initial guess with exact echoes hits the target", "[localizer]")
{
    const Point2D target{30, 40};
    const auto starts = initial_guess(exact_problem(corner_bs, target), 3);
    REQUIRE(!starts.empty());
    CHECK(starts.size() <= 3);
    double best = 1e9;
    for (const auto &s : starts)
        best = std::min(best, oracle::dist(s, target));
    CHECK(best < 1e-6);
}

TEST_CASE("concentric echo circles fall back to the centroid", "[localizer]")
{
    NlsProblem p;
    p.terms.push_back({0, 0, {0, 0}, {0, 0}, 20});
    p.terms.push_back({1, 1, {0, 0}, {0, 0}, 30});
    p.terms.push_back({2, 2, {10, 0}, {10, 0}, 50});
    const auto starts = initial_guess(p, 3);
    REQUIRE(starts.size() >= 1);
    const Point2D centroid{10.0 / 3.0, 0.0};
    CHECK(std::any_of(starts.begin(), starts.end(),
                      [&](Point2D s) { return oracle::dist(s, centroid) < 1e-12; }));
}

TEST_CASE("gauss_newton worked example", "[localizer]")
{
    const NlsProblem p = exact_problem(corner_bs, {30, 40});
    CHECK(p.terms[0].range == Catch::Approx(100.0));
    CHECK(p.terms[4].range == Catch::Approx(128.0625).margin(1e-4));
    CHECK(p.terms[8].range == Catch::Approx(100.0));
    const auto f = gauss_newton(p, {40, 40}, GnConfig{});
    CHECK(f.converged);
    CHECK(f.residual < 1e-10);
    CHECK(oracle::dist(f.location, {30, 40}) < 1e-5);
}

TEST_CASE("gauss_newton started at the optimum stops at once", "[localizer]")
{
    const auto f = gauss_newton(exact_problem(corner_bs, {30, 40}), {30, 40}, GnConfig{});
    CHECK(f.converged);
    CHECK(f.iterations <= 1);
    CHECK(f.residual < 1e-20);
}

TEST_CASE("ranges biased by dd give a small residual near the truth", "[localizer]")
{
    const double dd = 0.3787878787878788;
    const auto f = fit(exact_problem(corner_bs, {30, 40}, dd), GnConfig{});
    CHECK(f.residual > 0.0);
    CHECK(oracle::dist(f.location, {30, 40}) < 2 * dd);
}

TEST_CASE("fit needs three distinct BSs", "[localizer]")
{
    CHECK_THROWS_AS(fit(exact_problem({{0, 0}, {50, 0}}, {10, 10}), GnConfig{}), PreconditionError);
}

TEST_CASE("fit picks the better basin of a mirror ambiguity", "[localizer]")
{
    // Echoes of BS 0 and 1 admit the target and its mirror across their axis;
    // the third BS only agrees with the true side.
    const std::vector<Point2D> bs{{0, 0}, {60, 0}, {30, 70}};
    const Point2D target{25, 20};
    const auto p = exact_problem(bs, target);
    const auto f = fit(p, GnConfig{});
    CHECK(oracle::dist(f.location, target) < 1e-5);
    const auto mirror = gauss_newton(p, {25, -20}, GnConfig{});
    CHECK(f.residual <= mirror.residual);
}

TEST_CASE("single start on exact data equals gauss_newton", "[localizer]")
{
    GnConfig cfg;
    cfg.multistart = 1;
    const auto p = exact_problem(corner_bs, {55, 12});
    const auto starts = initial_guess(p, 1);
    REQUIRE(starts.size() == 1);
    const auto a = fit(p, cfg);
    const auto b = gauss_newton(p, starts[0], cfg);
    CHECK(a.location == b.location);
    CHECK(a.residual == b.residual);
}

TEST_CASE("analytic Jacobian matches central differences", "[localizer][property]")
{
    Rng rng(21);
    std::uniform_real_distribution<double> c(0.0, 80.0), noise(-2.0, 2.0);
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i)
    {
        std::vector<Point2D> bs{{c(rng), c(rng)}, {c(rng), c(rng)}, {c(rng), c(rng)}, {c(rng), c(rng)}};
        const Point2D target{c(rng), c(rng)};
        NlsProblem p = exact_problem(bs, target);
        for (auto &t : p.terms)
            t.range += noise(rng);
        const Point2D at{c(rng), c(rng)};
        const Eigen::MatrixX2d j = nls_jacobian(p, at);
        Eigen::MatrixX2d fd(j.rows(), 2);
        fd.col(0) = (nls_residuals(p, {at.x + h, at.y}) - nls_residuals(p, {at.x - h, at.y})) / (2 * h);
        fd.col(1) = (nls_residuals(p, {at.x, at.y + h}) - nls_residuals(p, {at.x, at.y - h})) / (2 * h);
        CHECK((j - fd).norm() <= 1e-5 * j.norm());
    }
}

TEST_CASE("fit never exceeds the objective at its starts", "[localizer][property]")
{
    Rng rng(22);
    std::uniform_real_distribution<double> c(0.0, 80.0), noise(-1.0, 1.0);
    for (int i = 0; i < 100; ++i)
    {
        std::vector<Point2D> bs{{c(rng), c(rng)}, {c(rng), c(rng)}, {c(rng), c(rng)}};
        NlsProblem p = exact_problem(bs, {c(rng), c(rng)});
        for (auto &t : p.terms)
            t.range = std::max(1.0, t.range + noise(rng));
        const auto f = fit(p, GnConfig{});
        for (const auto &s : initial_guess(p, GnConfig{}.multistart))
            CHECK(f.residual <= nls_objective(p, s) + 1e-12);
    }
}

TEST_CASE("exact data reach a zero residual at the truth", "[localizer][property]")
{
    Rng rng(23);
    std::uniform_real_distribution<double> c(0.0, 80.0);
    for (int i = 0; i < 100; ++i)
    {
        const std::vector<Point2D> bs{{0, 0}, {80, 5}, {10, 75}, {70, 70}};
        const Point2D target{c(rng), c(rng)};
        const auto f = fit(exact_problem(bs, target), GnConfig{});
        CHECK(f.residual < 1e-8);
        CHECK(oracle::dist(f.location, target) < 1e-5);
    }
}

TEST_CASE("iterate on a BS is nudged off it", "[localizer]")
{
    const auto f = gauss_newton(exact_problem(corner_bs, {30, 40}), corner_bs[0], GnConfig{});
    CHECK(std::isfinite(f.residual));
    CHECK(oracle::dist(f.location, {30, 40}) < 1e-5);
}
