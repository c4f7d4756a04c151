// SPDX-License-Identifier: Apache-2.0
//
// rsdfrc: hybrid beamforming for reconfigurable-subarray radar-communication systems
// Copyright (C) 2026 The rsdfrc authors
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

#include "doctest.h"
#include "support.hpp"

#include "rsdfrc/conic.hpp"

using namespace rsdfrc;
using namespace rsdfrc::test;

namespace {

SocConstraint ball(const rvec& center, double radius)
{
    const auto n = center.size();
    return SocConstraint{rmat::Identity(n, n), -center, rvec::Zero(n), radius};
}

double worst_violation(const SocpProblem& p, const rvec& x)
{
    double v = 0;
    for (const auto& c : p.cones) v = std::max(v, (c.F * x + c.g).norm() - c.f.dot(x) - c.e);
    if (p.G_lin.rows() > 0) v = std::max(v, (p.G_lin * x - p.h_lin).maxCoeff());
    if (p.A.rows() > 0) v = std::max(v, (p.A * x - p.b).cwiseAbs().maxCoeff());
    return v;
}

}  // namespace

TEST_CASE("degenerate cone pins the variable")
{
    SocpProblem p;
    p.c = rvec::Ones(1);
    p.cones.push_back(SocConstraint{rmat::Ones(1, 1), -rvec::Ones(1), rvec::Zero(1), 0.0});
    const SocpSolution s = solve_socp(p);
    CHECK(s.status == SocpStatus::optimal);
    CHECK(s.x(0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("linear objective over the unit ball")
{
    SocpProblem p;
    p.c = rvec::Zero(2);
    p.c(0) = 1;
    p.cones.push_back(ball(rvec::Zero(2), 1.0));
    const SocpSolution s = solve_socp(p);
    REQUIRE(s.status == SocpStatus::optimal);
    CHECK(s.x(0) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(std::abs(s.x(1)) < 1e-6);
    CHECK(s.primal_objective == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("three-variable problem agrees with a grid search")
{
    // min c'x  s.t.  ||x - p|| <= 1.2,  x1 + x2 + x3 = 1,  x1 <= 0.4
    SocpProblem p;
    p.c = rvec(3);
    p.c << 1.0, -2.0, 0.5;
    rvec ctr(3);
    ctr << 0.2, 0.1, -0.3;
    p.cones.push_back(ball(ctr, 1.2));
    p.A = rmat::Ones(1, 3);
    p.b = rvec::Ones(1);
    p.G_lin = rmat::Zero(1, 3);
    p.G_lin(0, 0) = 1;
    p.h_lin = rvec::Constant(1, 0.4);
    const SocpSolution s = solve_socp(p);
    REQUIRE(s.status == SocpStatus::optimal);
    CHECK(worst_violation(p, s.x) <= 1e-6);

    double best = INFINITY;
    const double h = 1e-3;
    for (double x1 = -1.2; x1 <= 0.4 + 1e-12; x1 += h)
        for (double x2 = -1.3; x2 <= 1.5; x2 += h) {
            const double x3 = 1 - x1 - x2;
            const double r2 = (x1 - 0.2) * (x1 - 0.2) + (x2 - 0.1) * (x2 - 0.1) + (x3 + 0.3) * (x3 + 0.3);
            if (r2 > 1.44) continue;
            best = std::min(best, x1 - 2 * x2 + 0.5 * x3);
        }
    CHECK(std::abs(s.primal_objective - best) < 2e-3);
    CHECK(s.primal_objective <= best + 1e-9);
}

TEST_CASE("projection onto an affine set matches the closed form")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 6, m = 2;
        rmat A(m, d);
        rvec b(m), q(d);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = n(rng);
        for (int i = 0; i < m; ++i) b(i) = n(rng);
        for (int j = 0; j < d; ++j) q(j) = n(rng);
        const rvec proj = q - A.transpose() * (A * A.transpose()).ldlt().solve(A * q - b);

        // variables (x, t): min t  s.t.  ||x - q|| <= t,  A x = b
        SocpProblem p;
        p.c = rvec::Zero(d + 1);
        p.c(d) = 1;
        rmat F = rmat::Zero(d, d + 1);
        F.leftCols(d).setIdentity();
        rvec f = rvec::Zero(d + 1);
        f(d) = 1;
        p.cones.push_back(SocConstraint{F, -q, f, 0.0});
        p.A = rmat::Zero(m, d + 1);
        p.A.leftCols(d) = A;
        p.b = b;
        const SocpSolution s = solve_socp(p);
        REQUIRE(s.status == SocpStatus::optimal);
        CHECK((s.x.head(d) - proj).norm() < 1e-5);
        CHECK(s.x(d) == doctest::Approx((proj - q).norm()).epsilon(1e-6));
        CHECK(std::abs(s.gap) <= 1e-6 * std::max(1.0, std::abs(s.primal_objective)));
    }
}

TEST_CASE("rotated cone epigraph of a squared norm")
{
    // min t  s.t.  ||x||^2 <= t * 1,  x1 >= 2
    SocpProblem p;
    p.c = rvec::Zero(3);
    p.c(2) = 1;
    rmat R = rmat::Zero(2, 3);
    R.leftCols(2).setIdentity();
    rvec u = rvec::Zero(3);
    u(2) = 1;
    p.cones.push_back(rotated_cone(R, rvec::Zero(2), u, 0.0, rvec::Zero(3), 1.0));
    p.G_lin = rmat::Zero(1, 3);
    p.G_lin(0, 0) = -1;
    p.h_lin = rvec::Constant(1, -2.0);
    const SocpSolution s = solve_socp(p);
    REQUIRE(s.status == SocpStatus::optimal);
    CHECK(s.x(2) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(s.x(0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded problems are reported")
{
    SUBCASE("infeasible")
    {
        SocpProblem p;
        p.c = rvec::Zero(2);
        p.cones.push_back(ball(rvec::Zero(2), 1.0));
        p.G_lin = rmat::Zero(1, 2);
        p.G_lin(0, 0) = -1;
        p.h_lin = rvec::Constant(1, -2.0);
        CHECK(solve_socp(p).status == SocpStatus::infeasible);
    }
    SUBCASE("unbounded")
    {
        // min -x2  s.t.  |x1| <= x2
        SocpProblem p;
        p.c = rvec::Zero(2);
        p.c(1) = -1;
        rmat F = rmat::Zero(1, 2);
        F(0, 0) = 1;
        rvec f = rvec::Zero(2);
        f(1) = 1;
        p.cones.push_back(SocConstraint{F, rvec::Zero(1), f, 0.0});
        CHECK(solve_socp(p).status == SocpStatus::unbounded);
    }
}

TEST_CASE("random feasible problems satisfy every constraint at optimum")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 8;
        SocpProblem p;
        p.c = rvec(d);
        for (int j = 0; j < d; ++j) p.c(j) = n(rng);
        p.cones.push_back(ball(rvec::Zero(d), 3.0));
        for (int k = 0; k < 3; ++k) {
            SocConstraint c{rmat(4, d), rvec(4), rvec(d), 0.0};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < d; ++j) c.F(i, j) = 0.3 * n(rng);
            for (int i = 0; i < 4; ++i) c.g(i) = 0.3 * n(rng);
            for (int j = 0; j < d; ++j) c.f(j) = 0.1 * n(rng);
            c.e = c.g.norm() + 0.5;  // x = 0 is strictly feasible
            p.cones.push_back(c);
        }
        const SocpSolution s = solve_socp(p);
        REQUIRE(s.status == SocpStatus::optimal);
        CHECK(worst_violation(p, s.x) <= 1e-6);
        CHECK(std::abs(s.primal_objective - s.dual_objective) <= 1e-6 * std::max(1.0, std::abs(s.primal_objective)));
        CHECK(s.primal_objective <= 0.0 + 1e-9);
    }
}

TEST_CASE("malformed problems are rejected")
{
    SocpProblem p;
    p.c = rvec::Zero(2);
    p.cones.push_back(SocConstraint{rmat::Identity(3, 3), rvec::Zero(3), rvec::Zero(3), 1.0});
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(solve_socp(p), std::invalid_argument);
}

TEST_CASE("complex lifting")
{
    std::mt19937_64 rng(3);
    const cmat M = randn(rng, 3, 4);
    const cvec v = randv(rng, 4);
    CHECK((lift(M) * lift(v) - lift(cvec(M * v))).norm() < 1e-13);
    CHECK((unlift(lift(v)) - v).norm() == 0.0);
    CHECK(std::abs(lift(v).norm() - v.norm()) < 1e-14);
    CHECK(lift(v).size() == 8);
}
