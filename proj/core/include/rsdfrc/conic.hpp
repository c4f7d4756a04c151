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

#pragma once

#include <string>
#include <vector>

#include "rsdfrc/model.hpp"

namespace rsdfrc {

// ||F x + g|| <= f^T x + e
struct SocConstraint {
    rmat F;
    rvec g;
    rvec f;
    double e = 0.0;
};

// ||R x + r||^2 <= (u^T x + u0)(v^T x + v0) with both factors nonnegative,
// written as the cone ||[2(R x + r); u^T x + u0 - v^T x - v0]|| <= u^T x + u0 + v^T x + v0.
SocConstraint rotated_cone(const rmat& R, const rvec& r, const rvec& u, double u0, const rvec& v, double v0);

// minimize c^T x  s.t.  A x = b,  G_lin x <= h_lin,  every cone in `cones`.
struct SocpProblem {
    rvec c;
    rmat A;
    rvec b;
    rmat G_lin;
    rvec h_lin;
    std::vector<SocConstraint> cones;

    Eigen::Index num_vars() const { return c.size(); }
    // Throws std::invalid_argument on inconsistent dimensions or non-finite data.
    void validate() const;
};

enum class SocpStatus { optimal, infeasible, unbounded, max_iters };

std::string to_string(SocpStatus s);

struct SocpSettings {
    double feastol = 1e-8;
    double abstol = 1e-8;
    double reltol = 1e-7;
    int max_iters = 100;
};

struct SocpSolution {
    SocpStatus status = SocpStatus::max_iters;
    rvec x;
    int iterations = 0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

SocpSolution solve_socp(const SocpProblem& p, const SocpSettings& settings = {});

// Real lifting of complex data on interleaved (re, im) coordinates.
// A complex entry a + ib maps to the block [[a, -b], [b, a]], so lift(M) * lift(v) = lift(M v).
rmat lift(const cmat& M);
rvec lift(const cvec& v);
cvec unlift(const rvec& v);

}  // namespace rsdfrc
