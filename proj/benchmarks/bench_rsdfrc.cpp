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

#include <random>

#include <benchmark/benchmark.h>

#include "rsdfrc/harness.hpp"
#include "rsdfrc/pc_variant.hpp"

using namespace rsdfrc;

namespace {

// minimize t  s.t.  ||x - x0|| <= t,  sum(x) = 1
SocpProblem projection_problem(int n)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    SocpProblem p;
    p.c = rvec::Zero(n + 1);
    p.c(n) = 1;
    p.A = rmat::Zero(1, n + 1);
    p.A.leftCols(n).setOnes();
    p.b = rvec::Ones(1);
    p.G_lin = rmat::Zero(0, n + 1);
    p.h_lin = rvec::Zero(0);
    SocConstraint k;
    k.F = rmat::Zero(n, n + 1);
    k.F.leftCols(n).setIdentity();
    k.g = rvec(n);
    for (int i = 0; i < n; ++i) k.g(i) = -g(rng);
    k.f = rvec::Zero(n + 1);
    k.f(n) = 1;
    p.cones.push_back(k);
    return p;
}

void BM_SocpProjection(benchmark::State& state)
{
    const SocpProblem p = projection_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_socp(p));
}
BENCHMARK(BM_SocpProjection)->Arg(16)->Arg(64)->Arg(256);

void BM_MarcumQ1(benchmark::State& state)
{
    double b = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(marcum_q1(5.0, b));
        b = b > 8 ? 1.0 : b + 0.01;
    }
}
BENCHMARK(BM_MarcumQ1);

void BM_Solve(benchmark::State& state)
{
    ExperimentSpec spec = parse_spec("");
    spec.values = {10.0};
    const auto arch = static_cast<Architecture>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_cell(spec, 0, arch, 0));
    state.SetLabel(to_string(arch));
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<int>(Architecture::RS))
    ->Arg(static_cast<int>(Architecture::PC))
    ->Arg(static_cast<int>(Architecture::FD))
    ->Unit(benchmark::kMillisecond)
    ->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
