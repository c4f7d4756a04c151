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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "support.hpp"

#include "rsdfrc/harness.hpp"
#include "rsdfrc/pc_variant.hpp"

using namespace rsdfrc;
using namespace rsdfrc::test;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

cmat kron_identity(int n, const cmat& A)
{
    cmat K = cmat::Zero(n * A.rows(), n * A.cols());
    for (int i = 0; i < n; ++i) K.block(i * A.rows(), i * A.cols(), A.rows(), A.cols()) = A;
    return K;
}

double exhaustive_analog(const cmat& Z, const cmat& D)
{
    const int M = static_cast<int>(Z.rows()), N = static_cast<int>(D.rows());
    std::vector<int> chain(M, 0);
    double best = INFINITY;
    for (;;) {
        cmat RF = cmat::Zero(M, N);
        for (int m = 0; m < M; ++m) {
            const cplx c = (Z.row(m) * D.row(chain[m]).adjoint())(0, 0);
            RF(m, chain[m]) = std::polar(1.0, std::abs(c) > 0 ? std::arg(c) : 0.0);
        }
        best = std::min(best, (Z - RF * D).squaredNorm());
        int i = 0;
        while (i < M && ++chain[i] == N) chain[i++] = 0;
        if (i == M) break;
    }
    return best;
}

// The desk-scale suite shared by criteria 8, 9 and 11.
struct Suite {
    ExperimentSpec spec;
    std::vector<SolveResult> rs, pc, fd;
    double seconds = 0;
};

constexpr int suite_seeds = 20;

ExperimentSpec desk_spec(std::vector<double> gammas_db)
{
    ExperimentSpec s = parse_spec("");
    s.values = std::move(gammas_db);
    s.seed = 1;
    s.trials = suite_seeds;
    return s;
}

const Suite& suite()
{
    static const Suite s = [] {
        Suite out;
        out.spec = desk_spec({10.0});
        const auto t0 = Clock::now();
        for (int t = 0; t < suite_seeds; ++t) {
            out.rs.push_back(solve_cell(out.spec, 0, Architecture::RS, t));
            out.pc.push_back(solve_cell(out.spec, 0, Architecture::PC, t));
            out.fd.push_back(solve_cell(out.spec, 0, Architecture::FD, t));
        }
        out.seconds = seconds_since(t0);
        return out;
    }();
    return s;
}

double mean_rate(const std::vector<SolveResult>& v)
{
    double m = 0;
    for (const auto& r : v) m += r.sum_rate;
    return m / v.size();
}

Outcome detection()
{
    const auto t0 = Clock::now();
    const double snr = std::pow(10.0, 1.5);
    const double p6 = detection_probability(snr, 1e-6), p4 = detection_probability(snr, 1e-4);
    const double dt = seconds_since(t0);
    return {std::abs(p6 - 0.9972) <= 0.0005 && p4 >= 0.9999 && dt < 1.0,
            fmt::format("P_D(15 dB, 1e-6) = {:.5f}, P_D(15 dB, 1e-4) = {:.6f}, {:.3f} s", p6, p4, dt)};
}

Outcome power_accounting()
{
    SystemConfig c;
    c.M_T = 64;
    c.M_R = 16;
    c.N_RF_t = 8;
    c.N_RF_r = 8;
    c.K = 4;
    const PowerModel pm;
    const double rs = total_power(Architecture::RS, c, pm), pc = total_power(Architecture::PC, c, pm),
                 fc = total_power(Architecture::FC, c, pm), fd = total_power(Architecture::FD, c, pm);
    const bool ok = std::abs(rs - 19.4) <= 1e-12 && std::abs(pc - 19.0) <= 1e-12 && std::abs(fc - 47.0) <= 1e-12 &&
                    std::abs(fd - 34.2) <= 1e-12;
    return {ok, fmt::format("RS {} W, PC {} W, FC {} W, FD {} W", rs, pc, fc, fd)};
}

Outcome rate_logdet_consistency()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1003);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const int K = 1 + i % 3, MT = 2 + i % 7, MU = 1 + i % 3;
        const int ds = std::min(MU, std::max(1, MT / K) >= 2 && i % 2 ? 2 : 1);
        SystemConfig c = small_config(MT, 4, K * ds, 2, K, MU, ds);
        c.sigma2_user = 0.05 + 0.1 * (i % 5);
        const ChannelSet ch = random_channels(rng, c);
        std::vector<cmat> T;
        for (int k = 0; k < K; ++k) T.push_back(randn(rng, MT, ds));
        const auto U = update_U(ch, T, c);
        const auto G = update_G(ch, T, U, c);
        double lg = 0;
        for (const auto& g : G) lg += std::log2(std::real(g.determinant()));
        worst = std::max(worst, rel_err(lg, sum_rate(ch, T, U, c)));
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-8 && dt < 10, fmt::format("worst relative gap {:.2e} over 100 instances, {:.2f} s", worst, dt)};
}

Outcome mvdr_oracle()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1004);
    RadarScene scene;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const int MR = 1 + i % 6, MT = 2 + i % 5, Ns = 1 + i % 3;
        const SystemConfig c = small_config(MT, MR, Ns, 1, Ns, 1, 1);
        const cvec t = randv(rng, MT * Ns);
        const cvec a0 = kron_identity(Ns, ula(scene.theta_0, MR) * ula(scene.theta_0, MT).transpose()) * t;
        cmat S = c.sigma2_radar * cmat::Identity(MR * Ns, MR * Ns);
        for (double th : scene.theta_j) {
            const cvec aj = kron_identity(Ns, ula(th, MR) * ula(th, MT).transpose()) * t;
            S += scene.sigmaC_sq * aj * aj.adjoint();
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<cmat> ges(scene.sigma0_sq * a0 * a0.adjoint(), S);
        const double lam = ges.eigenvalues().maxCoeff();
        worst = std::max(worst, rel_err(scnr_vectorized(t, update_W(t, scene, c), scene, c), lam));
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-9 && dt < 10, fmt::format("worst relative gap {:.2e} over 50 instances, {:.2f} s", worst, dt)};
}

Outcome analog_exhaustive()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1005);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const int M = 2 + i % 7, N = 1 + i % 3, cols = 1 + i % 2;
        const cmat Z = randn(rng, M, cols), D = randn(rng, N, cols);
        const bool receive = i % 2 == 1;
        const AnalogUpdate a = receive ? update_WRF(Z, D) : update_TRF(Z, D);
        worst = std::max(worst, std::abs((Z - a.RF * D).squaredNorm() - exhaustive_analog(Z, D)));
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-9 && dt < 30, fmt::format("worst objective gap {:.2e} over 50 instances, {:.2f} s", worst, dt)};
}

Outcome least_squares()
{
    std::mt19937_64 rng(1006);
    double resid = 0, gap = 0;
    for (int i = 0; i < 100; ++i) {
        const int M = 4 + i % 13, N = 1 + i % 4;
        const AnalogUpdate a = update_TRF(randn(rng, M, 2), randn(rng, N, 2));
        const cmat Z = randn(rng, M, 2);
        const cmat D = update_TD(a.RF, Z);
        resid = std::max(resid, (a.RF.adjoint() * (Z - a.RF * D)).norm());
        const cmat dense = least_squares_dense(a.RF, Z);
        gap = std::max(gap, (least_squares_subarray(a.RF, Z) - dense).norm() / std::max(1.0, dense.norm()));
    }
    return {resid <= 1e-9 && gap <= 1e-10,
            fmt::format("normal-equation residual {:.2e}, closed form vs pseudo-inverse {:.2e}", resid, gap)};
}

Outcome pc_bisection()
{
    std::mt19937_64 rng(1007);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        SystemConfig c;
        c.N_RF_t = 1 << (i % 3);
        c.M_T = c.N_RF_t * (2 + i % 4);
        c.P_T = 0.5 + i % 7;
        const cmat RF = block_analog(c.M_T, c.N_RF_t, rng);
        const cmat Z = randn(rng, c.M_T, 2, 0.05 + 0.1 * (i % 10));
        const PcDigitalResult r = pc_update_TD(RF, Z, pc_digital_norm2(c));
        worst = std::max(worst, r.reached ? rel_err(r.T_D.squaredNorm(), pc_digital_norm2(c)) : INFINITY);
    }
    // T_RF^H T_RF = M I on the fixed wiring, so T_D = Gbar / (M + lambda) with ||Gbar|| / (M + lambda) = sqrt(target).
    double analytic = 0;
    for (int i = 0; i < 20; ++i) {
        const cmat RF = block_analog(16, 4, rng);
        const cmat Z = randn(rng, 16, 2, 0.2 + 0.3 * i);
        const double target = 2.5;
        const cmat Gb = RF.adjoint() * Z;
        const cmat ref = Gb * std::sqrt(target) / Gb.norm();
        analytic = std::max(analytic, (pc_update_TD(RF, Z, target).T_D - ref).norm() / ref.norm());
    }
    return {worst <= 1e-6 && analytic <= 1e-8,
            fmt::format("norm gap {:.2e} over 100 instances, analytic case gap {:.2e}", worst, analytic)};
}

Outcome solver_contract()
{
    const Suite& s = suite();
    const double gamma = db_to_linear(10.0);
    int convergent = 0, bad = 0, total = 0;
    std::string first_bad;
    auto check = [&](const SolveResult& r, const char* arch, int seed) {
        ++total;
        if (r.status != SolveStatus::converged) return;
        ++convergent;
        bool ok = r.h < 1e-4 && r.scnr >= gamma * (1 - 1e-4) && r.transmit_power <= s.spec.system.P_T * (1 + 1e-6);
        for (const auto& sweep : r.trace.sweep_objectives)
            for (size_t i = 1; i < sweep.size(); ++i) ok = ok && sweep[i] <= sweep[i - 1] + 1e-8 * std::abs(sweep[i - 1]);
        if (!ok && bad++ == 0) first_bad = fmt::format(" (first violation: {} seed {})", arch, seed);
    };
    for (int t = 0; t < suite_seeds; ++t) {
        check(s.rs[t], "RS", t);
        check(s.pc[t], "PC", t);
        check(s.fd[t], "FD", t);
    }
    return {bad == 0 && convergent > 0 && s.seconds < 600,
            fmt::format("{}/{} runs convergent, {} contract violations{}, {:.0f} s", convergent, total, bad, first_bad,
                        s.seconds)};
}

Outcome architecture_ordering()
{
    const Suite& s = suite();
    const double fd = mean_rate(s.fd), rs = mean_rate(s.rs), pc = mean_rate(s.pc);
    int wins = 0;
    for (int t = 0; t < suite_seeds; ++t) wins += s.rs[t].sum_rate > s.pc[t].sum_rate;
    const double rate = static_cast<double>(wins) / suite_seeds;
    return {fd >= rs && rs >= pc && rate >= 0.8,
            fmt::format("mean sum-rate FD {:.3f} / RS {:.3f} / PC {:.3f} bit/s/Hz, RS > PC on {}/{} seeds", fd, rs, pc,
                        wins, suite_seeds)};
}

Outcome tradeoff_trend()
{
    const auto t0 = Clock::now();
    ExperimentSpec spec = desk_spec({10, 12, 14, 16, 18, 20});
    spec.archs = {Architecture::RS};
    const ResultsTable table = run_experiment(spec, 1);
    std::vector<double> mean(spec.values.size(), 0.0);
    int infeasible = 0;
    for (const auto& r : table.rows) {
        if (r.infeasible()) ++infeasible;
        else mean[r.sweep_index] += r.sum_rate / spec.trials;
    }
    bool mono = infeasible == 0;
    for (size_t i = 1; i < mean.size(); ++i) mono = mono && mean[i] <= mean[i - 1];
    const bool drop = mean[5] < mean[3];
    const double dt = seconds_since(t0);
    std::string m;
    for (size_t i = 0; i < mean.size(); ++i) m += fmt::format("{}{:.3f}", i ? " / " : "", mean[i]);
    return {mono && drop && dt < 1800,
            fmt::format("mean RS sum-rate at 10..20 dB: {}, {} infeasible, {:.0f} s", m, infeasible, dt)};
}

Outcome convergence_speed()
{
    const Suite& s = suite();
    int fast = 0, runs = 0;
    for (const auto* set : {&s.rs, &s.pc})
        for (const auto& r : *set) {
            if (r.status == SolveStatus::infeasible || r.trace.entries.empty()) continue;
            ++runs;
            const auto& e = r.trace.entries;
            const double last = e.back().sum_rate;
            // first outer iteration after which the rate stays within 1% of its final value
            size_t plateau = e.size();
            for (size_t i = e.size(); i-- > 0;) {
                if (std::abs(e[i].sum_rate - last) > 0.01 * std::abs(last)) break;
                plateau = i + 1;
            }
            fast += plateau <= 15;
        }
    const double rate = runs ? static_cast<double>(fast) / runs : 0.0;
    return {rate >= 0.8, fmt::format("plateau within 15 outer iterations on {}/{} hybrid runs", fast, runs)};
}

Outcome beampattern_suppression()
{
    // Peak must sit within 2.5 degrees of the target, a fifth of the 8-element receive half-power beamwidth.
    ExperimentSpec spec = parse_spec("");
    spec.values = {18.0};
    const double gamma = db_to_linear(18.0);
    const auto grid = beampattern_grid(0.5);
    bool ok = true;
    std::string detail;
    for (int t = 0; t < 5; ++t) {
        const SolveResult r = solve_cell(spec, 0, Architecture::RS, t);
        if (r.status == SolveStatus::infeasible) {
            ok = false;
            detail += fmt::format(" trial {} infeasible;", t);
            continue;
        }
        const bool tight = r.scnr <= gamma * (1 + 2 * spec.solver.margin) * 1.01;
        const auto P = beampattern(stack(r.bf.receive()), stack(r.bf.transmit()), grid, spec.system);
        const auto at = [&](double deg) { return P[static_cast<size_t>(std::lround((deg + 90) / 0.5))]; };
        const size_t peak = static_cast<size_t>(std::max_element(P.begin(), P.end()) - P.begin());
        const double peak_deg = -90 + 0.5 * peak;
        const double side = std::max(at(-30), at(30));
        ok = ok && tight && std::abs(peak_deg) <= 2.5 && side <= -20.0;
        detail += fmt::format(" trial {}: peak {:+.1f} deg, +-30 deg at {:.1f} dB{};", t, peak_deg, side,
                              tight ? "" : " (not SCNR-tight)");
    }
    detail.pop_back();
    return {ok, "RS at 18 dB," + detail};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "detection probability", detection},
        {2, "power accounting", power_accounting},
        {3, "rate / log-det consistency", rate_logdet_consistency},
        {4, "MVDR generalized-eigenvalue oracle", mvdr_oracle},
        {5, "analog map exhaustive oracle", analog_exhaustive},
        {6, "least-squares optimality", least_squares},
        {7, "PC bisection", pc_bisection},
        {8, "solver feasibility and monotonicity", solver_contract},
        {9, "architecture ordering", architecture_ordering},
        {10, "SCNR / rate trade-off trend", tradeoff_trend},
        {11, "convergence speed", convergence_speed},
        {12, "beampattern clutter suppression", beampattern_suppression},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << fmt::format("[{}] criterion {:>2} {}: {}", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail)
                  << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", all.size() - failed, all.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
