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

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "rsdfrc/conic.hpp"
#include "rsdfrc/metrics.hpp"
#include "rsdfrc/model.hpp"

namespace rsdfrc {

struct PddParams {
    double rho0 = 1.0;
    double c = 0.6;
    double eps_inner = 1e-4;
    double eps_outer = 1e-4;
    int max_inner = 30;
    int max_outer = 100;
    // The SCNR target is enforced as gamma (1 + margin) so the hybrid solution keeps gamma after the
    // small residual mismatch between auxiliary and factorized beamformers.
    double margin = 1e-3;
    int sca_rounds = 10;
    double sca_tol = 1e-5;
    int bootstrap_rounds = 5;
    int fd_max_sweeps = 200;
    double fd_tol = 1e-5;
    SocpSettings socp;
};

struct PddState {
    double rho = 1.0;
    std::vector<cmat> D;
    cmat D_tilde;
    double eta = std::numeric_limits<double>::infinity();
    double c = 0.6;
    double eps_inner = 1e-4;
    double eps_outer = 1e-4;
    int max_inner = 30;

    static PddState initial(const SystemConfig& cfg, const PddParams& params);
};

// sets[n] lists the antennas wired to RF chain n.
struct SubarrayMap {
    std::vector<std::vector<int>> sets;
};

struct AnalogUpdate {
    cmat RF;
    SubarrayMap map;
    int empty_chains = 0;
};

// MVDR receiver on stacked vectors; maximizes the stacked SCNR over w for fixed t.
cvec update_W(const cvec& t, const RadarScene& scene, const SystemConfig& cfg);

// SCNR-optimal receiver of the trace form, v 1^T / sqrt(N_s) with v = Sigma_cn^{-1} a_r(theta_0).
cmat optimal_receiver(const cmat& X, const RadarScene& scene, const SystemConfig& cfg);

// Phi = sigma_0^2 A(theta_0)^H Sigma_cn^{-1} A(theta_0), with Sigma_cn built from X_prev.
cmat phi_matrix(const cmat& X_prev, const RadarScene& scene, const SystemConfig& cfg);

// Radar constraint on the stacked transmit matrix X:
//   tr(X^H Psi X) - tr(X^H Xi X) >= bound,  Psi and Xi Hermitian PSD.
// The Psi term is linearized around the current point (a global lower bound), the Xi term stays exact.
struct RadarQuadratic {
    cmat Psi;
    cmat Xi;
    double bound = 0.0;

    double slack(const cmat& X) const;
};

RadarQuadratic phi_constraint(const cmat& Phi, double gamma);

// Trace-form SCNR(X, W) >= gamma rewritten for a fixed receiver W; exact in X.
RadarQuadratic receiver_constraint(const cmat& W, double gamma, const RadarScene& scene, const SystemConfig& cfg);

// Penalty (1 / 2 rho) sum_k ||T_k - anchor_k||^2 attached to the transmit block.
struct TransmitPenalty {
    double rho = 1.0;
    std::vector<cmat> anchor;
};

struct TkResult {
    std::vector<cmat> T;
    SocpStatus status = SocpStatus::optimal;
    bool infeasible = false;
    int rounds = 0;
    double objective = 0.0;
};

// Part of the augmented objective that depends on the transmit blocks.
double transmit_objective(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                          const std::vector<cmat>& G, const TransmitPenalty* penalty, const SystemConfig& cfg);

// Successive convex approximation of the transmit subproblem; each round is one SOCP. A round is
// accepted only when it does not raise transmit_objective, so the block never increases it.
TkResult update_Tk(const ChannelSet& ch, const std::vector<cmat>& T_prev, const std::vector<cmat>& U,
                   const std::vector<cmat>& G, const RadarQuadratic& radar, const TransmitPenalty* penalty,
                   const SystemConfig& cfg, const PddParams& params);

std::vector<cmat> update_U(const ChannelSet& ch, const std::vector<cmat>& T, const SystemConfig& cfg);
std::vector<cmat> update_G(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                           const SystemConfig& cfg);

// Row-wise exact minimizer of ||Z - RF * D||_F over one-nonzero-per-row unit-modulus RF.
AnalogUpdate update_TRF(const cmat& Z, const cmat& T_D);
AnalogUpdate update_WRF(const cmat& Q, const cmat& W_D);

// Least squares pinv(RF) Z; uses the per-subarray closed form when RF has the subarray structure.
cmat update_TD(const cmat& T_RF, const cmat& Z);
cmat update_WD(const cmat& W_RF, const cmat& Q);

// Dense pseudo-inverse solution, independent of any structure.
cmat least_squares_dense(const cmat& RF, const cmat& Z);
// Closed form for one-nonzero-per-row RF: row n = sum over the subarray of conj(RF(m, n)) Z(m, :) / |RF(:, n)|^2.
cmat least_squares_subarray(const cmat& RF, const cmat& Z);

double violation(const std::vector<cmat>& T_aux, const cmat& T_RF, const cmat& T_D, const cmat& W_aux,
                 const cmat& W_RF, const cmat& W_D, int d_s);

void outer_update(PddState& state, double h, const std::vector<cmat>& T_aux, const cmat& T_RF, const cmat& T_D,
                  const cmat& W_aux, const cmat& W_RF, const cmat& W_D, int d_s);

// Euclidean projection of Q0 onto {W : SCNR(X, W) >= gamma}.
cmat project_receiver(const cmat& Q0, const cmat& X, double gamma, const RadarScene& scene, const SystemConfig& cfg);

// Augmented objective: sum_k tr(G_k E_k) - log det G_k plus both penalty terms when `state` is given.
double augmented_objective(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                           const std::vector<cmat>& G, const cmat& T_RF, const cmat& T_D, const cmat& W,
                           const cmat& W_RF, const cmat& W_D, const PddState* state, const SystemConfig& cfg);

enum class SolveStatus { converged, max_outer, infeasible };
std::string to_string(SolveStatus s);

struct TraceEntry {
    int outer = 0;
    int inner_sweeps = 0;
    double objective = 0.0;
    double h = 0.0;
    double rho = 0.0;
    double scnr = 0.0;
    double sum_rate = 0.0;
};

struct SolveTrace {
    std::vector<TraceEntry> entries;
    // Objective at the start of each outer iteration followed by its value after every inner sweep.
    std::vector<std::vector<double>> sweep_objectives;
};

struct SolveResult {
    BeamformerSet bf;
    SolveTrace trace;
    SolveStatus status = SolveStatus::max_outer;
    double sum_rate = 0.0;
    double scnr = 0.0;
    double h = 0.0;
    double transmit_power = 0.0;
    int outer_iterations = 0;
    int bootstrap_rounds = 0;
    int empty_subarray_events = 0;
};

struct InitOptions {
    std::uint64_t seed = 0;
};

// The four architecture-specific blocks of the inner sweep, plus the initial analog network.
struct HybridBlocks {
    std::function<AnalogUpdate(const cmat& Z, const cmat& T_D)> tx_analog;
    std::function<cmat(const cmat& T_RF, const cmat& Z)> tx_digital;
    std::function<AnalogUpdate(const cmat& Q, const cmat& W_D)> rx_analog;
    std::function<cmat(const cmat& W_RF, const cmat& Q)> rx_digital;
    std::function<cmat(int M, int N, std::mt19937_64& rng)> initial_analog;
};

// Unit-modulus random phases on contiguous antenna blocks, antenna m on chain floor(m N / M).
cmat block_analog(int M, int N, std::mt19937_64& rng);

HybridBlocks rs_blocks();

SolveResult solve_hybrid(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                         const HybridBlocks& blocks, const InitOptions& init, const PddParams& params);
SolveResult solve_fully_digital(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene,
                                double gamma, const InitOptions& init, const PddParams& params);

// arch must be RS or FD; the PC variant lives in pc_variant.hpp.
SolveResult solve(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                  Architecture arch, const InitOptions& init = {}, const PddParams& params = {});

}  // namespace rsdfrc
