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

#include "rsdfrc/wpdd.hpp"

namespace rsdfrc {

// Fixed wiring: antenna m feeds chain floor(m N / M_total), M = M_total / N antennas per chain.
struct PcStructure {
    int antennas = 0;
    int chains = 0;

    int per_chain() const { return antennas / chains; }
    int chain_of(int m) const { return static_cast<int>(static_cast<long>(m) * chains / antennas); }

    // Throws std::invalid_argument unless chains divides antennas.
    static PcStructure make(int antennas, int chains);
};

// Phase-only update on the fixed blocks; a zero correlation gives phase 0.
cmat pc_update_TRF(const cmat& Z, const cmat& T_D);

struct PcDigitalResult {
    cmat T_D;
    double lambda = 0.0;
    // False when the norm target cannot be met (zero correlation, or no root on the valid interval).
    bool reached = true;
};

// argmin ||Z - T_RF T_D||_F subject to ||T_D||_F^2 = target_norm2, via (Qbar + lambda I)^{-1} Gbar
// with lambda > -lambda_min(Qbar) found by bisection.
PcDigitalResult pc_update_TD(const cmat& T_RF, const cmat& Z, double target_norm2);

// Norm target N_RF_t P_T / M_T, which makes ||T_RF T_D||^2 = P_T on the block structure.
double pc_digital_norm2(const SystemConfig& cfg);

HybridBlocks pc_blocks(const SystemConfig& cfg);

SolveResult pc_solve(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                     const InitOptions& init = {}, const PddParams& params = {});

}  // namespace rsdfrc
