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

#include "rsdfrc/pc_variant.hpp"

#include <cmath>
#include <stdexcept>

namespace rsdfrc {

PcStructure PcStructure::make(int antennas, int chains)
{
    if (chains < 1 || antennas < chains || antennas % chains != 0)
        throw std::invalid_argument("PC structure needs the chain count to divide the antenna count");
    return PcStructure{antennas, chains};
}

cmat pc_update_TRF(const cmat& Z, const cmat& T_D)
{
    const PcStructure pcs = PcStructure::make(static_cast<int>(Z.rows()), static_cast<int>(T_D.rows()));
    cmat RF = cmat::Zero(Z.rows(), T_D.rows());
    for (int m = 0; m < pcs.antennas; ++m) {
        const int n = pcs.chain_of(m);
        const cplx z = (Z.row(m) * T_D.row(n).adjoint())(0, 0);
        RF(m, n) = std::polar(1.0, std::abs(z) > 0 ? std::arg(z) : 0.0);
    }
    return RF;
}

PcDigitalResult pc_update_TD(const cmat& T_RF, const cmat& Z, double target_norm2)
{
    if (!(target_norm2 > 0)) throw std::invalid_argument("pc_update_TD: norm target must be positive");
    const cmat Qb = T_RF.adjoint() * T_RF;
    const cmat Gb = T_RF.adjoint() * Z;
    PcDigitalResult out;
    if (Gb.norm() == 0.0) {
        out.T_D = cmat::Zero(T_RF.cols(), Z.cols());
        out.reached = false;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (Qb + Qb.adjoint()));
    const rvec& ev = es.eigenvalues();
    const cmat Gh = es.eigenvectors().adjoint() * Gb;
    const rvec g2 = Gh.rowwise().squaredNorm();
    auto norm2 = [&](double lam) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) s += g2(i) / ((ev(i) + lam) * (ev(i) + lam));
        return s;
    };

    const double emin = ev.minCoeff();
    double lo = -emin + 1e-12 * std::max(1.0, std::abs(emin));
    double hi = std::max(1.0, std::abs(lo));
    while (norm2(hi) > target_norm2) hi *= 2.0;
    if (norm2(lo) < target_norm2) {
        out.reached = false;
        hi = lo;
    }
    for (int it = 0; it < 300 && out.reached; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (norm2(mid) > target_norm2) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    const double lam = 0.5 * (lo + hi);
    cmat Dh = Gh;
    for (Eigen::Index i = 0; i < ev.size(); ++i) Dh.row(i) /= (ev(i) + lam);
    out.T_D = es.eigenvectors() * Dh;
    out.lambda = lam;
    return out;
}

double pc_digital_norm2(const SystemConfig& cfg)
{
    return static_cast<double>(cfg.N_RF_t) * cfg.P_T / cfg.M_T;
}

HybridBlocks pc_blocks(const SystemConfig& cfg)
{
    PcStructure::make(cfg.M_T, cfg.N_RF_t);
    PcStructure::make(cfg.M_R, cfg.N_RF_r);
    const double target = pc_digital_norm2(cfg);
    HybridBlocks b;
    b.tx_analog = [](const cmat& Z, const cmat& T_D) {
        AnalogUpdate a;
        a.RF = pc_update_TRF(Z, T_D);
        return a;
    };
    b.tx_digital = [target](const cmat& T_RF, const cmat& Z) { return pc_update_TD(T_RF, Z, target).T_D; };
    b.rx_analog = b.tx_analog;
    b.rx_digital = update_WD;
    b.initial_analog = block_analog;
    return b;
}

SolveResult pc_solve(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                     const InitOptions& init, const PddParams& params)
{
    if (!(gamma >= 0)) throw std::invalid_argument("pc_solve: gamma must be nonnegative");
    return solve_hybrid(cfg, ch, scene, gamma, pc_blocks(cfg), init, params);
}

}  // namespace rsdfrc
