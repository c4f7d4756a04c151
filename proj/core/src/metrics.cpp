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

#include "rsdfrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsdfrc {

namespace {

// log det of a Hermitian positive definite matrix.
double logdet_hpd(const cmat& A)
{
    Eigen::LLT<cmat> llt(A);
    if (llt.info() != Eigen::Success) throw std::runtime_error("logdet: matrix is not positive definite");
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        s += std::log(llt.matrixL()(i, i).real());
    return 2.0 * s;
}

}  // namespace

Architecture parse_architecture(std::string_view tag)
{
    if (tag == "RS") return Architecture::RS;
    if (tag == "PC") return Architecture::PC;
    if (tag == "DPC") return Architecture::DPC;
    if (tag == "FC") return Architecture::FC;
    if (tag == "FD") return Architecture::FD;
    throw std::domain_error("unknown architecture tag '" + std::string(tag) + "'");
}

std::string to_string(Architecture arch)
{
    switch (arch) {
    case Architecture::RS: return "RS";
    case Architecture::PC: return "PC";
    case Architecture::DPC: return "DPC";
    case Architecture::FC: return "FC";
    case Architecture::FD: return "FD";
    }
    return "?";
}

std::vector<cmat> split_users(const cmat& X, int K, int d_s)
{
    std::vector<cmat> T;
    T.reserve(K);
    for (int k = 0; k < K; ++k)
        T.push_back(X.middleCols(k * d_s, d_s));
    return T;
}

cmat join_users(const std::vector<cmat>& T)
{
    if (T.empty()) return cmat();
    Eigen::Index cols = 0;
    for (const auto& t : T) cols += t.cols();
    cmat X(T.front().rows(), cols);
    Eigen::Index c = 0;
    for (const auto& t : T) {
        X.middleCols(c, t.cols()) = t;
        c += t.cols();
    }
    return X;
}

cvec stack(const cmat& X)
{
    return Eigen::Map<const cvec>(X.data(), X.size());
}

double sum_rate(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                const SystemConfig& cfg)
{
    double R = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        const cmat& H = ch.H[k];
        cmat Rk = cfg.sigma2_user * U[k].adjoint() * U[k];
        for (int i = 0; i < cfg.K; ++i) {
            if (i == k) continue;
            const cmat B = U[k].adjoint() * H * T[i];
            Rk += B * B.adjoint();
        }
        const cmat S = U[k].adjoint() * H * T[k];
        const cmat A = S * S.adjoint();
        if (A.norm() == 0.0) continue;
        R += (logdet_hpd(Rk + A) - logdet_hpd(Rk)) / std::log(2.0);
    }
    return R;
}

double sum_rate(const ChannelSet& ch, const BeamformerSet& bf, const SystemConfig& cfg)
{
    std::vector<cmat> T;
    for (int k = 0; k < cfg.K; ++k) T.push_back(bf.T_RF * bf.T_D_block(k, cfg.d_s));
    return sum_rate(ch, T, bf.U, cfg);
}

double achievable_rate(const ChannelSet& ch, const std::vector<cmat>& T, const SystemConfig& cfg)
{
    double R = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        const cmat& H = ch.H[k];
        cmat C = cfg.sigma2_user * cmat::Identity(cfg.M_U, cfg.M_U);
        for (int i = 0; i < cfg.K; ++i) {
            if (i == k) continue;
            const cmat B = H * T[i];
            C += B * B.adjoint();
        }
        const cmat S = H * T[k];
        const cmat M = cmat::Identity(S.cols(), S.cols()) + S.adjoint() * C.llt().solve(S);
        R += logdet_hpd(0.5 * (M + M.adjoint())) / std::log(2.0);
    }
    return R;
}

cmat mse_matrix(int k, const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                const SystemConfig& cfg)
{
    if (k < 0 || k >= cfg.K) throw std::out_of_range("mse_matrix: user index out of range");
    const cmat& H = ch.H[k];
    const cmat A = U[k].adjoint() * H * T[k];
    cmat E = cmat::Identity(cfg.d_s, cfg.d_s) - A - A.adjoint() + cfg.sigma2_user * U[k].adjoint() * U[k];
    for (int i = 0; i < cfg.K; ++i) {
        const cmat B = U[k].adjoint() * H * T[i];
        E += B * B.adjoint();
    }
    return E;
}

cmat mse_matrix(int k, const ChannelSet& ch, const BeamformerSet& bf, const SystemConfig& cfg, bool use_aux)
{
    if (use_aux) return mse_matrix(k, ch, bf.T_aux, bf.U, cfg);
    std::vector<cmat> T;
    for (int i = 0; i < cfg.K; ++i) T.push_back(bf.T_RF * bf.T_D_block(i, cfg.d_s));
    return mse_matrix(k, ch, T, bf.U, cfg);
}

cmat clutter_covariance(const cmat& X, const RadarScene& scene, const SystemConfig& cfg)
{
    cmat S = cfg.sigma2_radar * cmat::Identity(cfg.M_R, cfg.M_R);
    for (double th : scene.theta_j) {
        const cmat AX = response_matrix(th, cfg) * X;
        S += scene.sigmaC_sq * AX * AX.adjoint();
    }
    return S;
}

double scnr_full(const cmat& X, const cmat& W, const RadarScene& scene, const SystemConfig& cfg)
{
    if (W.norm() == 0.0) throw std::domain_error("scnr_full: receive beamformer is zero");
    const cmat AX = response_matrix(scene.theta_0, cfg) * X;
    const double num = scene.sigma0_sq * (AX.adjoint() * W).squaredNorm();
    const double den = (W.adjoint() * clutter_covariance(X, scene, cfg) * W).trace().real();
    return num / den;
}

double scnr_full(const BeamformerSet& bf, const RadarScene& scene, const SystemConfig& cfg)
{
    return scnr_full(bf.transmit(), bf.receive(), scene, cfg);
}

double scnr_vectorized(const cvec& t, const cvec& w, const RadarScene& scene, const SystemConfig& cfg)
{
    const int Ns = static_cast<int>(t.size() / cfg.M_T);
    if (t.size() != static_cast<Eigen::Index>(cfg.M_T) * Ns || w.size() != static_cast<Eigen::Index>(cfg.M_R) * Ns)
        throw std::invalid_argument("scnr_vectorized: stacked vector lengths do not match the arrays");
    if (w.norm() == 0.0) throw std::domain_error("scnr_vectorized: receive vector is zero");
    const Eigen::Map<const cmat> X(t.data(), cfg.M_T, Ns);
    auto proj = [&](double th) {
        const cmat AX = response_matrix(th, cfg) * X;
        return w.dot(stack(AX));
    };
    const double num = scene.sigma0_sq * std::norm(proj(scene.theta_0));
    double den = cfg.sigma2_radar * w.squaredNorm();
    for (double th : scene.theta_j) den += scene.sigmaC_sq * std::norm(proj(th));
    return num / den;
}

double max_scnr(const cmat& X, const RadarScene& scene, const SystemConfig& cfg)
{
    const cvec at = steering_vector(scene.theta_0, cfg.M_T, cfg);
    const cvec ar = steering_vector(scene.theta_0, cfg.M_R, cfg);
    const double p0 = (X.transpose() * at).squaredNorm();
    const cmat S = clutter_covariance(X, scene, cfg);
    return scene.sigma0_sq * p0 * ar.dot(S.llt().solve(ar)).real();
}

std::vector<double> beampattern(const cvec& w, const cvec& t, const std::vector<double>& theta_grid,
                                const SystemConfig& cfg)
{
    if (theta_grid.empty()) throw std::invalid_argument("beampattern: empty angle grid");
    const int Ns = static_cast<int>(t.size() / cfg.M_T);
    const Eigen::Map<const cmat> X(t.data(), cfg.M_T, Ns);
    std::vector<double> P(theta_grid.size());
    for (size_t i = 0; i < theta_grid.size(); ++i) {
        const cmat AX = response_matrix(theta_grid[i], cfg) * X;
        P[i] = std::norm(w.dot(stack(AX)));
    }
    const double peak = *std::max_element(P.begin(), P.end());
    for (double& p : P)
        p = peak > 0.0 ? 10.0 * std::log10(std::max(p / peak, 1e-300)) : 0.0;
    return P;
}

double detection_probability(double scnr, double p_fa)
{
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw std::domain_error("detection_probability: p_fa must lie in (0, 1)");
    if (!(scnr >= 0.0)) throw std::domain_error("detection_probability: scnr must be nonnegative");
    return marcum_q1(std::sqrt(2.0 * scnr), std::sqrt(-2.0 * std::log(p_fa)));
}

double total_power(Architecture arch, const SystemConfig& cfg, const PowerModel& pm)
{
    const double base = cfg.P_T + pm.P_BB;
    const double chains = (cfg.N_RF_t + cfg.N_RF_r) * pm.P_RF;
    const double antennas = cfg.M_T + cfg.M_R;
    switch (arch) {
    case Architecture::RS: return base + chains + antennas * (pm.P_PS + pm.P_SW);
    case Architecture::PC: return base + chains + antennas * pm.P_PS;
    case Architecture::DPC: return base + chains + 2.0 * antennas * pm.P_PS;
    case Architecture::FC:
        return base + chains + (cfg.M_T * cfg.N_RF_t + cfg.M_R * cfg.N_RF_r) * pm.P_PS;
    case Architecture::FD: return base + antennas * pm.P_RF;
    }
    throw std::domain_error("total_power: unknown architecture");
}

double energy_efficiency(double rate, Architecture arch, const SystemConfig& cfg, const PowerModel& pm)
{
    if (!(rate >= 0.0)) throw std::domain_error("energy_efficiency: rate must be nonnegative");
    return rate / (cfg.K * total_power(arch, cfg, pm));
}

}  // namespace rsdfrc
