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

#include "rsdfrc/wpdd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsdfrc {

namespace {

// Rows F with F^H F = P for a Hermitian PSD P; eigenvalues below a relative floor are dropped.
cmat psd_factor(const cmat& P)
{
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (P + P.adjoint()));
    const rvec& ev = es.eigenvalues();
    const double top = std::max(0.0, ev.maxCoeff());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 1e-14 * top && ev(i) > 0) keep.push_back(i);
    cmat F(keep.size(), P.cols());
    for (size_t r = 0; r < keep.size(); ++r)
        F.row(r) = std::sqrt(ev(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
    return F;
}

double logdet_hpd(const cmat& A)
{
    Eigen::LLT<cmat> llt(0.5 * (A + A.adjoint()));
    if (llt.info() != Eigen::Success) throw std::runtime_error("log det of a matrix that is not positive definite");
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) s += std::log(llt.matrixL()(i, i).real());
    return 2.0 * s;
}

// Real block-diagonal lift of `F` repeated over `ns` stacked columns.
rmat lifted_blockdiag(const cmat& F, int ns, Eigen::Index total_cols)
{
    const rmat Fl = lift(F);
    rmat R = rmat::Zero(Fl.rows() * ns, total_cols);
    for (int s = 0; s < ns; ++s) R.block(s * Fl.rows(), s * Fl.cols(), Fl.rows(), Fl.cols()) = Fl;
    return R;
}

bool has_subarray_structure(const cmat& RF)
{
    for (Eigen::Index m = 0; m < RF.rows(); ++m) {
        int nz = 0;
        for (Eigen::Index n = 0; n < RF.cols(); ++n)
            if (RF(m, n) != cplx(0.0, 0.0)) ++nz;
        if (nz > 1) return false;
    }
    return true;
}

}  // namespace

PddState PddState::initial(const SystemConfig& cfg, const PddParams& params)
{
    PddState s;
    s.rho = params.rho0;
    s.D.assign(cfg.K, cmat::Zero(cfg.M_T, cfg.d_s));
    s.D_tilde = cmat::Zero(cfg.M_R, cfg.N_s());
    s.eta = std::numeric_limits<double>::infinity();
    s.c = params.c;
    s.eps_inner = params.eps_inner;
    s.eps_outer = params.eps_outer;
    s.max_inner = params.max_inner;
    return s;
}

cvec update_W(const cvec& t, const RadarScene& scene, const SystemConfig& cfg)
{
    if (t.norm() == 0.0) throw std::domain_error("update_W: transmit vector is zero");
    const int Ns = static_cast<int>(t.size() / cfg.M_T);
    const Eigen::Map<const cmat> X(t.data(), cfg.M_T, Ns);
    const Eigen::Index n = static_cast<Eigen::Index>(cfg.M_R) * Ns;
    cmat S = cfg.sigma2_radar * cmat::Identity(n, n);
    for (double th : scene.theta_j) {
        const cvec v = stack(response_matrix(th, cfg) * X);
        S += scene.sigmaC_sq * v * v.adjoint();
    }
    const cvec a0 = stack(response_matrix(scene.theta_0, cfg) * X);
    const cvec Sa = S.llt().solve(a0);
    return Sa / a0.dot(Sa).real();
}

cmat optimal_receiver(const cmat& X, const RadarScene& scene, const SystemConfig& cfg)
{
    const cvec ar = steering_vector(scene.theta_0, cfg.M_R, cfg);
    const cvec v = clutter_covariance(X, scene, cfg).llt().solve(ar);
    const int Ns = static_cast<int>(X.cols());
    return v * Eigen::RowVectorXcd::Ones(Ns) / std::sqrt(static_cast<double>(Ns));
}

cmat phi_matrix(const cmat& X_prev, const RadarScene& scene, const SystemConfig& cfg)
{
    const cmat A0 = response_matrix(scene.theta_0, cfg);
    const cmat Phi = scene.sigma0_sq * A0.adjoint() * clutter_covariance(X_prev, scene, cfg).llt().solve(A0);
    return 0.5 * (Phi + Phi.adjoint());
}

double RadarQuadratic::slack(const cmat& X) const
{
    return (X.adjoint() * Psi * X).trace().real() - (X.adjoint() * Xi * X).trace().real() - bound;
}

RadarQuadratic phi_constraint(const cmat& Phi, double gamma)
{
    RadarQuadratic r;
    r.Psi = Phi;
    r.Xi = cmat::Zero(Phi.rows(), Phi.cols());
    r.bound = gamma;
    return r;
}

RadarQuadratic receiver_constraint(const cmat& W, double gamma, const RadarScene& scene, const SystemConfig& cfg)
{
    RadarQuadratic r;
    const cvec at0 = steering_vector(scene.theta_0, cfg.M_T, cfg);
    const double b0 = (W.adjoint() * steering_vector(scene.theta_0, cfg.M_R, cfg)).squaredNorm();
    r.Psi = scene.sigma0_sq * b0 * at0.conjugate() * at0.transpose();
    r.Xi = cmat::Zero(cfg.M_T, cfg.M_T);
    for (double th : scene.theta_j) {
        const cvec at = steering_vector(th, cfg.M_T, cfg);
        const double bj = (W.adjoint() * steering_vector(th, cfg.M_R, cfg)).squaredNorm();
        r.Xi += gamma * scene.sigmaC_sq * bj * at.conjugate() * at.transpose();
    }
    r.bound = gamma * cfg.sigma2_radar * W.squaredNorm();
    return r;
}

double transmit_objective(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                          const std::vector<cmat>& G, const TransmitPenalty* penalty, const SystemConfig& cfg)
{
    double f = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        f += (G[k] * mse_matrix(k, ch, T, U, cfg)).trace().real();
        if (penalty) f += (T[k] - penalty->anchor[k]).squaredNorm() / (2.0 * penalty->rho);
    }
    return f;
}

TkResult update_Tk(const ChannelSet& ch, const std::vector<cmat>& T_prev, const std::vector<cmat>& U,
                   const std::vector<cmat>& G, const RadarQuadratic& radar, const TransmitPenalty* penalty,
                   const SystemConfig& cfg, const PddParams& params)
{
    const int K = cfg.K, ds = cfg.d_s, Ns = cfg.N_s(), MT = cfg.M_T;
    const double sp = std::sqrt(cfg.P_T);

    // sum_s x_s^H P x_s - 2 Re sum_s b_s^H x_s over the columns of X = [T_1 ... T_K].
    cmat P = cmat::Zero(MT, MT);
    cmat B(MT, Ns);
    for (int k = 0; k < K; ++k) {
        const cmat HU = ch.H[k].adjoint() * U[k];
        const cmat Gh = 0.5 * (G[k] + G[k].adjoint());
        P += HU * Gh * HU.adjoint();
        B.middleCols(k * ds, ds) = HU * Gh;
        if (penalty) B.middleCols(k * ds, ds) += penalty->anchor[k] / (2.0 * penalty->rho);
    }
    if (penalty) P += cmat::Identity(MT, MT) / (2.0 * penalty->rho);

    const Eigen::Index nx = 2 * static_cast<Eigen::Index>(MT) * Ns;
    const Eigen::Index n = nx + 1;
    rvec et = rvec::Zero(n);
    et(nx) = 1.0;

    SocpProblem base;
    base.c = rvec::Zero(n);
    base.c.head(nx) = -2.0 * sp * lift(stack(B));
    base.c(nx) = 1.0;
    {
        const rmat R = sp * lifted_blockdiag(psd_factor(P), Ns, n);
        base.cones.push_back(rotated_cone(R, rvec::Zero(R.rows()), et, 0.0, rvec::Zero(n), 1.0));
        SocConstraint power;
        power.F = rmat::Zero(nx, n);
        power.F.leftCols(nx).setIdentity();
        power.g = rvec::Zero(nx);
        power.f = rvec::Zero(n);
        power.e = 1.0;
        base.cones.push_back(std::move(power));
    }
    const cmat Fxi = psd_factor(radar.Xi);
    const rmat Rxi = Fxi.rows() > 0 ? rmat(sp * lifted_blockdiag(Fxi, Ns, n)) : rmat(0, n);

    TkResult res;
    res.T = T_prev;
    cmat Xb = join_users(T_prev);
    double fb = transmit_objective(ch, res.T, U, G, penalty, cfg);
    bool feasible = radar.slack(Xb) >= 0.0 && Xb.squaredNorm() <= cfg.P_T * (1.0 + 1e-9);

    for (int round = 0; round < params.sca_rounds; ++round) {
        SocpProblem p = base;
        rvec l = rvec::Zero(n);
        l.head(nx) = 2.0 * sp * lift(stack(radar.Psi * Xb));
        const double c0 = (Xb.adjoint() * radar.Psi * Xb).trace().real() + radar.bound;
        if (Rxi.rows() > 0) {
            p.cones.push_back(rotated_cone(Rxi, rvec::Zero(Rxi.rows()), l, -c0, rvec::Zero(n), 1.0));
        } else {
            p.G_lin = -l.transpose();
            p.h_lin = rvec::Constant(1, -c0);
        }
        const SocpSolution sol = solve_socp(p, params.socp);
        res.status = sol.status;
        if (sol.status != SocpStatus::optimal) {
            if (round == 0 && sol.status == SocpStatus::infeasible) res.infeasible = true;
            break;
        }
        const cvec xs = sp * unlift(sol.x.head(nx));
        const cmat Xn = Eigen::Map<const cmat>(xs.data(), MT, Ns);
        const std::vector<cmat> Tn = split_users(Xn, K, ds);
        const double fn = transmit_objective(ch, Tn, U, G, penalty, cfg);
        if (feasible && fn > fb) break;
        const double rel = std::abs(fb - fn) / std::max(std::abs(fb), 1e-300);
        res.T = Tn;
        Xb = Xn;
        fb = fn;
        feasible = true;
        ++res.rounds;
        if (rel <= params.sca_tol) break;
    }
    res.objective = fb;
    return res;
}

std::vector<cmat> update_U(const ChannelSet& ch, const std::vector<cmat>& T, const SystemConfig& cfg)
{
    std::vector<cmat> U(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        const cmat& H = ch.H[k];
        cmat C = cfg.sigma2_user * cmat::Identity(cfg.M_U, cfg.M_U);
        for (int i = 0; i < cfg.K; ++i) {
            const cmat B = H * T[i];
            C += B * B.adjoint();
        }
        U[k] = C.llt().solve(H * T[k]);
    }
    return U;
}

std::vector<cmat> update_G(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                           const SystemConfig& cfg)
{
    std::vector<cmat> G(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        const cmat E = cmat::Identity(cfg.d_s, cfg.d_s) - U[k].adjoint() * ch.H[k] * T[k];
        Eigen::FullPivLU<cmat> lu(E);
        if (!lu.isInvertible()) throw std::runtime_error("update_G: MSE matrix is singular");
        const cmat Gk = lu.inverse();
        G[k] = 0.5 * (Gk + Gk.adjoint());
    }
    return G;
}

AnalogUpdate update_TRF(const cmat& Z, const cmat& T_D)
{
    const Eigen::Index M = Z.rows(), N = T_D.rows();
    const cmat C = Z * T_D.adjoint();
    const rvec dn = T_D.rowwise().squaredNorm();
    AnalogUpdate out;
    out.RF = cmat::Zero(M, N);
    out.map.sets.assign(N, {});
    std::vector<Eigen::Index> deferred;
    for (Eigen::Index m = 0; m < M; ++m) {
        if (Z.row(m).squaredNorm() == 0.0) {
            deferred.push_back(m);
            continue;
        }
        Eigen::Index best = 0;
        double score = 2.0 * std::abs(C(m, 0)) - dn(0);
        for (Eigen::Index n = 1; n < N; ++n) {
            const double sc = 2.0 * std::abs(C(m, n)) - dn(n);
            if (sc > score) {
                score = sc;
                best = n;
            }
        }
        const double ph = std::abs(C(m, best)) > 0 ? std::arg(C(m, best)) : 0.0;
        out.RF(m, best) = std::polar(1.0, ph);
        out.map.sets[best].push_back(static_cast<int>(m));
    }
    // A zero row only sees -||T_D(n,:)||^2; among the chains that minimize it, fill the smallest subarray.
    const double dmin = N > 0 ? dn.minCoeff() : 0.0;
    for (Eigen::Index m : deferred) {
        Eigen::Index best = -1;
        for (Eigen::Index n = 0; n < N; ++n) {
            if (dn(n) > dmin) continue;
            if (best < 0 || out.map.sets[n].size() < out.map.sets[best].size()) best = n;
        }
        out.RF(m, best) = 1.0;
        out.map.sets[best].push_back(static_cast<int>(m));
    }
    for (auto& s : out.map.sets) {
        std::sort(s.begin(), s.end());
        if (s.empty()) ++out.empty_chains;
    }
    return out;
}

AnalogUpdate update_WRF(const cmat& Q, const cmat& W_D) { return update_TRF(Q, W_D); }

cmat least_squares_dense(const cmat& RF, const cmat& Z)
{
    return Eigen::CompleteOrthogonalDecomposition<cmat>(RF).pseudoInverse() * Z;
}

cmat least_squares_subarray(const cmat& RF, const cmat& Z)
{
    cmat D = cmat::Zero(RF.cols(), Z.cols());
    for (Eigen::Index n = 0; n < RF.cols(); ++n) {
        const double nn = RF.col(n).squaredNorm();
        if (nn > 0) D.row(n) = RF.col(n).adjoint() * Z / nn;
    }
    return D;
}

cmat update_TD(const cmat& T_RF, const cmat& Z)
{
    return has_subarray_structure(T_RF) ? least_squares_subarray(T_RF, Z) : least_squares_dense(T_RF, Z);
}

cmat update_WD(const cmat& W_RF, const cmat& Q) { return update_TD(W_RF, Q); }

double violation(const std::vector<cmat>& T_aux, const cmat& T_RF, const cmat& T_D, const cmat& W_aux,
                 const cmat& W_RF, const cmat& W_D, int d_s)
{
    double h = (W_aux - W_RF * W_D).norm();
    for (size_t k = 0; k < T_aux.size(); ++k)
        h = std::max(h, (T_aux[k] - T_RF * T_D.middleCols(k * d_s, d_s)).norm());
    return h;
}

void outer_update(PddState& state, double h, const std::vector<cmat>& T_aux, const cmat& T_RF, const cmat& T_D,
                  const cmat& W_aux, const cmat& W_RF, const cmat& W_D, int d_s)
{
    if (h <= state.eta) {
        for (size_t k = 0; k < T_aux.size(); ++k)
            state.D[k] += (T_aux[k] - T_RF * T_D.middleCols(k * d_s, d_s)) / state.rho;
        state.D_tilde += (W_aux - W_RF * W_D) / state.rho;
    } else {
        state.rho *= state.c;
    }
    state.eta = 0.8 * h;
}

cmat project_receiver(const cmat& Q0, const cmat& X, double gamma, const RadarScene& scene, const SystemConfig& cfg)
{
    const cvec ar = steering_vector(scene.theta_0, cfg.M_R, cfg);
    const double p0 = (X.transpose() * steering_vector(scene.theta_0, cfg.M_T, cfg)).squaredNorm();
    cmat M = scene.sigma0_sq * p0 * ar * ar.adjoint() - gamma * clutter_covariance(X, scene, cfg);
    M = 0.5 * (M + M.adjoint());
    auto value = [&](const cmat& W) { return (W.adjoint() * M * W).trace().real(); };
    if (Q0.norm() > 0 && value(Q0) >= 0.0) return Q0;

    Eigen::SelfAdjointEigenSolver<cmat> es(M);
    const rvec& ev = es.eigenvalues();
    const cmat& V = es.eigenvectors();
    const Eigen::Index top = ev.size() - 1;
    const double emax = ev(top);
    if (!(emax > 0)) throw std::domain_error("project_receiver: SCNR target unreachable for this transmit matrix");

    const cmat Qh = V.adjoint() * Q0;
    const rvec q2 = Qh.rowwise().squaredNorm();
    auto g = [&](double mu) {
        double v = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) v += ev(i) * q2(i) / ((1.0 - mu * ev(i)) * (1.0 - mu * ev(i)));
        return v;
    };
    auto W_of = [&](double mu) {
        cmat Wh = Qh;
        for (Eigen::Index i = 0; i < ev.size(); ++i) Wh.row(i) /= (1.0 - mu * ev(i));
        return cmat(V * Wh);
    };

    double lo = 0.0, hi = (1.0 - 1e-15) / emax;
    if (g(hi) < 0.0) {
        // Q0 has (almost) no energy on the top eigenvector: complete the boundary point along it.
        cmat Wh = Qh;
        Wh.row(top).setZero();
        for (Eigen::Index i = 0; i < top; ++i) Wh.row(i) /= (1.0 - ev(i) / emax);
        double rest = 0.0;
        for (Eigen::Index i = 0; i < top; ++i) rest += ev(i) * Wh.row(i).squaredNorm();
        const double alpha = std::sqrt(std::max(0.0, -rest / emax)) * (1.0 + 1e-12);
        Wh(top, 0) = alpha;
        return V * Wh;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return W_of(hi);
}

double augmented_objective(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                           const std::vector<cmat>& G, const cmat& T_RF, const cmat& T_D, const cmat& W,
                           const cmat& W_RF, const cmat& W_D, const PddState* state, const SystemConfig& cfg)
{
    double f = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        f += (G[k] * mse_matrix(k, ch, T, U, cfg)).trace().real() - logdet_hpd(G[k]);
        if (state)
            f += (T[k] - T_RF * T_D.middleCols(k * cfg.d_s, cfg.d_s) + state->rho * state->D[k]).squaredNorm() /
                 (2.0 * state->rho);
    }
    if (state) f += (W - W_RF * W_D + state->rho * state->D_tilde).squaredNorm() / (2.0 * state->rho);
    return f;
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_outer: return "max_outer";
    case SolveStatus::infeasible: return "infeasible";
    }
    return "?";
}

cmat block_analog(int M, int N, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    cmat RF = cmat::Zero(M, N);
    for (int m = 0; m < M; ++m) RF(m, static_cast<Eigen::Index>(m) * N / M) = std::polar(1.0, phase(rng));
    return RF;
}

HybridBlocks rs_blocks()
{
    HybridBlocks b;
    b.tx_analog = update_TRF;
    b.tx_digital = update_TD;
    b.rx_analog = update_WRF;
    b.rx_digital = update_WD;
    b.initial_analog = block_analog;
    return b;
}

namespace {

// Dominant right singular vectors of each user channel, d_s per user, scaled to total power P_T.
cmat matched_target(const SystemConfig& cfg, const ChannelSet& ch)
{
    cmat X(cfg.M_T, cfg.N_s());
    for (int k = 0; k < cfg.K; ++k) {
        Eigen::JacobiSVD<cmat> svd(ch.H[k], Eigen::ComputeFullV);
        X.middleCols(k * cfg.d_s, cfg.d_s) = svd.matrixV().leftCols(cfg.d_s);
    }
    return X * std::sqrt(cfg.P_T) / X.norm();
}

// SCA on the SCNR surplus with the optimal receiver, inside the power ball.
int bootstrap(cmat& X, double gamma, const RadarScene& scene, const SystemConfig& cfg, const PddParams& params)
{
    const int Ns = cfg.N_s(), MT = cfg.M_T;
    const double sp = std::sqrt(cfg.P_T);
    const Eigen::Index nx = 2 * static_cast<Eigen::Index>(MT) * Ns, n = nx + 1;
    int rounds = 0;
    for (; rounds < params.bootstrap_rounds; ++rounds) {
        if (max_scnr(X, scene, cfg) >= gamma * (1.0 + 1e-6)) break;
        const RadarQuadratic rq = receiver_constraint(optimal_receiver(X, scene, cfg), gamma, scene, cfg);
        SocpProblem p;
        p.c = rvec::Zero(n);
        p.c.head(nx) = -2.0 * sp * lift(stack(rq.Psi * X));
        p.c(nx) = 1.0;
        rvec et = rvec::Zero(n);
        et(nx) = 1.0;
        const cmat F = psd_factor(rq.Xi);
        const rmat R = F.rows() > 0 ? rmat(sp * lifted_blockdiag(F, Ns, n)) : rmat::Zero(1, n);
        p.cones.push_back(rotated_cone(R, rvec::Zero(R.rows()), et, 0.0, rvec::Zero(n), 1.0));
        SocConstraint power;
        power.F = rmat::Zero(nx, n);
        power.F.leftCols(nx).setIdentity();
        power.g = rvec::Zero(nx);
        power.f = rvec::Zero(n);
        power.e = 1.0;
        p.cones.push_back(std::move(power));
        const SocpSolution sol = solve_socp(p, params.socp);
        if (sol.status != SocpStatus::optimal) break;
        const cvec xs = sp * unlift(sol.x.head(nx));
        X = Eigen::Map<const cmat>(xs.data(), MT, Ns);
    }
    return rounds;
}

}  // namespace

SolveResult solve_hybrid(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                         const HybridBlocks& blocks, const InitOptions& init, const PddParams& params)
{
    cfg.validate();
    scene.validate();
    const int K = cfg.K, ds = cfg.d_s;
    const double gt = gamma * (1.0 + params.margin);
    std::mt19937_64 rng(mix_seed(init.seed, 0x1a17ULL));

    SolveResult res;
    BeamformerSet& bf = res.bf;
    bf.T_RF = blocks.initial_analog(cfg.M_T, cfg.N_RF_t, rng);
    bf.W_RF = blocks.initial_analog(cfg.M_R, cfg.N_RF_r, rng);

    cmat X = matched_target(cfg, ch);
    bf.T_D = blocks.tx_digital(bf.T_RF, X);
    X = bf.T_RF * bf.T_D;
    X *= std::sqrt(cfg.P_T) / X.norm();
    bf.T_D *= std::sqrt(cfg.P_T) / (bf.T_RF * bf.T_D).norm();
    if (max_scnr(X, scene, cfg) < gt) {
        res.bootstrap_rounds = bootstrap(X, gt, scene, cfg, params);
        if (max_scnr(X, scene, cfg) < gt) {
            res.status = SolveStatus::infeasible;
            return res;
        }
        bf.T_D = blocks.tx_digital(bf.T_RF, X);
    }
    bf.T_aux = split_users(X, K, ds);
    bf.W_aux = optimal_receiver(X, scene, cfg);
    bf.W_D = blocks.rx_digital(bf.W_RF, bf.W_aux);
    bf.U = update_U(ch, bf.T_aux, cfg);
    std::vector<cmat> G = update_G(ch, bf.T_aux, bf.U, cfg);

    PddState st = PddState::initial(cfg, params);
    auto objective = [&]() {
        return augmented_objective(ch, bf.T_aux, bf.U, G, bf.T_RF, bf.T_D, bf.W_aux, bf.W_RF, bf.W_D, &st, cfg);
    };

    for (int outer = 0; outer < params.max_outer; ++outer) {
        std::vector<double> sweeps{objective()};
        int inner = 0;
        for (; inner < st.max_inner; ++inner) {
            const double f0 = sweeps.back();

            const cmat Q0 = bf.W_RF * bf.W_D - st.rho * st.D_tilde;
            const cmat Xa = join_users(bf.T_aux);
            const cmat Wn = project_receiver(Q0, Xa, gt, scene, cfg);
            if (!(scnr_full(Xa, bf.W_aux, scene, cfg) >= gt && (bf.W_aux - Q0).norm() <= (Wn - Q0).norm()))
                bf.W_aux = Wn;

            TransmitPenalty pen;
            pen.rho = st.rho;
            for (int k = 0; k < K; ++k) pen.anchor.push_back(bf.T_RF * bf.T_D.middleCols(k * ds, ds) - st.rho * st.D[k]);
            const TkResult tk = update_Tk(ch, bf.T_aux, bf.U, G, receiver_constraint(bf.W_aux, gt, scene, cfg), &pen,
                                          cfg, params);
            bf.T_aux = tk.T;
            bf.U = update_U(ch, bf.T_aux, cfg);
            G = update_G(ch, bf.T_aux, bf.U, cfg);

            cmat Z(cfg.M_T, cfg.N_s());
            for (int k = 0; k < K; ++k) Z.middleCols(k * ds, ds) = bf.T_aux[k] + st.rho * st.D[k];
            const cmat Q = bf.W_aux + st.rho * st.D_tilde;
            AnalogUpdate ta = blocks.tx_analog(Z, bf.T_D);
            AnalogUpdate ra = blocks.rx_analog(Q, bf.W_D);
            res.empty_subarray_events += ta.empty_chains + ra.empty_chains;
            bf.T_RF = std::move(ta.RF);
            bf.W_RF = std::move(ra.RF);
            bf.T_D = blocks.tx_digital(bf.T_RF, Z);
            bf.W_D = blocks.rx_digital(bf.W_RF, Q);

            const double f1 = objective();
            sweeps.push_back(f1);
            if (std::abs(f1 - f0) <= st.eps_inner * std::abs(f0)) {
                ++inner;
                break;
            }
        }
        const double h = violation(bf.T_aux, bf.T_RF, bf.T_D, bf.W_aux, bf.W_RF, bf.W_D, ds);
        const cmat Xh = bf.T_RF * bf.T_D;
        TraceEntry e;
        e.outer = outer;
        e.inner_sweeps = inner;
        e.objective = sweeps.back();
        e.h = h;
        e.rho = st.rho;
        e.scnr = scnr_full(Xh, bf.W_RF * bf.W_D, scene, cfg);
        e.sum_rate = achievable_rate(ch, split_users(Xh, K, ds), cfg);
        res.trace.entries.push_back(e);
        res.trace.sweep_objectives.push_back(std::move(sweeps));
        res.outer_iterations = outer + 1;
        res.h = h;
        if (h < st.eps_outer) {
            res.status = SolveStatus::converged;
            break;
        }
        outer_update(st, h, bf.T_aux, bf.T_RF, bf.T_D, bf.W_aux, bf.W_RF, bf.W_D, ds);
    }

    const double pw = (bf.T_RF * bf.T_D).squaredNorm();
    if (pw > cfg.P_T) bf.T_D *= std::sqrt(cfg.P_T / pw);
    const cmat Xh = bf.T_RF * bf.T_D;
    bf.U = update_U(ch, split_users(Xh, K, ds), cfg);
    res.transmit_power = Xh.squaredNorm();
    res.sum_rate = sum_rate(ch, bf, cfg);
    res.scnr = scnr_full(bf, scene, cfg);
    return res;
}

SolveResult solve_fully_digital(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene,
                                double gamma, const InitOptions&, const PddParams& params)
{
    cfg.validate();
    scene.validate();
    const int K = cfg.K, ds = cfg.d_s;
    const double gt = gamma * (1.0 + params.margin);

    SolveResult res;
    cmat X = matched_target(cfg, ch);
    if (max_scnr(X, scene, cfg) < gt) {
        res.bootstrap_rounds = bootstrap(X, gt, scene, cfg, params);
        if (max_scnr(X, scene, cfg) < gt) {
            res.status = SolveStatus::infeasible;
            return res;
        }
    }
    std::vector<cmat> T = split_users(X, K, ds);
    std::vector<cmat> U = update_U(ch, T, cfg);
    std::vector<cmat> G = update_G(ch, T, U, cfg);
    const cmat I_T = cmat::Identity(cfg.M_T, cfg.M_T), I_R = cmat::Identity(cfg.M_R, cfg.M_R);
    auto objective = [&]() {
        return augmented_objective(ch, T, U, G, I_T, join_users(T), cmat(), I_R, cmat(), nullptr, cfg);
    };

    std::vector<double> sweeps{objective()};
    res.status = SolveStatus::max_outer;
    for (int sweep = 0; sweep < params.fd_max_sweeps; ++sweep) {
        const double f0 = sweeps.back();
        const cmat W = optimal_receiver(join_users(T), scene, cfg);
        T = update_Tk(ch, T, U, G, receiver_constraint(W, gt, scene, cfg), nullptr, cfg, params).T;
        U = update_U(ch, T, cfg);
        G = update_G(ch, T, U, cfg);
        const double f1 = objective();
        sweeps.push_back(f1);

        const cmat Xs = join_users(T);
        TraceEntry e;
        e.outer = sweep;
        e.inner_sweeps = 1;
        e.objective = f1;
        e.scnr = scnr_full(Xs, optimal_receiver(Xs, scene, cfg), scene, cfg);
        e.sum_rate = achievable_rate(ch, T, cfg);
        res.trace.entries.push_back(e);
        res.outer_iterations = sweep + 1;
        if (std::abs(f1 - f0) <= params.fd_tol * std::abs(f0)) {
            res.status = SolveStatus::converged;
            break;
        }
    }
    res.trace.sweep_objectives.push_back(std::move(sweeps));

    BeamformerSet& bf = res.bf;
    X = join_users(T);
    const double pw = X.squaredNorm();
    if (pw > cfg.P_T) X *= std::sqrt(cfg.P_T / pw);
    bf.T_RF = I_T;
    bf.T_D = X;
    bf.W_RF = I_R;
    bf.W_D = optimal_receiver(X, scene, cfg);
    bf.T_aux = split_users(X, K, ds);
    bf.W_aux = bf.W_D;
    bf.U = update_U(ch, bf.T_aux, cfg);
    res.transmit_power = X.squaredNorm();
    res.sum_rate = sum_rate(ch, bf, cfg);
    res.scnr = scnr_full(bf, scene, cfg);
    res.h = 0.0;
    return res;
}

SolveResult solve(const SystemConfig& cfg, const ChannelSet& ch, const RadarScene& scene, double gamma,
                  Architecture arch, const InitOptions& init, const PddParams& params)
{
    if (!(gamma >= 0)) throw std::invalid_argument("solve: gamma must be nonnegative");
    switch (arch) {
    case Architecture::RS: return solve_hybrid(cfg, ch, scene, gamma, rs_blocks(), init, params);
    case Architecture::FD: return solve_fully_digital(cfg, ch, scene, gamma, init, params);
    default: throw std::invalid_argument("solve: architecture must be RS or FD (use pc_solve for PC)");
    }
}

}  // namespace rsdfrc
