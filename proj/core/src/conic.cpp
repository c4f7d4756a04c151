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

// Primal-dual interior-point method on the homogeneous self-dual embedding
//   A'y + G'z + c tau = 0,  A x = b tau,  G x + s = h tau,  kappa = -c'x - b'y - h'z,
// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

#include "rsdfrc/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsdfrc {

SocConstraint rotated_cone(const rmat& R, const rvec& r, const rvec& u, double u0, const rvec& v, double v0)
{
    SocConstraint c;
    c.F.resize(R.rows() + 1, R.cols());
    c.F.topRows(R.rows()) = 2.0 * R;
    c.F.row(R.rows()) = (u - v).transpose();
    c.g.resize(R.rows() + 1);
    c.g.head(R.rows()) = 2.0 * r;
    c.g(R.rows()) = u0 - v0;
    c.f = u + v;
    c.e = u0 + v0;
    return c;
}

void SocpProblem::validate() const
{
    const Eigen::Index n = c.size();
    auto bad = [](const std::string& what) { throw std::invalid_argument("SocpProblem: " + what); };
    if (n == 0) bad("no variables");
    if (!c.allFinite()) bad("objective is not finite");
    if (A.rows() != b.size() || (A.rows() > 0 && A.cols() != n)) bad("equality block dimensions");
    if (G_lin.rows() != h_lin.size() || (G_lin.rows() > 0 && G_lin.cols() != n)) bad("inequality block dimensions");
    for (const auto& k : cones) {
        if (k.F.cols() != n || k.F.rows() != k.g.size() || k.f.size() != n) bad("cone dimensions");
        if (!k.F.allFinite() || !k.g.allFinite() || !k.f.allFinite() || !std::isfinite(k.e)) bad("cone data not finite");
    }
}

std::string to_string(SocpStatus s)
{
    switch (s) {
    case SocpStatus::optimal: return "optimal";
    case SocpStatus::infeasible: return "infeasible";
    case SocpStatus::unbounded: return "unbounded";
    case SocpStatus::max_iters: return "max_iters";
    }
    return "?";
}

rmat lift(const cmat& M)
{
    rmat R(2 * M.rows(), 2 * M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            const double a = M(i, j).real(), b = M(i, j).imag();
            R(2 * i, 2 * j) = a;
            R(2 * i, 2 * j + 1) = -b;
            R(2 * i + 1, 2 * j) = b;
            R(2 * i + 1, 2 * j + 1) = a;
        }
    return R;
}

rvec lift(const cvec& v)
{
    rvec r(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        r(2 * i) = v(i).real();
        r(2 * i + 1) = v(i).imag();
    }
    return r;
}

cvec unlift(const rvec& v)
{
    cvec c(v.size() / 2);
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cplx(v(2 * i), v(2 * i + 1));
    return c;
}

namespace {

// Cone layout of the slack s: `l` nonnegative entries, then second-order cones.
struct Layout {
    Eigen::Index l = 0;
    std::vector<Eigen::Index> off, dim;
    Eigen::Index m = 0;
    int degree() const { return static_cast<int>(l + off.size()); }
};

struct NtScaling {
    rvec lp;  // sqrt(s / z)
    std::vector<double> eta, w0;
    std::vector<rvec> w1;
};

double soc_residual(const rvec& u, Eigen::Index o, Eigen::Index d)
{
    return u(o) - u.segment(o + 1, d - 1).norm();
}

// W u (scaled = false) or W^{-1} u (scaled = true) applied block-wise.
rvec apply_w(const Layout& L, const NtScaling& W, const rvec& u, bool inverse)
{
    rvec r(u.size());
    if (inverse) r.head(L.l) = u.head(L.l).cwiseQuotient(W.lp);
    else r.head(L.l) = u.head(L.l).cwiseProduct(W.lp);
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], d = L.dim[c];
        const double u0 = u(o);
        const auto u1 = u.segment(o + 1, d - 1);
        const rvec& w1 = W.w1[c];
        const double sgn = inverse ? -1.0 : 1.0;
        const double e = inverse ? 1.0 / W.eta[c] : W.eta[c];
        const double t = w1.dot(u1);
        r(o) = e * (W.w0[c] * u0 + sgn * t);
        r.segment(o + 1, d - 1) = e * (sgn * u0 * w1 + u1 + (t / (1.0 + W.w0[c])) * w1);
    }
    return r;
}

// W^{-1} applied to every column of G.
rmat apply_winv_cols(const Layout& L, const NtScaling& W, const rmat& G)
{
    rmat R(G.rows(), G.cols());
    for (Eigen::Index i = 0; i < L.l; ++i) R.row(i) = G.row(i) / W.lp(i);
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], d = L.dim[c];
        const rvec& w1 = W.w1[c];
        const double e = 1.0 / W.eta[c];
        const auto g0 = G.row(o);
        const auto G1 = G.middleRows(o + 1, d - 1);
        const Eigen::RowVectorXd t = w1.transpose() * G1;
        R.row(o) = e * (W.w0[c] * g0 - t);
        R.middleRows(o + 1, d - 1) = e * (G1 - w1 * g0 + (w1 / (1.0 + W.w0[c])) * t);
    }
    return R;
}

NtScaling nt_scaling(const Layout& L, const rvec& s, const rvec& z, rvec& lambda)
{
    NtScaling W;
    lambda.resize(s.size());
    W.lp = (s.head(L.l).array() / z.head(L.l).array()).sqrt();
    lambda.head(L.l) = (s.head(L.l).array() * z.head(L.l).array()).sqrt();
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], d = L.dim[c];
        const double sn = s.segment(o + 1, d - 1).norm();
        const double zn = z.segment(o + 1, d - 1).norm();
        const double sres = (s(o) - sn) * (s(o) + sn);
        const double zres = (z(o) - zn) * (z(o) + zn);
        const double ss = std::sqrt(sres), zs = std::sqrt(zres);
        const rvec sb = s.segment(o, d) / ss;
        const rvec zb = z.segment(o, d) / zs;
        const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
        const double w0 = (sb(0) + zb(0)) / (2.0 * gamma);
        rvec w1 = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
        W.eta.push_back(std::sqrt(ss / zs));
        W.w0.push_back(w0);
        W.w1.push_back(std::move(w1));
    }
    // lambda = W z on the cone part.
    const rvec wz = apply_w(L, W, z, false);
    lambda.tail(s.size() - L.l) = wz.tail(s.size() - L.l);
    return W;
}

// Jordan product u o v.
rvec jordan(const Layout& L, const rvec& u, const rvec& v)
{
    rvec r(u.size());
    r.head(L.l) = u.head(L.l).cwiseProduct(v.head(L.l));
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], d = L.dim[c];
        r(o) = u.segment(o, d).dot(v.segment(o, d));
        r.segment(o + 1, d - 1) = u(o) * v.segment(o + 1, d - 1) + v(o) * u.segment(o + 1, d - 1);
    }
    return r;
}

// Solves lambda o x = c.
rvec jordan_div(const Layout& L, const rvec& lam, const rvec& cc)
{
    rvec x(cc.size());
    x.head(L.l) = cc.head(L.l).cwiseQuotient(lam.head(L.l));
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], d = L.dim[c];
        const double l0 = lam(o);
        const auto l1 = lam.segment(o + 1, d - 1);
        const double ln = l1.norm();
        const double det = (l0 - ln) * (l0 + ln);
        const double x0 = (l0 * cc(o) - l1.dot(cc.segment(o + 1, d - 1))) / det;
        x(o) = x0;
        x.segment(o + 1, d - 1) = (cc.segment(o + 1, d - 1) - x0 * l1) / l0;
    }
    return x;
}

// Largest step a with lambda + a d inside the cone (lambda strictly interior), capped at `cap`.
double cone_step(const Layout& L, const rvec& lam, const rvec& d, double cap)
{
    double a = cap;
    for (Eigen::Index i = 0; i < L.l; ++i)
        if (d(i) < 0) a = std::min(a, -lam(i) / d(i));
    for (size_t c = 0; c < L.off.size(); ++c) {
        const Eigen::Index o = L.off[c], q = L.dim[c];
        const double ln = lam.segment(o + 1, q - 1).norm();
        const double res = std::sqrt((lam(o) - ln) * (lam(o) + ln));
        const rvec lb = lam.segment(o, q) / res;
        const rvec dd = d.segment(o, q) / res;
        const double rho0 = lb(0) * dd(0) - lb.tail(q - 1).dot(dd.tail(q - 1));
        const rvec rho1 = dd.tail(q - 1) - ((rho0 + dd(0)) / (lb(0) + 1.0)) * lb.tail(q - 1);
        const double den = rho1.norm() - rho0;
        if (den > 0) a = std::min(a, 1.0 / den);
    }
    return a;
}

rvec unit_e(const Layout& L)
{
    rvec e = rvec::Zero(L.m);
    e.head(L.l).setOnes();
    for (auto o : L.off) e(o) = 1.0;
    return e;
}

// Moves u into the interior by a multiple of e when it is not already strictly inside.
rvec push_interior(const Layout& L, const rvec& u)
{
    double alpha = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < L.l; ++i) alpha = std::max(alpha, -u(i));
    for (size_t c = 0; c < L.off.size(); ++c) alpha = std::max(alpha, -soc_residual(u, L.off[c], L.dim[c]));
    if (alpha < 0) return u;
    return u + (1.0 + alpha) * unit_e(L);
}

class KktSolver {
public:
    KktSolver(const rmat& A, const rmat& G) : A_(A), G_(G) {}

    void factor(const Layout& L, const NtScaling& W)
    {
        L_ = &L;
        W_ = &W;
        Gh_ = apply_winv_cols(L, W, G_);
        rmat N = Gh_.transpose() * Gh_;
        const double reg = 1e-13 * std::max(1.0, N.diagonal().maxCoeff());
        N.diagonal().array() += reg;
        llt_.compute(N);
        if (A_.rows() > 0) {
            AN_ = llt_.solve(A_.transpose());
            rmat S = A_ * AN_;
            S.diagonal().array() += reg;
            schur_.compute(S);
        }
    }

    // Solves [0 A' G'; A 0 0; G 0 -W'W] [x; y; z] = [r1; r2; r3] with iterative refinement.
    void solve(const rvec& r1, const rvec& r2, const rvec& r3, rvec& x, rvec& y, rvec& z) const
    {
        raw(r1, r2, r3, x, y, z);
        for (int it = 0; it < 3; ++it) {
            const rvec Wz = apply_w(*L_, *W_, apply_w(*L_, *W_, z, false), false);
            rvec e1 = r1 - G_.transpose() * z;
            if (A_.rows() > 0) e1 -= A_.transpose() * y;
            const rvec e2 = A_.rows() > 0 ? rvec(r2 - A_ * x) : rvec(0);
            const rvec e3 = r3 - (G_ * x - Wz);
            const double err = std::max({e1.lpNorm<Eigen::Infinity>(), e2.size() ? e2.lpNorm<Eigen::Infinity>() : 0.0,
                                         e3.lpNorm<Eigen::Infinity>()});
            const double scale = 1.0 + std::max({r1.lpNorm<Eigen::Infinity>(), r3.lpNorm<Eigen::Infinity>(),
                                                 r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0});
            if (err <= 1e-14 * scale) break;
            rvec dx, dy, dz;
            raw(e1, e2, e3, dx, dy, dz);
            x += dx;
            if (A_.rows() > 0) y += dy;
            z += dz;
        }
    }

private:
    void raw(const rvec& r1, const rvec& r2, const rvec& r3, rvec& x, rvec& y, rvec& z) const
    {
        const rvec r3h = apply_w(*L_, *W_, r3, true);
        const rvec rhs = r1 + Gh_.transpose() * r3h;
        if (A_.rows() > 0) {
            y = schur_.solve(A_ * llt_.solve(rhs) - r2);
            x = llt_.solve(rhs - A_.transpose() * y);
        } else {
            y.resize(0);
            x = llt_.solve(rhs);
        }
        z = apply_w(*L_, *W_, rvec(Gh_ * x - r3h), true);
    }

    const rmat& A_;
    const rmat& G_;
    const Layout* L_ = nullptr;
    const NtScaling* W_ = nullptr;
    rmat Gh_, AN_;
    Eigen::LLT<rmat> llt_;
    Eigen::LLT<rmat> schur_;
};

}  // namespace

SocpSolution solve_socp(const SocpProblem& p, const SocpSettings& st)
{
    p.validate();
    const Eigen::Index n = p.num_vars();
    const Eigen::Index neq = p.A.rows();

    Layout L;
    L.l = p.G_lin.rows();
    Eigen::Index m = L.l;
    for (const auto& k : p.cones) {
        L.off.push_back(m);
        L.dim.push_back(k.F.rows() + 1);
        m += k.F.rows() + 1;
    }
    L.m = m;

    rmat G(m, n);
    rvec h(m);
    if (L.l > 0) {
        G.topRows(L.l) = p.G_lin;
        h.head(L.l) = p.h_lin;
    }
    for (size_t c = 0; c < p.cones.size(); ++c) {
        const auto& k = p.cones[c];
        const Eigen::Index o = L.off[c];
        G.row(o) = -k.f.transpose();
        G.middleRows(o + 1, k.F.rows()) = -k.F;
        h(o) = k.e;
        h.segment(o + 1, k.F.rows()) = k.g;
    }
    const rmat& A = p.A;
    const rvec b = neq > 0 ? p.b : rvec(0);
    const rvec& c = p.c;

    SocpSolution out;
    const int D = L.degree();
    const rvec e = unit_e(L);

    // Identity scaling for the initial point.
    NtScaling Wid;
    Wid.lp = rvec::Ones(L.l);
    for (size_t k = 0; k < L.off.size(); ++k) {
        Wid.eta.push_back(1.0);
        Wid.w0.push_back(1.0);
        Wid.w1.push_back(rvec::Zero(L.dim[k] - 1));
    }
    KktSolver kkt(A, G);
    kkt.factor(L, Wid);

    rvec x, y, z, s;
    {
        rvec xp, yp, zp;
        kkt.solve(rvec::Zero(n), b, h, xp, yp, zp);
        x = xp;
        s = push_interior(L, -zp);
        rvec xd, yd, zd;
        kkt.solve(-c, rvec::Zero(neq), rvec::Zero(m), xd, yd, zd);
        y = yd;
        z = push_interior(L, zd);
    }
    double tau = 1.0, kappa = 1.0;

    const double resx0 = std::max(1.0, c.norm());
    const double resy0 = std::max(1.0, b.size() ? b.norm() : 0.0);
    const double resz0 = std::max(1.0, h.norm());

    for (int iter = 0; iter <= st.max_iters; ++iter) {
        out.iterations = iter;
        rvec rx = G.transpose() * z + c * tau;
        if (neq > 0) rx += A.transpose() * y;
        const rvec ry = neq > 0 ? rvec(A * x - b * tau) : rvec(0);
        const rvec rz = s + G * x - h * tau;
        const double cx = c.dot(x);
        const double by = neq > 0 ? b.dot(y) : 0.0;
        const double hz = h.dot(z);
        const double rt = kappa + cx + by + hz;

        const double gap = s.dot(z);
        const double mu = (gap + kappa * tau) / (D + 1);
        const double pcost = cx / tau;
        const double dcost = -(by + hz) / tau;
        const double pres = std::max(ry.size() ? ry.norm() / resy0 : 0.0, rz.norm() / resz0) / tau;
        const double dres = rx.norm() / resx0 / tau;
        const double tgap = gap / (tau * tau);
        const double relgap = tgap / std::max(1e-12, std::min(std::abs(pcost), std::abs(dcost)));

        out.primal_objective = pcost;
        out.dual_objective = dcost;
        out.gap = tgap;
        out.primal_residual = pres;
        out.dual_residual = dres;

        if (pres < st.feastol && dres < st.feastol && (tgap < st.abstol || relgap < st.reltol)) {
            out.status = SocpStatus::optimal;
            out.x = x / tau;
            return out;
        }
        if (by + hz < 0 && kappa > tau) {
            rvec aty = G.transpose() * z;
            if (neq > 0) aty += A.transpose() * y;
            if (aty.norm() / resx0 / (-(by + hz)) < st.feastol) {
                out.status = SocpStatus::infeasible;
                out.x = rvec::Constant(n, std::numeric_limits<double>::quiet_NaN());
                return out;
            }
        }
        if (cx < 0 && kappa > tau) {
            const double ax = neq > 0 ? (A * x).norm() / resy0 : 0.0;
            const double gx = (G * x + s).norm() / resz0;
            if (std::max(ax, gx) / (-cx) < st.feastol) {
                out.status = SocpStatus::unbounded;
                out.x = x / (-cx);
                return out;
            }
        }
        if (iter == st.max_iters) break;

        rvec lambda;
        NtScaling W = nt_scaling(L, s, z, lambda);
        if (!lambda.allFinite()) break;
        kkt.factor(L, W);

        rvec x2, y2, z2;
        kkt.solve(-c, b, h, x2, y2, z2);
        const double den_base = c.dot(x2) + (neq > 0 ? b.dot(y2) : 0.0) + h.dot(z2);

        auto direction = [&](double sigma, const rvec& ds, double dk, rvec& dx, rvec& dy, rvec& dz, rvec& dsv,
                             double& dt, double& dkap) {
            const rvec wds = apply_w(L, W, jordan_div(L, lambda, ds), false);
            rvec x1, y1, z1;
            kkt.solve(-(1.0 - sigma) * rx, -(1.0 - sigma) * ry, -(1.0 - sigma) * rz - wds, x1, y1, z1);
            const double num = -(1.0 - sigma) * rt - dk / tau - (c.dot(x1) + (neq > 0 ? b.dot(y1) : 0.0) + h.dot(z1));
            dt = num / (den_base - kappa / tau);
            dx = x1 + dt * x2;
            dy = neq > 0 ? rvec(y1 + dt * y2) : rvec(0);
            dz = z1 + dt * z2;
            dsv = apply_w(L, W, rvec(jordan_div(L, lambda, ds) - apply_w(L, W, dz, false)), false);
            dkap = (dk - kappa * dt) / tau;
        };
        auto max_step = [&](const rvec& dsv, const rvec& dz, double dt, double dkap) {
            double a = 1.0;
            a = std::min(a, cone_step(L, lambda, apply_w(L, W, dsv, true), a));
            a = std::min(a, cone_step(L, lambda, apply_w(L, W, dz, false), a));
            if (dt < 0) a = std::min(a, -tau / dt);
            if (dkap < 0) a = std::min(a, -kappa / dkap);
            return a;
        };

        // Predictor.
        const rvec ds_aff = -jordan(L, lambda, lambda);
        rvec dxa, dya, dza, dsa;
        double dta, dka;
        direction(0.0, ds_aff, -kappa * tau, dxa, dya, dza, dsa, dta, dka);
        const double a_aff = max_step(dsa, dza, dta, dka);
        const double sigma = std::clamp(std::pow(1.0 - a_aff, 3), 1e-4, 1.0);

        // Corrector.
        const rvec ds = -jordan(L, lambda, lambda) -
                        jordan(L, apply_w(L, W, dsa, true), apply_w(L, W, dza, false)) + sigma * mu * e;
        const double dk = -kappa * tau - dka * dta + sigma * mu;
        rvec dx, dy, dz, dsv;
        double dt, dkap;
        direction(sigma, ds, dk, dx, dy, dz, dsv, dt, dkap);
        const double a = std::min(1.0, 0.99 * max_step(dsv, dz, dt, dkap));
        if (!(a > 0) || !dx.allFinite()) break;

        x += a * dx;
        if (neq > 0) y += a * dy;
        z += a * dz;
        s += a * dsv;
        tau += a * dt;
        kappa += a * dkap;
    }
    out.status = SocpStatus::max_iters;
    out.x = x / tau;
    return out;
}

}  // namespace rsdfrc
