#include "bosonic/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bosonic/errors.hpp"

namespace bosonic {

using Eigen::Index;

namespace {

// Orthonormal real basis of p x p Hermitian matrices: E_aa, (E_ab + E_ba)/sqrt2, i(E_ab - E_ba)/sqrt2.
struct BasisElem {
    int n;
    Index a[2], b[2];
    cplx c[2];
};

std::vector<BasisElem> hermitian_basis(Index p) {
    std::vector<BasisElem> out;
    const double r = 1.0 / std::sqrt(2.0);
    for (Index a = 0; a < p; ++a) out.push_back({1, {a, 0}, {a, 0}, {cplx(1), cplx(0)}});
    for (Index a = 0; a < p; ++a)
        for (Index b = a + 1; b < p; ++b) {
            out.push_back({2, {a, b}, {b, a}, {cplx(r), cplx(r)}});
            out.push_back({2, {a, b}, {b, a}, {cplx(0, r), cplx(0, -r)}});
        }
    return out;
}

CMatrix kron_identity(const CMatrix& Y, Index q) {
    const Index p = Y.rows();
    CMatrix out = CMatrix::Zero(p * q, p * q);
    for (Index a = 0; a < p; ++a)
        for (Index b = 0; b < p; ++b)
            if (Y(a, b) != cplx(0))
                for (Index j = 0; j < q; ++j) out(a * q + j, b * q + j) = Y(a, b);
    return out;
}

CMatrix ptrace_out(const CMatrix& X, Index p, Index q) {
    CMatrix R(p, p);
    for (Index a = 0; a < p; ++a)
        for (Index b = 0; b < p; ++b) R(a, b) = X.block(a * q, b * q, q, q).trace();
    return R;
}

CMatrix sym(const CMatrix& P) { return 0.5 * (P + P.adjoint()); }

double re_trace_product(const CMatrix& A, const CMatrix& B) {
    // Re Tr[A B] without forming the product
    return (A.transpose().array() * B.array()).sum().real();
}

// step to the boundary of the PSD cone along dX; infinity if never reached
double max_step(const CMatrix& X, const CMatrix& dX) {
    Eigen::LLT<CMatrix> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const CMatrix A = llt.matrixL().solve(dX);
    const CMatrix B = llt.matrixL().solve(A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym(B), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_scalar(double v, double dv) {
    return dv < 0 ? -v / dv : std::numeric_limits<double>::infinity();
}

struct Direction {
    CMatrix dX, dY, dZ;
    double dt = 0, ds = 0;
};

}  // namespace

SdpSolution solve_channel_sdp(const ChannelSdp& pr, const SdpOptions& opts) {
    const Index p = pr.p, q = pr.q, m = p * q;
    require(p >= 1 && q >= 1, "solve_channel_sdp: dimensions must be positive");
    require(pr.C.rows() == m && pr.C.cols() == m, "solve_channel_sdp: objective has wrong size");
    const bool has_e = pr.E.has_value();
    if (has_e) require(pr.E->rows() == m && pr.E->cols() == m, "solve_channel_sdp: energy operator has wrong size");
    const CMatrix C = sym(pr.C);
    const CMatrix E = has_e ? sym(*pr.E) : CMatrix();
    const CMatrix Ip = CMatrix::Identity(p, p);
    const auto basis = hermitian_basis(p);
    const Index nb = static_cast<Index>(basis.size());

    const auto coords = [&](const CMatrix& H) {
        Eigen::VectorXd y(nb);
        for (Index k = 0; k < nb; ++k) {
            cplx s = 0;
            for (int t = 0; t < basis[k].n; ++t) s += basis[k].c[t] * H(basis[k].b[t], basis[k].a[t]);
            y(k) = s.real();
        }
        return y;
    };
    const auto from_coords = [&](const Eigen::VectorXd& y) {
        CMatrix H = CMatrix::Zero(p, p);
        for (Index k = 0; k < nb; ++k)
            for (int t = 0; t < basis[k].n; ++t) H(basis[k].a[t], basis[k].b[t]) += y(k) * basis[k].c[t];
        return H;
    };

    // starting point
    CMatrix X = pr.X0 ? sym(*pr.X0) : CMatrix(CMatrix::Identity(m, m) / static_cast<double>(q));
    double t = has_e ? 1.0 : 0.0;
    double s = 0.0;
    if (has_e) {
        s = pr.e - re_trace_product(E, X);
        if (!(s > 0)) s = 1.0;  // infeasible start; the residual is carried by the Newton system
    }
    double y0;
    {
        const CMatrix shifted = has_e ? CMatrix(C - t * E) : C;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(shifted, Eigen::EigenvaluesOnly);
        y0 = std::max(es.eigenvalues().maxCoeff(), 0.0) + 1.0;
    }
    CMatrix Y = y0 * Ip;
    CMatrix Z = kron_identity(Y, q) + (has_e ? CMatrix(t * E) : CMatrix::Zero(m, m)) - C;
    const double nu = static_cast<double>(m) + (has_e ? 1.0 : 0.0);
    const double cnorm = C.norm();

    SdpSolution sol;
    const auto evaluate = [&](SdpSolution& out) {
        out.primal_objective = re_trace_product(C, X);
        out.dual_objective = Y.trace().real() + (has_e ? pr.e * t : 0.0);
        out.rel_gap = std::abs(out.dual_objective - out.primal_objective) / (1.0 + std::abs(out.primal_objective));
        double pres = (ptrace_out(X, p, q) - Ip).cwiseAbs().maxCoeff();
        if (has_e) pres = std::max(pres, std::max(re_trace_product(E, X) - pr.e, 0.0) / (1.0 + pr.e));
        out.primal_residual = pres;
        const CMatrix Rd = C + Z - kron_identity(Y, q) - (has_e ? CMatrix(t * E) : CMatrix::Zero(m, m));
        out.dual_residual = Rd.norm() / (1.0 + cnorm);
    };

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        evaluate(sol);
        if (sol.rel_gap <= opts.target_gap && sol.primal_residual <= opts.target_feas &&
            sol.dual_residual <= opts.target_feas)
            break;

        const double mu = (re_trace_product(X, Z) + s * t) / nu;
        Eigen::LLT<CMatrix> zllt(Z);
        if (zllt.info() != Eigen::Success) break;
        const CMatrix W = zllt.solve(CMatrix::Identity(m, m));

        const CMatrix Rp = Ip - ptrace_out(X, p, q);
        const double re = has_e ? pr.e - re_trace_product(E, X) - s : 0.0;
        const CMatrix Rd = C + Z - kron_identity(Y, q) - (has_e ? CMatrix(t * E) : CMatrix::Zero(m, m));

        // K[(a,b),(c,d)] = Tr[X_bc W_da] as the product of block-vectorized X and transposed W
        CMatrix Pm(p * p, q * q), Qm(p * p, q * q);
        for (Index b = 0; b < p; ++b)
            for (Index c = 0; c < p; ++c)
                for (Index j = 0; j < q; ++j)
                    for (Index jp = 0; jp < q; ++jp) {
                        Pm(b * p + c, j * q + jp) = X(b * q + j, c * q + jp);
                        Qm(b * p + c, j * q + jp) = W(b * q + jp, c * q + j);  // row (d, a) = (b, c)
                    }
        const CMatrix R = Pm * Qm.transpose();  // R[(b,c),(d,a)] = K[(a,b),(c,d)]

        const Index ns = nb + (has_e ? 1 : 0);
        Eigen::MatrixXd S(ns, ns);
        for (Index k = 0; k < nb; ++k)
            for (Index l = k; l < nb; ++l) {
                cplx acc = 0;
                for (int tk = 0; tk < basis[k].n; ++tk)
                    for (int tl = 0; tl < basis[l].n; ++tl) {
                        const Index a = basis[k].a[tk], b = basis[k].b[tk];
                        const Index c = basis[l].a[tl], d = basis[l].b[tl];
                        acc += basis[k].c[tk] * basis[l].c[tl] * R(b * p + c, d * p + a);
                    }
                S(k, l) = S(l, k) = acc.real();
            }
        CMatrix XEW;
        if (has_e) {
            XEW = X * E * W;
            const Eigen::VectorXd h = coords(ptrace_out(XEW, p, q));
            S.block(0, nb, nb, 1) = h;
            S.block(nb, 0, 1, nb) = h.transpose();
            S(nb, nb) = re_trace_product(E, XEW) + s / t;
        }
        Eigen::LLT<Eigen::MatrixXd> sllt(S);
        if (sllt.info() != Eigen::Success) break;

        const auto solve = [&](double smu, const CMatrix* corrX, double corr_s) {
            CMatrix G = smu * W - X + sym(X * Rd * W);
            if (corrX) G -= sym(*corrX);
            Eigen::VectorXd rhs(ns);
            rhs.head(nb) = coords(ptrace_out(G, p, q) - Rp);
            if (has_e) rhs(nb) = re_trace_product(E, G) + (smu - s * t - corr_s) / t - re;
            const Eigen::VectorXd sol_v = sllt.solve(rhs);
            Direction dir;
            dir.dY = from_coords(sol_v.head(nb));
            dir.dt = has_e ? sol_v(nb) : 0.0;
            CMatrix shift = kron_identity(dir.dY, q);
            if (has_e) shift += dir.dt * E;
            dir.dZ = shift - Rd;
            dir.dX = G - sym(X * shift * W);
            dir.ds = has_e ? (smu - s * t - corr_s - s * dir.dt) / t : 0.0;
            return dir;
        };
        const auto step_lengths = [&](const Direction& dir, double tau) {
            double ap = max_step(X, dir.dX), ad = max_step(Z, dir.dZ);
            if (has_e) {
                ap = std::min(ap, max_step_scalar(s, dir.ds));
                ad = std::min(ad, max_step_scalar(t, dir.dt));
            }
            return std::pair{std::min(1.0, tau * ap), std::min(1.0, tau * ad)};
        };

        const Direction aff = solve(0.0, nullptr, 0.0);
        const auto [ap_a, ad_a] = step_lengths(aff, 1.0);
        const double mu_aff = (re_trace_product(X + ap_a * aff.dX, Z + ad_a * aff.dZ) +
                               (s + ap_a * aff.ds) * (t + ad_a * aff.dt)) /
                              nu;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
        const CMatrix corrX = aff.dX * aff.dZ * W;
        const Direction dir = solve(sigma * mu, &corrX, aff.ds * aff.dt);
        const auto [ap, ad] = step_lengths(dir, 0.98);
        if (ap <= 0.0 || ad <= 0.0) break;

        X = sym(X + ap * dir.dX);
        Y = sym(Y + ad * dir.dY);
        Z = sym(Z + ad * dir.dZ);
        if (has_e) {
            s += ap * dir.ds;
            t += ad * dir.dt;
        }
    }

    // exact trace preservation: X <- (R^-1/2 (x) I) X (R^-1/2 (x) I)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(sym(ptrace_out(X, p, q)));
        if (es.eigenvalues().minCoeff() > 0) {
            const CMatrix Rm = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                               es.eigenvectors().adjoint();
            const CMatrix K = kron_identity(Rm, q);
            X = sym(K * X * K);
        }
    }
    evaluate(sol);
    sol.X = X;
    sol.Y = Y;
    sol.t = t;
    sol.slack = s;
    sol.iterations = it;
    if (!(sol.rel_gap <= opts.gap_tol && sol.primal_residual <= opts.feas_tol)) {
        std::ostringstream os;
        os << "channel SDP did not converge after " << it << " iterations: rel_gap=" << sol.rel_gap
           << " primal_residual=" << sol.primal_residual << " dual_residual=" << sol.dual_residual
           << " primal=" << sol.primal_objective << " dual=" << sol.dual_objective;
        throw SolverError(os.str());
    }
    return sol;
}

}  // namespace bosonic
