#include "bosonic/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bosonic/errors.hpp"

namespace bosonic {

using Eigen::Index;

namespace {

void check_same_dim(const CMatrix& a, const CMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError(std::string(who) + ": dimension mismatch");
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

FockDensity::FockDensity(CMatrix rho, double defect) : rho_(std::move(rho)), trace_defect_(defect) {}

FockDensity::FockDensity(CMatrix rho) : rho_(std::move(rho)) { validate(rho_); }

void FockDensity::validate(const CMatrix& rho) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) throw DomainError("FockDensity: square matrix required");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("FockDensity: not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-8) throw DomainError("FockDensity: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) throw DomainError("FockDensity: negative eigenvalue");
}

FockDensity FockDensity::renormalized(CMatrix rho) {
    CMatrix h = hermitize(rho);
    const double tr = h.trace().real();
    if (!(tr > 0)) throw DomainError("FockDensity: non-positive trace");
    h /= tr;
    validate(h);
    return FockDensity(std::move(h), std::abs(1.0 - tr));
}

FockDensity FockDensity::pure(const CVector& psi) {
    const double nrm = psi.norm();
    if (!(nrm > 0)) throw DomainError("FockDensity::pure: zero vector");
    CVector v = psi / nrm;
    return FockDensity(v * v.adjoint(), std::abs(1.0 - nrm * nrm));
}

FockOp annihilation(Index n) {
    require(n >= 1, "annihilation: dimension must be >= 1");
    FockOp a = FockOp::Zero(n, n);
    for (Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

FockOp creation(Index n) { return annihilation(n).adjoint(); }

FockOp number_op(Index n) {
    FockOp m = FockOp::Zero(n, n);
    for (Index k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
    return m;
}

std::pair<FockOp, FockOp> quadratures(Index n) {
    const FockOp a = annihilation(n), ad = a.adjoint();
    const double s = 1.0 / std::sqrt(2.0);
    return {s * (a + ad), cplx(0, s) * (ad - a)};
}

FockOp rotation_op(double theta, Index n) {
    FockOp u = FockOp::Zero(n, n);
    for (Index k = 0; k < n; ++k) u(k, k) = std::polar(1.0, theta * static_cast<double>(k));
    return u;
}

FockOp envelope_op(double delta, Index n) {
    FockOp e = FockOp::Zero(n, n);
    for (Index k = 0; k < n; ++k) e(k, k) = std::exp(-delta * delta * static_cast<double>(k));
    return e;
}

Index coherent_guard_dim(double abs_alpha) {
    const double x = abs_alpha * abs_alpha;
    return static_cast<Index>(std::ceil(x + 10.0 * std::sqrt(x + 1.0) + 20.0));
}

CVector coherent_state(cplx alpha, Index n) {
    const double r = std::abs(alpha);
    if (n < coherent_guard_dim(r))
        throw TruncationError("coherent_state: dimension " + std::to_string(n) + " below guard " +
                              std::to_string(coherent_guard_dim(r)));
    CVector v = CVector::Zero(n);
    if (r == 0) {
        v(0) = 1.0;
        return v;
    }
    const double phi = std::arg(alpha), lr = std::log(r);
    for (Index k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double logmag = -0.5 * r * r + kk * lr - 0.5 * std::lgamma(kk + 1.0);
        v(k) = std::polar(std::exp(logmag), kk * phi);
    }
    return v / v.norm();
}

// <m|D|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2) for m >= n,
// and the mirrored form with -conj(alpha) above the diagonal.
FockOp displacement_op(cplx alpha, Index n) {
    require(n >= 1, "displacement_op: dimension must be >= 1");
    FockOp D = FockOp::Zero(n, n);
    const double r = std::abs(alpha);
    if (r == 0) return FockOp::Identity(n, n);
    const double x = r * r, lr = std::log(r), phi = std::arg(alpha);
    const double phi_up = std::arg(-std::conj(alpha));
    for (Index k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        double lm1 = 0.0, l0 = 1.0;  // L_{j-1}^k, L_j^k
        for (Index j = 0; j + k < n; ++j) {
            const double jj = static_cast<double>(j);
            if (j == 1) {
                lm1 = l0;
                l0 = 1.0 + kk - x;
            } else if (j > 1) {
                const double next = ((2.0 * (jj - 1) + 1.0 + kk - x) * l0 - (jj - 1 + kk) * lm1) / jj;
                lm1 = l0;
                l0 = next;
            }
            const double logpre = 0.5 * (std::lgamma(jj + 1.0) - std::lgamma(jj + kk + 1.0)) + kk * lr - 0.5 * x;
            const double mag = std::exp(logpre) * l0;
            D(j + k, j) = std::polar(1.0, kk * phi) * mag;
            if (k > 0) D(j, j + k) = std::polar(1.0, kk * phi_up) * mag;
        }
    }
    return D;
}

FockDensity thermal_state(double nth, Index n) {
    require(nth >= 0, "thermal_state: nth must be >= 0");
    require(n >= 1, "thermal_state: dimension must be >= 1");
    const double q = nth / (nth + 1.0);
    if (nth > 0 && std::pow(q, static_cast<double>(n)) >= 1e-12)
        throw TruncationError("thermal_state: tail weight beyond dimension " + std::to_string(n) + " exceeds 1e-12");
    CMatrix rho = CMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) rho(k, k) = std::pow(q, static_cast<double>(k)) / (nth + 1.0);
    return FockDensity::renormalized(rho);
}

std::vector<FockOp> pure_loss_kraus(double eta, Index n, Index l_max) {
    require(eta >= 0 && eta <= 1, "pure_loss_kraus: eta must lie in [0,1]");
    require(l_max >= 0 && l_max <= n, "pure_loss_kraus: need 0 <= l_max <= n");
    std::vector<FockOp> out;
    const Index top = std::min(l_max, n - 1);
    for (Index l = 0; l <= top; ++l) {
        if (l > 0 && eta == 1.0) break;
        FockOp E = FockOp::Zero(n, n);
        const double ll = static_cast<double>(l);
        // <m|E_l|m+l> = sqrt(C(m+l, l) (1-eta)^l eta^m)
        for (Index m = 0; m + l < n; ++m) {
            const double mm = static_cast<double>(m);
            const double logc = std::lgamma(mm + ll + 1.0) - std::lgamma(mm + 1.0) - std::lgamma(ll + 1.0);
            double w = std::exp(0.5 * logc);
            w *= (l > 0 ? std::pow(1.0 - eta, 0.5 * ll) : 1.0) * (m > 0 ? std::pow(eta, 0.5 * mm) : 1.0);
            E(m, m + l) = w;
        }
        out.push_back(std::move(E));
    }
    return out;
}

FockDensity apply_kraus(const std::vector<FockOp>& kraus, const FockDensity& rho) {
    require(!kraus.empty(), "apply_kraus: empty Kraus list");
    CMatrix out = CMatrix::Zero(kraus.front().rows(), kraus.front().rows());
    for (const auto& K : kraus) {
        require(K.cols() == rho.dim(), "apply_kraus: dimension mismatch");
        out.noalias() += K * rho.matrix() * K.adjoint();
    }
    return FockDensity::renormalized(out);
}

FockDensity pure_loss_apply(double eta, const FockDensity& rho) {
    return apply_kraus(pure_loss_kraus(eta, rho.dim(), rho.dim() - 1), rho);
}

FockDensity thermal_loss_apply(double eta, double nth, const FockDensity& rho, Index n_env) {
    require(eta >= 0 && eta <= 1, "thermal_loss_apply: eta must lie in [0,1]");
    require(nth >= 0, "thermal_loss_apply: nth must be >= 0");
    const Index ns = rho.dim(), ne = n_env;
    require(ne >= 1, "thermal_loss_apply: n_env must be >= 1");

    std::vector<double> penv(static_cast<size_t>(ne));
    {
        const double q = nth / (nth + 1.0);
        if (nth > 0 && std::pow(q, static_cast<double>(ne)) >= 1e-10)
            throw TruncationError("thermal_loss_apply: environment tail weight exceeds 1e-10");
        double s = 0;
        for (Index k = 0; k < ne; ++k) s += (penv[k] = std::pow(q, static_cast<double>(k)) / (nth + 1.0));
        for (auto& p : penv) p /= s;
    }

    // The generator conserves total photon number, so it is exponentiated block by block.
    // Blocks with N >= min(ns, ne) are clipped by the truncation and must carry no weight.
    const Index clip = std::min(ns, ne);
    double clipped = 0;
    for (Index s = 0; s < ns; ++s)
        for (Index k = 0; k < ne; ++k)
            if (s + k >= clip) clipped += rho.matrix()(s, s).real() * penv[k];
    if (clipped > 1e-10)
        throw TruncationError("thermal_loss_apply: joint input weight in truncated photon-number blocks is " +
                              std::to_string(clipped));

    const double theta = std::acos(std::sqrt(eta));
    // U[(s', j), (s, k)] stored as kraus blocks K_{jk}(s', s)
    std::vector<CMatrix> blocks(static_cast<size_t>(ne * ne), CMatrix::Zero(ns, ns));
    for (Index N = 0; N <= ns + ne - 2; ++N) {
        const Index lo = std::max<Index>(0, N - (ne - 1)), hi = std::min<Index>(N, ns - 1);
        const Index m = hi - lo + 1;
        if (m <= 0) continue;
        // basis index i <-> (n1 = lo + i, n2 = N - n1); G = theta (a1^dag a2 - a1 a2^dag)
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
        for (Index i = 0; i + 1 < m; ++i) {
            const double n1 = static_cast<double>(lo + i), n2 = static_cast<double>(N - lo - i);
            const double amp = theta * std::sqrt((n1 + 1.0) * n2);
            G(i + 1, i) = amp;
            G(i, i + 1) = -amp;
        }
        const CMatrix H = cplx(0, 1) * G.cast<cplx>();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        const CVector ph = (-cplx(0, 1) * es.eigenvalues().cast<cplx>()).array().exp();
        const CMatrix U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        for (Index r = 0; r < m; ++r)
            for (Index c = 0; c < m; ++c) {
                const Index s_out = lo + r, j = N - s_out, s_in = lo + c, k = N - s_in;
                blocks[static_cast<size_t>(j * ne + k)](s_out, s_in) = U(r, c);
            }
    }

    CMatrix out = CMatrix::Zero(ns, ns);
    for (Index k = 0; k < ne; ++k) {
        if (penv[k] < 1e-18) continue;
        for (Index j = 0; j < ne; ++j) {
            const CMatrix& K = blocks[static_cast<size_t>(j * ne + k)];
            out.noalias() += penv[k] * (K * rho.matrix() * K.adjoint());
        }
    }
    return FockDensity::renormalized(out);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
    require(n >= 1, "gauss_legendre: n must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Eigen::VectorXd x = es.eigenvalues();
    Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    x = (0.5 * (b - a)) * (x.array() + 1.0) + a;
    w *= 0.5 * (b - a);
    return {x, w};
}

FockDensity random_displacement_apply(double sigma2, const FockDensity& rho) {
    require(sigma2 >= 0, "random_displacement_apply: sigma2 must be >= 0");
    if (sigma2 == 0) return rho;
    constexpr int kRadial = 32, kAngular = 32;
    const Index n = rho.dim();
    const double sigma = std::sqrt(sigma2);
    const auto [r, wr] = gauss_legendre(kRadial, 0.0, 6.0 * sigma);

    // D(r e^{i phi}) = R(phi) D(r) R(-phi) with R(phi) = exp(i phi n)
    CMatrix out = CMatrix::Zero(n, n);
    for (int a = 0; a < kAngular; ++a) {
        const double phi = 2.0 * std::numbers::pi * a / kAngular;
        const CMatrix R = rotation_op(phi, n);
        const CMatrix twisted = R.adjoint() * rho.matrix() * R;
        CMatrix acc = CMatrix::Zero(n, n);
        for (int i = 0; i < kRadial; ++i) {
            const double w = wr(i) * r(i) * std::exp(-r(i) * r(i) / sigma2) / (std::numbers::pi * sigma2) *
                             (2.0 * std::numbers::pi / kAngular);
            const CMatrix D = displacement_op(cplx(r(i), 0.0), n);
            acc.noalias() += w * (D * twisted * D.adjoint());
        }
        out.noalias() += R * acc * R.adjoint();
    }
    return FockDensity::renormalized(out);
}

namespace {

// Kernel paired with rho(m, m+k):
//   (-1)^m / pi * sqrt(m!/(m+k)!) (2A)^k exp(-2|A|^2) L_m^k(4|A|^2),  A = (q + i p)/sqrt2,
// evaluated with a log-scaled prefactor and the three-term Laguerre recurrence in m.
// Levels beyond the returned size carry less than tol of the population; since
// |rho_mn| <= sqrt(rho_mm rho_nn) the coherences there are negligible too.
Index support_size(const CMatrix& rho, double tol = 1e-15) {
    Index M = rho.rows();
    double tail = 0;
    while (M > 1 && tail + std::abs(rho(M - 1, M - 1).real()) < tol) {
        tail += std::abs(rho(M - 1, M - 1).real());
        --M;
    }
    return M;
}

template <bool Complex>
cplx wigner_sum(const CMatrix& rho, Index M, const std::vector<double>& sq, double q, double p) {
    const cplx A(q / std::sqrt(2.0), p / std::sqrt(2.0));
    const double r2 = std::norm(A), x = 4.0 * r2;
    const double lr = r2 > 0 ? std::log(2.0 * std::sqrt(r2)) : -std::numeric_limits<double>::infinity();
    const double phi = std::arg(A);
    cplx W = 0;
    for (Index k = 0; k < M; ++k) {
        if (k > 0 && r2 == 0) break;
        const double kk = static_cast<double>(k);
        double pre = std::exp((k > 0 ? kk * lr : 0.0) - 0.5 * std::lgamma(kk + 1.0) - 2.0 * r2) / std::numbers::pi;
        if (pre == 0) continue;
        const cplx ph = std::polar(1.0, kk * phi);
        double lm1 = 0.0, l0 = 1.0;
        for (Index m = 0; m + k < M; ++m) {
            const double mm = static_cast<double>(m);
            if (m == 1) {
                lm1 = l0;
                l0 = 1.0 + kk - x;
            } else if (m > 1) {
                const double next = ((2.0 * mm - 1.0 + kk - x) * l0 - (mm - 1.0 + kk) * lm1) / mm;
                lm1 = l0;
                l0 = next;
            }
            if (m > 0) pre *= sq[m] / sq[m + k];
            const double val = (m % 2 ? -pre : pre) * l0;
            if (k == 0) {
                W += rho(m, m) * val;
            } else {
                const cplx ker = val * ph;
                if constexpr (Complex)
                    W += rho(m, m + k) * ker + rho(m + k, m) * std::conj(ker);
                else
                    W += 2.0 * (rho(m, m + k) * ker).real();
            }
        }
    }
    return W;
}

}  // namespace

namespace {

std::vector<double> sqrt_table(Index M) {
    std::vector<double> sq(static_cast<size_t>(M));
    for (Index k = 0; k < M; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    return sq;
}

}  // namespace

Eigen::MatrixXd wigner(const FockDensity& rho, const Eigen::VectorXd& q_grid, const Eigen::VectorXd& p_grid) {
    const Index M = support_size(rho.matrix());
    const auto sq = sqrt_table(M);
    Eigen::MatrixXd W(q_grid.size(), p_grid.size());
    for (Index i = 0; i < q_grid.size(); ++i)
        for (Index j = 0; j < p_grid.size(); ++j)
            W(i, j) = wigner_sum<false>(rho.matrix(), M, sq, q_grid(i), p_grid(j)).real();
    return W;
}

cplx wigner_point(const CMatrix& rho, double q, double p) {
    return wigner_sum<true>(rho, rho.rows(), sqrt_table(rho.rows()), q, p);
}

double pure_loss_coherent_information(double eta, const FockDensity& rho) {
    require(eta >= 0 && eta <= 1, "pure_loss_coherent_information: eta must lie in [0,1]");
    return entropy(pure_loss_apply(eta, rho)) - entropy(pure_loss_apply(1.0 - eta, rho));
}

FockDensity dephase_fock(const FockDensity& rho) {
    return FockDensity(CMatrix(rho.matrix().diagonal().asDiagonal()));
}

double entropy(const FockDensity& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double h = 0;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam > 1e-14) h -= lam * std::log2(lam);
    }
    return h;
}

double mean_photon(const FockDensity& rho) {
    double s = 0;
    for (Index k = 0; k < rho.dim(); ++k) s += static_cast<double>(k) * rho.matrix()(k, k).real();
    return s;
}

double purity(const FockDensity& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

double trace_norm_distance(const FockDensity& a, const FockDensity& b) {
    check_same_dim(a.matrix(), b.matrix(), "trace_norm_distance");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

// Built from <a>, <a^2>, <n>, which are exact on the truncated space (q^2 is not).
GaussianStated moments(const FockDensity& rho) {
    const Index n = rho.dim();
    const FockOp a = annihilation(n);
    const cplx ea = (rho.matrix() * a).trace();
    const cplx ea2 = (rho.matrix() * a * a).trace();
    const double en = mean_photon(rho);
    const double s2 = std::sqrt(2.0);
    GaussianStated g;
    g.mean = Eigen::VectorXd(2);
    g.mean << s2 * ea.real(), s2 * ea.imag();
    const double qq = ea2.real() + en + 0.5;  // <q^2>
    const double pp = -ea2.real() + en + 0.5;
    const double qp = ea2.imag();  // <{q,p}>/2
    g.cov = Eigen::MatrixXd(2, 2);
    g.cov << qq - g.mean(0) * g.mean(0), qp - g.mean(0) * g.mean(1), qp - g.mean(0) * g.mean(1),
        pp - g.mean(1) * g.mean(1);
    return g;
}

}  // namespace bosonic
