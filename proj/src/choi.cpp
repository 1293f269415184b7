#include "bosonic/choi.hpp"

#include <cmath>
#include <random>

#include "bosonic/errors.hpp"

namespace bosonic {

using Eigen::Index;

ChoiMatrix::ChoiMatrix(Index dim_in, Index dim_out, CMatrix X) : din_(dim_in), dout_(dim_out), X_(std::move(X)) {
    require(din_ >= 1 && dout_ >= 1, "ChoiMatrix: dimensions must be positive");
    require(X_.rows() == din_ * dout_ && X_.cols() == din_ * dout_, "ChoiMatrix: matrix size does not match dims");
}

CMatrix partial_trace_out(const CMatrix& X, Index din, Index dout) {
    CMatrix R = CMatrix::Zero(din, din);
    for (Index a = 0; a < din; ++a)
        for (Index b = 0; b < din; ++b) R(a, b) = X.block(a * dout, b * dout, dout, dout).trace();
    return R;
}

CMatrix partial_trace_in(const CMatrix& X, Index din, Index dout) {
    CMatrix R = CMatrix::Zero(dout, dout);
    for (Index a = 0; a < din; ++a) R += X.block(a * dout, a * dout, dout, dout);
    return R;
}

CptpReport check_cptp(const ChoiMatrix& X) {
    CptpReport r;
    const CMatrix& m = X.matrix();
    r.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.tp_residual = (partial_trace_out(m, X.dim_in(), X.dim_out()) - CMatrix::Identity(X.dim_in(), X.dim_in()))
                        .cwiseAbs()
                        .maxCoeff();
    return r;
}

ChoiMatrix choi_from_kraus(const std::vector<CMatrix>& kraus, Index dim_in, Index dim_out) {
    require(!kraus.empty(), "choi_from_kraus: empty Kraus list");
    CMatrix completeness = CMatrix::Zero(dim_in, dim_in);
    CMatrix X = CMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
    CVector v(dim_in * dim_out);
    for (const auto& K : kraus) {
        require(K.rows() == dim_out && K.cols() == dim_in, "choi_from_kraus: Kraus operator has wrong shape");
        completeness.noalias() += K.adjoint() * K;
        for (Index i = 0; i < dim_in; ++i)
            for (Index j = 0; j < dim_out; ++j) v(i * dim_out + j) = K(j, i);
        X.noalias() += v * v.adjoint();
    }
    if ((completeness - CMatrix::Identity(dim_in, dim_in)).cwiseAbs().maxCoeff() > 1e-10)
        throw DomainError("choi_from_kraus: Kraus operators are not complete");
    return ChoiMatrix(dim_in, dim_out, std::move(X));
}

ChoiMatrix unitary_choi(const CMatrix& U) { return choi_from_kraus({U}, U.cols(), U.rows()); }

ChoiMatrix isometry_choi(const CMatrix& V) { return choi_from_kraus({V}, V.cols(), V.rows()); }

Superoperator choi_to_superop(const ChoiMatrix& X) {
    const Index din = X.dim_in(), dout = X.dim_out();
    Superoperator s{din, dout, CMatrix(dout * dout, din * din)};
    for (Index i = 0; i < din; ++i)
        for (Index j = 0; j < dout; ++j)
            for (Index ip = 0; ip < din; ++ip)
                for (Index jp = 0; jp < dout; ++jp)
                    s.T(j * dout + jp, i * din + ip) = X.matrix()(i * dout + j, ip * dout + jp);
    return s;
}

ChoiMatrix superop_to_choi(const Superoperator& s) {
    const Index din = s.dim_in, dout = s.dim_out;
    require(s.T.rows() == dout * dout && s.T.cols() == din * din, "superop_to_choi: matrix size does not match dims");
    CMatrix X(din * dout, din * dout);
    for (Index i = 0; i < din; ++i)
        for (Index j = 0; j < dout; ++j)
            for (Index ip = 0; ip < din; ++ip)
                for (Index jp = 0; jp < dout; ++jp)
                    X(i * dout + j, ip * dout + jp) = s.T(j * dout + jp, i * din + ip);
    return ChoiMatrix(din, dout, std::move(X));
}

Superoperator compose(const Superoperator& second, const Superoperator& first) {
    require(second.dim_in == first.dim_out, "compose: dimension mismatch");
    return {first.dim_in, second.dim_out, second.T * first.T};
}

CMatrix apply_superop(const Superoperator& s, const CMatrix& rho) {
    require(rho.rows() == s.dim_in && rho.cols() == s.dim_in, "apply_superop: dimension mismatch");
    CVector v(s.dim_in * s.dim_in);
    for (Index i = 0; i < s.dim_in; ++i)
        for (Index ip = 0; ip < s.dim_in; ++ip) v(i * s.dim_in + ip) = rho(i, ip);
    const CVector w = s.T * v;
    CMatrix out(s.dim_out, s.dim_out);
    for (Index j = 0; j < s.dim_out; ++j)
        for (Index jp = 0; jp < s.dim_out; ++jp) out(j, jp) = w(j * s.dim_out + jp);
    return out;
}

FockDensity encoded_state(const ChoiMatrix& XE) {
    return FockDensity::renormalized(partial_trace_in(XE.matrix(), XE.dim_in(), XE.dim_out()) /
                                     static_cast<double>(XE.dim_in()));
}

CMatrix objective_matrix(const CMatrix& T, Index p, Index q) {
    require(T.rows() == p * p && T.cols() == q * q, "objective_matrix: shape mismatch");
    CMatrix C(p * q, p * q);
    for (Index i = 0; i < p; ++i)
        for (Index ip = 0; ip < p; ++ip)
            for (Index j = 0; j < q; ++j)
                for (Index jp = 0; jp < q; ++jp) C(ip * q + jp, i * q + j) = T(i * p + ip, j * q + jp);
    return C;
}

CMatrix f_N(const ChoiMatrix& XN, const ChoiMatrix& XE) {
    require(XN.dim_in() == XE.dim_out(), "f_N: dimension mismatch");
    const CMatrix M = choi_to_superop(XN).T * choi_to_superop(XE).T;
    return objective_matrix(M, XN.dim_out(), XE.dim_in());
}

CMatrix encoder_objective(const ChoiMatrix& XN, const ChoiMatrix& XD) {
    require(XD.dim_in() == XN.dim_out(), "encoder_objective: dimension mismatch");
    const CMatrix P = choi_to_superop(XD).T * choi_to_superop(XN).T;
    return objective_matrix(P, XD.dim_out(), XN.dim_in());
}

double entanglement_fidelity(const ChoiMatrix& XE, const ChoiMatrix& XN, const ChoiMatrix& XD) {
    require(XN.dim_in() == XE.dim_out() && XD.dim_in() == XN.dim_out() && XD.dim_out() == XE.dim_in(),
            "entanglement_fidelity: dimension mismatch");
    const CMatrix NE = choi_to_superop(XN).T * choi_to_superop(XE).T;
    const cplx tr = (choi_to_superop(XD).T * NE).trace();
    const double d = static_cast<double>(XE.dim_in());
    return tr.real() / (d * d);
}

CMatrix haar_isometry(Index n, Index d, std::uint64_t seed) {
    require(n >= d && d >= 1, "haar_isometry: need n >= d >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    CMatrix Z(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const double re = nd(rng), im = nd(rng);
            Z(i, j) = cplx(re, im) / std::sqrt(2.0);
        }
    Eigen::HouseholderQR<CMatrix> qr(Z);
    const CMatrix Q = qr.householderQ();
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    CMatrix U = Q;
    for (Index k = 0; k < n; ++k) {
        const cplx r = R(k, k);
        U.col(k) *= std::abs(r) > 0 ? r / std::abs(r) : cplx(1.0);
    }
    return U.leftCols(d);
}

ChoiMatrix random_isometry_encoding(Index n, Index d, std::uint64_t seed) {
    return isometry_choi(haar_isometry(n, d, seed));
}

}  // namespace bosonic
