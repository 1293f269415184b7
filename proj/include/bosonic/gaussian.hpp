#pragma once
// One-mode Gaussian channels acting on first and second moments.
// Quadratures q = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2; vacuum covariance I/2.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "bosonic/errors.hpp"

namespace bosonic {

template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

// x -> T x + d,  V -> T V T^T + N.
template <typename Scalar = double>
struct ChannelSpec {
    Mat2<Scalar> T = Mat2<Scalar>::Identity();
    Mat2<Scalar> N = Mat2<Scalar>::Zero();
    Vec2<Scalar> d = Vec2<Scalar>::Zero();
};

template <typename Scalar = double>
struct GaussianState {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cov;

    Eigen::Index modes() const { return mean.size() / 2; }
};

using ChannelSpecd = ChannelSpec<double>;
using GaussianStated = GaussianState<double>;

// Block-diagonal [[0,1],[-1,0]] over `modes` modes.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(Eigen::Index modes) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> om =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * modes, 2 * modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        om(2 * k, 2 * k + 1) = Scalar(1);
        om(2 * k + 1, 2 * k) = Scalar(-1);
    }
    return om;
}

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& S, double tol = 1e-10) {
    using Scalar = typename Derived::Scalar;
    if (S.rows() != S.cols() || S.rows() % 2 != 0) return false;
    const auto om = symplectic_form<Scalar>(S.rows() / 2);
    return ((S * om * S.transpose() - om).cwiseAbs().maxCoeff()) <= Scalar(tol);
}

// Uncertainty principle V + i Omega/2 >= 0.
template <typename Scalar>
bool is_physical(const GaussianState<Scalar>& s, double tol = 1e-10) {
    const Eigen::Index n = s.cov.rows();
    if (n == 0 || n % 2 != 0 || s.cov.cols() != n || s.mean.size() != n) return false;
    if ((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() > Scalar(tol)) return false;
    using C = std::complex<Scalar>;
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> h =
        s.cov.template cast<C>() + C(0, Scalar(0.5)) * symplectic_form<Scalar>(n / 2).template cast<C>();
    Eigen::SelfAdjointEigenSolver<decltype(h)> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= Scalar(-tol);
}

template <typename Scalar>
bool is_valid(const ChannelSpec<Scalar>& c, double tol = 1e-12) {
    if ((c.N - c.N.transpose()).cwiseAbs().maxCoeff() > Scalar(tol)) return false;
    Eigen::SelfAdjointEigenSolver<Mat2<Scalar>> es(c.N, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= Scalar(-tol);
}

template <typename Scalar = double>
GaussianState<Scalar> thermal_moments(Scalar nth) {
    require(nth >= 0, "thermal_moments: nth must be >= 0");
    GaussianState<Scalar> s;
    s.mean = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(2);
    s.cov = (nth + Scalar(0.5)) * Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(2, 2);
    return s;
}

template <typename Scalar = double>
GaussianState<Scalar> vacuum_moments() {
    return thermal_moments<Scalar>(Scalar(0));
}

// Coherent state |alpha>: mean sqrt2 (Re alpha, Im alpha), covariance I/2.
template <typename Scalar = double>
GaussianState<Scalar> coherent_moments(std::complex<Scalar> alpha) {
    GaussianState<Scalar> s = vacuum_moments<Scalar>();
    s.mean << std::sqrt(Scalar(2)) * alpha.real(), std::sqrt(Scalar(2)) * alpha.imag();
    return s;
}

template <typename Scalar = double>
ChannelSpec<Scalar> identity_spec() {
    return {};
}

template <typename Scalar = double>
ChannelSpec<Scalar> loss_spec(Scalar eta, Scalar nth) {
    require(eta >= 0 && eta <= 1, "loss_spec: eta must lie in [0,1]");
    require(nth >= 0, "loss_spec: nth must be >= 0");
    ChannelSpec<Scalar> c;
    c.T = std::sqrt(eta) * Mat2<Scalar>::Identity();
    c.N = (1 - eta) * (nth + Scalar(0.5)) * Mat2<Scalar>::Identity();
    return c;
}

template <typename Scalar = double>
ChannelSpec<Scalar> amp_spec(Scalar gain) {
    require(gain >= 1, "amp_spec: gain must be >= 1");
    ChannelSpec<Scalar> c;
    c.T = std::sqrt(gain) * Mat2<Scalar>::Identity();
    c.N = (gain - 1) / 2 * Mat2<Scalar>::Identity();
    return c;
}

template <typename Scalar = double>
ChannelSpec<Scalar> displacement_spec(Scalar sigma2) {
    require(sigma2 >= 0, "displacement_spec: sigma2 must be >= 0");
    ChannelSpec<Scalar> c;
    c.N = sigma2 * Mat2<Scalar>::Identity();
    return c;
}

template <typename Scalar = double>
Mat2<Scalar> rotation_matrix(Scalar theta) {
    Mat2<Scalar> r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

template <typename Scalar = double>
ChannelSpec<Scalar> rotation_spec(Scalar theta) {
    ChannelSpec<Scalar> c;
    c.T = rotation_matrix(theta);
    return c;
}

// second o first: `first` acts on the state before `second`.
template <typename Scalar>
ChannelSpec<Scalar> compose(const ChannelSpec<Scalar>& second, const ChannelSpec<Scalar>& first) {
    ChannelSpec<Scalar> c;
    c.T = second.T * first.T;
    c.N = second.T * first.N * second.T.transpose() + second.N;
    c.d = second.T * first.d + second.d;
    return c;
}

// a * b reads like operator composition: b first, then a.
template <typename Scalar>
ChannelSpec<Scalar> operator*(const ChannelSpec<Scalar>& a, const ChannelSpec<Scalar>& b) {
    return compose(a, b);
}

template <typename Scalar>
GaussianState<Scalar> apply(const ChannelSpec<Scalar>& c, const GaussianState<Scalar>& s) {
    require(s.modes() == 1, "apply: one-mode state expected");
    GaussianState<Scalar> out;
    out.mean = c.T * s.mean + c.d;
    out.cov = c.T * s.cov * c.T.transpose() + c.N;
    return out;
}

template <typename Scalar>
Scalar max_abs_diff(const ChannelSpec<Scalar>& a, const ChannelSpec<Scalar>& b) {
    return std::max({(a.T - b.T).cwiseAbs().maxCoeff(), (a.N - b.N).cwiseAbs().maxCoeff(),
                     (a.d - b.d).cwiseAbs().maxCoeff()});
}

// Mode ordering (q1, p1, q2, p2); mode 1 is the system.
template <typename Scalar = double>
Mat4<Scalar> beam_splitter_symplectic(Scalar eta) {
    require(eta >= 0 && eta <= 1, "beam_splitter_symplectic: eta must lie in [0,1]");
    const Scalar t = std::sqrt(eta), r = std::sqrt(1 - eta);
    Mat4<Scalar> s = Mat4<Scalar>::Zero();
    s.template block<2, 2>(0, 0) = t * Mat2<Scalar>::Identity();
    s.template block<2, 2>(0, 2) = r * Mat2<Scalar>::Identity();
    s.template block<2, 2>(2, 0) = -r * Mat2<Scalar>::Identity();
    s.template block<2, 2>(2, 2) = t * Mat2<Scalar>::Identity();
    return s;
}

template <typename Scalar = double>
Mat4<Scalar> two_mode_squeezer_symplectic(Scalar gain) {
    require(gain >= 1, "two_mode_squeezer_symplectic: gain must be >= 1");
    const Scalar c = std::sqrt(gain), s = std::sqrt(gain - 1);
    Mat2<Scalar> z;
    z << 1, 0, 0, -1;
    Mat4<Scalar> out;
    out << c * Mat2<Scalar>::Identity(), s * z, s * z, c * Mat2<Scalar>::Identity();
    return out;
}

// Reduce a two-mode symplectic unitary with a Gaussian environment in mode 2.
template <typename Scalar>
ChannelSpec<Scalar> spec_from_dilation(const Mat4<Scalar>& S, const GaussianState<Scalar>& env,
                                       const Vec2<Scalar>& dx = Vec2<Scalar>::Zero()) {
    require(is_symplectic(S), "spec_from_dilation: S is not symplectic");
    require(env.modes() == 1 && is_physical(env), "spec_from_dilation: invalid environment state");
    const Mat2<Scalar> sxy = S.template block<2, 2>(0, 2);
    ChannelSpec<Scalar> c;
    c.T = S.template block<2, 2>(0, 0);
    c.N = sxy * env.cov * sxy.transpose();
    c.d = sxy * env.mean + dx;
    return c;
}

// loss(eta, nth) = amp(gain) o loss(eta_prime, 0)
template <typename Scalar = double>
struct PostAmpDecomposition {
    Scalar eta_prime;
    Scalar gain;
};

// loss(eta, nth) = loss(eta_tilde, 0) o amp(gain)
template <typename Scalar = double>
struct PreAmpDecomposition {
    Scalar gain;
    Scalar eta_tilde;
};

// loss(eta, nth) = amp(post_gain) o loss(eta_bar, 0) o amp(pre_gain)
template <typename Scalar = double>
struct GeneralDecomposition {
    Scalar post_gain;
    Scalar eta_bar;
    Scalar pre_gain;
};

template <typename Scalar>
PostAmpDecomposition<Scalar> decompose_post_amp(Scalar eta, Scalar nth) {
    require(eta >= 0 && eta < 1, "decompose_post_amp: eta must lie in [0,1)");
    require(nth >= 0, "decompose_post_amp: nth must be >= 0");
    const Scalar g = (1 - eta) * nth + 1;
    return {eta / g, g};
}

template <typename Scalar>
PreAmpDecomposition<Scalar> decompose_pre_amp(Scalar eta, Scalar nth) {
    require(eta >= 0 && eta <= 1 && nth >= 0, "decompose_pre_amp: parameters out of range");
    const Scalar et = eta - (1 - eta) * nth;
    if (!(et > 0)) throw DomainError("decompose_pre_amp: zero-capacity regime (eta - (1-eta) nth <= 0)");
    return {eta / et, et};
}

template <typename Scalar>
GeneralDecomposition<Scalar> decompose_general(Scalar eta, Scalar nth, Scalar post_gain) {
    require(eta >= 0 && eta < 1 && nth >= 0, "decompose_general: parameters out of range");
    const Scalar hi = 1 + (1 - eta) * nth;
    require(post_gain >= 1 && post_gain <= hi, "decompose_general: post gain outside [1, 1+(1-eta) nth]");
    const Scalar lossy = (1 - eta) * (nth + 1);
    const Scalar denom = post_gain - lossy;
    if (!(denom > 0)) throw DomainError("decompose_general: zero-capacity regime");
    // pre gain is >= 1 on the admissible range; absorb rounding at the top endpoint
    return {post_gain, 1 - lossy / post_gain, std::max(Scalar(1), eta / denom)};
}

}  // namespace bosonic
