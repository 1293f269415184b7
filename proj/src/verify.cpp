#include "bosonic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "bosonic/biconvex.hpp"
#include "bosonic/capacity.hpp"
#include "bosonic/choi.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/gaussian.hpp"

namespace bosonic {

using Eigen::Index;

namespace {

using Rng = std::mt19937_64;

ChannelSpecd random_spec(Rng& rng) {
    std::normal_distribution<double> nd;
    ChannelSpecd c;
    for (int i = 0; i < 2; ++i) {
        c.d(i) = nd(rng);
        for (int j = 0; j < 2; ++j) c.T(i, j) = nd(rng);
    }
    Mat2<double> a;
    a << nd(rng), nd(rng), nd(rng), nd(rng);
    c.N = a * a.transpose();
    return c;
}

CMatrix random_density(Index n, Index support, Rng& rng) {
    std::normal_distribution<double> nd;
    CMatrix g = CMatrix::Zero(n, support);
    for (Index i = 0; i < support; ++i)
        for (Index j = 0; j < support; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

CMatrix random_hermitian(Index n, Rng& rng) {
    std::normal_distribution<double> nd;
    CMatrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return 0.5 * (a + a.adjoint());
}

// Kraus operators of a random channel C^m -> C^m with k terms, cut from a Haar isometry.
std::vector<CMatrix> random_kraus(Index m, Index k, std::uint64_t seed) {
    const CMatrix V = haar_isometry(m * k, m, seed);
    std::vector<CMatrix> out;
    for (Index l = 0; l < k; ++l) out.push_back(V.middleRows(l * m, m));
    return out;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

const std::vector<double> kEtaGrid{0.55, 0.65, 0.75, 0.85, 0.95};
const std::vector<double> kNthGrid{0.0, 0.5, 1.0, 2.0};

double gaussian_associativity() {
    Rng rng(11);
    double err = 0;
    for (int t = 0; t < 50; ++t) {
        const auto a = random_spec(rng), b = random_spec(rng), c = random_spec(rng);
        err = std::max(err, max_abs_diff(a * (b * c), (a * b) * c));
    }
    return err;
}

double loss_multiplicativity() {
    double err = 0;
    for (double e1 : kEtaGrid)
        for (double e2 : kEtaGrid)
            err = std::max(err, max_abs_diff(loss_spec(e1, 0.0) * loss_spec(e2, 0.0), loss_spec(e1 * e2, 0.0)));
    return err;
}

double recomposition(int which) {
    double err = 0;
    for (double eta : kEtaGrid)
        for (double nth : kNthGrid) {
            const auto target = loss_spec(eta, nth);
            if (which == 0) {
                const auto dec = decompose_post_amp(eta, nth);
                err = std::max(err, max_abs_diff(amp_spec(dec.gain) * loss_spec(dec.eta_prime, 0.0), target));
            } else if (which == 1) {
                if (!(eta - (1 - eta) * nth > 0)) continue;
                const auto dec = decompose_pre_amp(eta, nth);
                err = std::max(err, max_abs_diff(loss_spec(dec.eta_tilde, 0.0) * amp_spec(dec.gain), target));
            } else {
                const double hi = 1 + (1 - eta) * nth;
                for (int k = 0; k <= 4; ++k) {
                    const double g1 = std::min(hi, 1 + (hi - 1) * k / 4.0);
                    if (!(g1 - (1 - eta) * (nth + 1) > 0)) continue;
                    const auto dec = decompose_general(eta, nth, g1);
                    const auto c = amp_spec(dec.post_gain) * loss_spec(dec.eta_bar, 0.0) * amp_spec(dec.pre_gain);
                    err = std::max(err, max_abs_diff(c, target));
                }
            }
        }
    return err;
}

double beam_splitter_dilation() {
    double err = 0;
    for (double eta : kEtaGrid)
        for (double nth : kNthGrid)
            err = std::max(err, max_abs_diff(spec_from_dilation(beam_splitter_symplectic(eta), thermal_moments(nth)),
                                             loss_spec(eta, nth)));
    return err;
}

double squeezer_dilation() {
    double err = 0;
    for (double g : {1.0, 1.25, 2.0, 5.0})
        err = std::max(err, max_abs_diff(spec_from_dilation(two_mode_squeezer_symplectic(g), vacuum_moments()),
                                         amp_spec(g)));
    return err;
}

double thermal_loss_moments() {
    const auto rho = FockDensity::pure(coherent_state(1.0, 60));
    const auto out = moments(thermal_loss_apply(0.8, 0.5, rho, 40));
    const auto ref = apply(loss_spec(0.8, 0.5), coherent_moments(cplx(1.0)));
    return std::max((out.mean - ref.mean).cwiseAbs().maxCoeff(), (out.cov - ref.cov).cwiseAbs().maxCoeff());
}

double displacement_on_vacuum() {
    CVector vac = CVector::Zero(40);
    vac(0) = 1.0;
    const auto out = moments(random_displacement_apply(0.25, FockDensity::pure(vac)));
    const auto ref = apply(displacement_spec(0.25), vacuum_moments());
    return std::max(out.mean.cwiseAbs().maxCoeff(), (out.cov - ref.cov).cwiseAbs().maxCoeff());
}

double kraus_vs_dilation() {
    Rng rng(7);
    double err = 0;
    for (int t = 0; t < 3; ++t) {
        const FockDensity rho(random_density(12, 4, rng));
        for (double eta : {0.3, 0.7, 0.95})
            err = std::max(err, trace_norm_distance(pure_loss_apply(eta, rho), thermal_loss_apply(eta, 0.0, rho, 12)));
    }
    return err;
}

double thermal_entropy() {
    double err = 0;
    for (double nth : {0.5, 1.0, 2.0}) err = std::max(err, std::abs(entropy(thermal_state(nth, 120)) - g_entropy(nth)));
    return err;
}

double reshuffle_round_trip() {
    Rng rng(3);
    double err = 0;
    for (auto [din, dout] : {std::pair<Index, Index>{2, 3}, {3, 2}, {4, 4}}) {
        const ChoiMatrix X(din, dout, random_hermitian(din * dout, rng));
        err = std::max(err, max_abs(superop_to_choi(choi_to_superop(X)).matrix() - X.matrix()));
    }
    return err;
}

double superop_composition() {
    double err = 0;
    for (std::uint64_t s = 0; s < 4; ++s) {
        const auto A = random_kraus(3, 2, 100 + s), B = random_kraus(3, 3, 200 + s);
        std::vector<CMatrix> BA;
        for (const auto& b : B)
            for (const auto& a : A) BA.push_back(b * a);
        const auto direct = choi_to_superop(choi_from_kraus(BA, 3, 3));
        const auto prod = compose(choi_to_superop(choi_from_kraus(B, 3, 3)), choi_to_superop(choi_from_kraus(A, 3, 3)));
        err = std::max(err, max_abs(direct.T - prod.T));
    }
    return err;
}

double unitary_superop_action() {
    Rng rng(5);
    const CMatrix U = haar_isometry(4, 4, 77);
    const auto T = choi_to_superop(unitary_choi(U));
    const CMatrix rho = random_density(4, 4, rng);
    return max_abs(apply_superop(T, rho) - U * rho * U.adjoint());
}

double lower_below_upper() {
    double worst = 0;
    for (double eta : kEtaGrid)
        for (double nth : kNthGrid)
            for (auto nb : {PhotonBudget::at_most(1.0), PhotonBudget::at_most(10.0), PhotonBudget::unbounded()}) {
                const auto bp = evaluate_bounds(eta, nth, nb);
                double upper = std::min({bp.hw, bp.dp, bp.idp});
                if (!std::isnan(bp.odp)) upper = std::min(upper, bp.odp);
                worst = std::max(worst, bp.lower_ci - upper);
            }
    return std::max(worst, 0.0);
}

// Closed two-g form of the energy-constrained improved bound against its compositional evaluation.
double idp_two_g() {
    double err = 0;
    for (double eta : kEtaGrid)
        for (double nth : kNthGrid)
            for (double nb : {0.5, 1.0, 3.0, 10.0}) {
                const double et = eta - (1 - eta) * nth;
                if (!(et > 0)) continue;
                const double a = eta * nb + (1 - eta) * nth;
                const double closed = std::max(g_entropy(a) - g_entropy((1 - eta) * (nth + 1) * a / et), 0.0);
                err = std::max(err, std::abs(closed - idp_bound(eta, nth, PhotonBudget::at_most(nb))));
            }
    return err;
}

double fidelity_adjoint() {
    Rng rng(9);
    const Index n = 4, d = 2;
    const auto XN = pure_loss_choi(0.8, n);
    double err = 0;
    for (int t = 0; t < 3; ++t) {
        const ChoiMatrix XE(d, n, random_hermitian(d * n, rng)), XD(n, d, random_hermitian(n * d, rng));
        const cplx a = (XE.matrix() * encoder_objective(XN, XD)).trace();
        const cplx b = (XD.matrix() * f_N(XN, XE)).trace();
        err = std::max(err, std::abs(a - b));
    }
    return err;
}

}  // namespace

std::vector<CheckResult> run_verification(double tolerance_scale) {
    struct Entry {
        const char* name;
        std::function<double()> measure;
        double tol;
    };
    const std::vector<Entry> entries{
        {"gaussian.compose_associativity", gaussian_associativity, 1e-12},
        {"gaussian.pure_loss_multiplicative", loss_multiplicativity, 1e-12},
        {"gaussian.post_amp_recomposition", [] { return recomposition(0); }, 1e-12},
        {"gaussian.pre_amp_recomposition", [] { return recomposition(1); }, 1e-12},
        {"gaussian.general_recomposition", [] { return recomposition(2); }, 1e-12},
        {"gaussian.beam_splitter_dilation", beam_splitter_dilation, 1e-12},
        {"gaussian.two_mode_squeezer_dilation", squeezer_dilation, 1e-12},
        {"fock.thermal_loss_moments", thermal_loss_moments, 1e-6},
        {"fock.displacement_channel_vacuum", displacement_on_vacuum, 1e-5},
        {"fock.kraus_vs_dilation", kraus_vs_dilation, 1e-6},
        {"fock.thermal_entropy", thermal_entropy, 1e-6},
        {"choi.reshuffle_round_trip", reshuffle_round_trip, 0.0},
        {"choi.superop_composition", superop_composition, 1e-9},
        {"choi.unitary_superop_action", unitary_superop_action, 1e-12},
        {"capacity.lower_below_upper", lower_below_upper, 1e-9},
        {"capacity.idp_two_g", idp_two_g, 1e-12},
        {"biconvex.fidelity_adjoint", fidelity_adjoint, 1e-9},
    };
    std::vector<CheckResult> out;
    for (const auto& e : entries) {
        double err;
        try {
            err = e.measure();
        } catch (const std::exception&) {
            err = std::numeric_limits<double>::infinity();
        }
        const double tol = e.tol * tolerance_scale;
        out.push_back({e.name, err, tol, err <= tol});
    }
    return out;
}

}  // namespace bosonic
