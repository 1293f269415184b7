#include <doctest.h>

#include <numbers>
#include <random>

#include "bosonic/gaussian.hpp"

using namespace bosonic;
using doctest::Approx;

namespace {

ChannelSpecd random_valid_spec(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    ChannelSpecd c;
    c.T << nd(rng), nd(rng), nd(rng), nd(rng);
    Mat2<double> a;
    a << nd(rng), nd(rng), nd(rng), nd(rng);
    c.N = a * a.transpose();
    c.d << nd(rng), nd(rng);
    return c;
}

bool spec_equal(const ChannelSpecd& a, const ChannelSpecd& b, double tol) { return max_abs_diff(a, b) <= tol; }

void check_scalar_spec(const ChannelSpecd& c, double t, double n) {
    CHECK(spec_equal(c, ChannelSpecd{t * Mat2<double>::Identity(), n * Mat2<double>::Identity(), Vec2<double>::Zero()},
                     1e-12));
}

}  // namespace

TEST_CASE("loss_spec examples") {
    check_scalar_spec(loss_spec(1.0, 5.0), 1.0, 0.0);
    check_scalar_spec(loss_spec(0.9, 1.0), std::sqrt(0.9), 0.15);
    CHECK(loss_spec(0.9, 1.0).T(0, 0) == Approx(0.9487).epsilon(1e-4));
    check_scalar_spec(loss_spec(0.0, 0.0), 0.0, 0.5);
    CHECK_THROWS_AS(loss_spec(1.1, 0.0), DomainError);
    CHECK_THROWS_AS(loss_spec(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS(loss_spec(0.5, -1.0), DomainError);
}

TEST_CASE("amp_spec examples") {
    check_scalar_spec(amp_spec(1.0), 1.0, 0.0);
    check_scalar_spec(amp_spec(2.0), std::sqrt(2.0), 0.5);
    CHECK(amp_spec(1.0 / 0.9).N(0, 0) == Approx(1.0 / 18.0).epsilon(1e-12));
    CHECK_THROWS_AS(amp_spec(0.99), DomainError);
}

TEST_CASE("displacement_spec examples") {
    CHECK(spec_equal(displacement_spec(0.0), identity_spec(), 0.0));
    const auto out = apply(displacement_spec(1.0), vacuum_moments());
    CHECK((out.cov - 1.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    check_scalar_spec(displacement_spec(0.25), 1.0, 0.25);
    CHECK_THROWS_AS(displacement_spec(-1e-3), DomainError);
}

TEST_CASE("rotation_spec examples") {
    CHECK(spec_equal(rotation_spec(0.0), identity_spec(), 0.0));
    check_scalar_spec(rotation_spec(std::numbers::pi), -1.0, 0.0);
    Mat2<double> quarter;
    quarter << 0, -1, 1, 0;
    CHECK((rotation_spec(std::numbers::pi / 2).T - quarter).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("compose: loss followed by amplification is a displacement channel") {
    const double eta = 0.5;
    const auto c = compose(amp_spec(1.0 / eta), loss_spec(eta, 0.0));
    CHECK(spec_equal(c, displacement_spec(1.0), 1e-12));
}

TEST_CASE("compose: amplification followed by loss is a displacement channel with less noise") {
    const double eta = 0.5, nth = 1.0;
    const auto c = compose(loss_spec(eta, nth), amp_spec(1.0 / eta));
    CHECK(spec_equal(c, displacement_spec((1 - eta) * (nth + 1)), 1e-12));
    CHECK(spec_equal(c, displacement_spec(1.0), 1e-12));
}

TEST_CASE("compose: ordering and identity") {
    std::mt19937_64 rng(2);
    const auto x = random_valid_spec(rng);
    CHECK(spec_equal(compose(identity_spec(), x), x, 0.0));
    CHECK(spec_equal(compose(x, identity_spec()), x, 0.0));
    // displacement then scaling differs from scaling then displacement
    ChannelSpecd shift;
    shift.d << 1.0, 0.0;
    const auto scale = loss_spec(0.25, 0.0);
    CHECK(compose(scale, shift).d(0) == Approx(0.5));
    CHECK(compose(shift, scale).d(0) == Approx(1.0));
    CHECK(spec_equal(scale * shift, compose(scale, shift), 0.0));
}

TEST_CASE("spec_from_dilation reductions") {
    for (double eta : {0.0, 0.3, 0.9, 1.0})
        for (double nth : {0.0, 0.5, 3.0})
            CHECK(spec_equal(spec_from_dilation(beam_splitter_symplectic(eta), thermal_moments(nth)), loss_spec(eta, nth),
                             1e-12));
    for (double g : {1.0, 1.5, 4.0})
        CHECK(spec_equal(spec_from_dilation(two_mode_squeezer_symplectic(g), vacuum_moments()), amp_spec(g), 1e-12));

    GaussianStated env = coherent_moments(std::complex<double>(0.3, -1.2));
    const auto id = spec_from_dilation(Mat4<double>(Mat4<double>::Identity()), env);
    CHECK(spec_equal(id, identity_spec(), 0.0));

    Mat4<double> bad = 2.0 * Mat4<double>::Identity();
    CHECK_THROWS_AS(spec_from_dilation(bad, vacuum_moments()), DomainError);
}

TEST_CASE("apply examples") {
    const auto th = thermal_moments(2.0);
    const auto same = apply(identity_spec(), th);
    CHECK((same.cov - th.cov).norm() == 0.0);
    for (double eta : {0.2, 0.7}) {
        const auto out = apply(loss_spec(eta, 0.0), thermal_moments(3.0));
        CHECK(out.cov(0, 0) == Approx(eta * 3.0 + 0.5).epsilon(1e-14));
        CHECK(out.cov(1, 1) == Approx(eta * 3.0 + 0.5).epsilon(1e-14));
        CHECK(out.cov(0, 1) == 0.0);
    }
    const auto v = apply(displacement_spec(0.4), vacuum_moments());
    CHECK(v.cov(0, 0) == Approx(0.9));
    const auto coh = apply(loss_spec(0.64, 0.0), coherent_moments(std::complex<double>(1.0, 0.0)));
    CHECK(coh.mean(0) == Approx(0.8 * std::sqrt(2.0)));
}

TEST_CASE("decompose_post_amp examples") {
    auto a = decompose_post_amp(0.9, 1.0);
    CHECK(a.eta_prime == Approx(9.0 / 11.0).epsilon(1e-14));
    CHECK(a.gain == Approx(1.1).epsilon(1e-14));
    a = decompose_post_amp(0.6, 0.0);
    CHECK(a.eta_prime == 0.6);
    CHECK(a.gain == 1.0);
    a = decompose_post_amp(0.5, 2.0);
    CHECK(a.eta_prime == Approx(0.25));
    CHECK(a.gain == Approx(2.0));
}

TEST_CASE("decompose_pre_amp examples") {
    auto b = decompose_pre_amp(0.9, 1.0);
    CHECK(b.eta_tilde == Approx(0.8).epsilon(1e-14));
    CHECK(b.gain == Approx(1.125).epsilon(1e-14));
    b = decompose_pre_amp(0.7, 0.0);
    CHECK(b.gain == 1.0);
    CHECK(b.eta_tilde == 0.7);
    CHECK_THROWS_AS(decompose_pre_amp(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(decompose_pre_amp(0.4, 1.0), DomainError);
}

TEST_CASE("decompose_general examples and endpoints") {
    const auto c = decompose_general(0.9, 1.0, 1.05);
    CHECK(c.eta_bar == Approx(1 - 0.2 / 1.05).epsilon(1e-14));
    CHECK(c.eta_bar == Approx(0.809524).epsilon(1e-6));
    CHECK(c.pre_gain == Approx(0.9 / 0.85).epsilon(1e-14));
    CHECK(c.pre_gain == Approx(1.058824).epsilon(1e-6));

    const double eta = 0.8, nth = 1.5;
    const auto lo = decompose_general(eta, nth, 1.0);
    const auto pre = decompose_pre_amp(eta, nth);
    CHECK(lo.eta_bar == Approx(pre.eta_tilde).epsilon(1e-14));
    CHECK(lo.pre_gain == Approx(pre.gain).epsilon(1e-14));

    const auto hi = decompose_general(eta, nth, 1 + (1 - eta) * nth);
    const auto post = decompose_post_amp(eta, nth);
    CHECK(hi.pre_gain == Approx(1.0).epsilon(1e-14));
    CHECK(hi.eta_bar == Approx(post.eta_prime).epsilon(1e-14));
    CHECK(hi.post_gain == Approx(post.gain).epsilon(1e-14));

    CHECK_THROWS_AS(decompose_general(0.9, 1.0, 0.99), DomainError);
    CHECK_THROWS_AS(decompose_general(0.9, 1.0, 1.2), DomainError);
}

TEST_CASE("property: composition is associative") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_valid_spec(rng), b = random_valid_spec(rng), c = random_valid_spec(rng);
        CHECK(max_abs_diff(compose(a, compose(b, c)), compose(compose(a, b), c)) <= 1e-12);
    }
}

TEST_CASE("property: pure loss is multiplicative") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        const double e1 = u(rng), e2 = u(rng);
        CHECK(spec_equal(compose(loss_spec(e1, 0.0), loss_spec(e2, 0.0)), loss_spec(e1 * e2, 0.0), 1e-12));
    }
}

TEST_CASE("property: all three decompositions recompose to the thermal-loss channel") {
    for (double eta : {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95})
        for (double nth : {0.0, 0.5, 1.0, 2.0}) {
            CAPTURE(eta);
            CAPTURE(nth);
            const auto target = loss_spec(eta, nth);
            const auto post = decompose_post_amp(eta, nth);
            CHECK(spec_equal(compose(amp_spec(post.gain), loss_spec(post.eta_prime, 0.0)), target, 1e-12));
            if (eta - (1 - eta) * nth > 0) {
                const auto pre = decompose_pre_amp(eta, nth);
                CHECK(spec_equal(compose(loss_spec(pre.eta_tilde, 0.0), amp_spec(pre.gain)), target, 1e-12));
                const double hi = 1 + (1 - eta) * nth;
                for (int k = 0; k <= 8; ++k) {
                    const double g1 = std::min(hi, 1 + (hi - 1) * k / 8.0);
                    if (!(g1 - (1 - eta) * (nth + 1) > 0)) continue;
                    const auto gen = decompose_general(eta, nth, g1);
                    const auto c =
                        compose(amp_spec(gen.post_gain), compose(loss_spec(gen.eta_bar, 0.0), amp_spec(gen.pre_gain)));
                    CHECK(spec_equal(c, target, 1e-12));
                }
            }
        }
}

TEST_CASE("property: rotation commutes with pure loss") {
    for (double th : {0.1, 1.0, 2.5, -0.7})
        for (double eta : {0.2, 0.8})
            CHECK(spec_equal(compose(rotation_spec(th), loss_spec(eta, 0.0)), compose(loss_spec(eta, 0.0), rotation_spec(th)),
                             1e-14));
}

TEST_CASE("property: composed noise stays positive semidefinite") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        ChannelSpecd c = identity_spec();
        for (int k = 0; k < 4; ++k) {
            switch (rng() % 4) {
                case 0: c = compose(loss_spec(u(rng), 3 * u(rng)), c); break;
                case 1: c = compose(amp_spec(1 + 3 * u(rng)), c); break;
                case 2: c = compose(displacement_spec(u(rng)), c); break;
                default: c = compose(rotation_spec(6 * u(rng)), c); break;
            }
        }
        CHECK(is_valid(c));
    }
}

TEST_CASE("state validity") {
    CHECK(is_physical(vacuum_moments()));
    CHECK(is_physical(thermal_moments(2.0)));
    GaussianStated squeezed_too_much = vacuum_moments();
    squeezed_too_much.cov(0, 0) = 0.1;
    CHECK_FALSE(is_physical(squeezed_too_much));
    CHECK(is_symplectic(beam_splitter_symplectic(0.3)));
    CHECK(is_symplectic(two_mode_squeezer_symplectic(2.5)));
    CHECK_FALSE(is_symplectic(Eigen::Matrix4d(2.0 * Eigen::Matrix4d::Identity())));
}

TEST_CASE("single precision instantiation") {
    const auto c = compose(amp_spec(2.0f), loss_spec(0.5f, 0.0f));
    CHECK(c.N(0, 0) == Approx(1.0f).epsilon(1e-6));
}
