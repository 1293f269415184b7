#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "bosonic/capacity.hpp"
#include "bosonic/fock.hpp"

using namespace bosonic;
using doctest::Approx;

namespace {

const PhotonBudget kInfBudget = PhotonBudget::unbounded();
PhotonBudget at(double n) { return PhotonBudget::at_most(n); }

// Direct (x+1)log(x+1) - x log x, independent of the library's rearrangement.
double g_direct(double x) { return x == 0 ? 0.0 : (x + 1) * std::log2(x + 1) - x * std::log2(x); }

}  // namespace

TEST_CASE("g_entropy examples") {
    CHECK(g_entropy(0.0) == 0.0);
    CHECK(g_entropy(1.0) == Approx(2.0).epsilon(1e-15));
    CHECK(g_entropy(3.0) == Approx(8.0 - 3.0 * std::log2(3.0)).epsilon(1e-14));
    CHECK(g_entropy(3.0) == Approx(3.245112).epsilon(1e-6));
    CHECK(g_entropy(1e-13) == 0.0);
    for (double x : {1e-6, 0.1, 2.5, 40.0, 1e4}) CHECK(g_entropy(x) == Approx(g_direct(x)).epsilon(1e-10));
    // large-x asymptote log2(x) + log2(e)
    CHECK(g_entropy(1e12) == Approx(std::log2(1e12) + 1 / std::log(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(g_entropy(-1e-3), DomainError);
}

TEST_CASE("pure_loss_capacity examples") {
    CHECK(pure_loss_capacity(0.5, kInfBudget) == 0.0);
    CHECK(pure_loss_capacity(0.9, kInfBudget) == Approx(std::log2(9.0)).epsilon(1e-12));
    CHECK(pure_loss_capacity(0.9, kInfBudget) == Approx(3.169925).epsilon(1e-6));
    CHECK(pure_loss_capacity(0.9, at(1.0)) == Approx(g_direct(0.9) - g_direct(0.1)).epsilon(1e-12));
    CHECK(pure_loss_capacity(0.9, at(1.0)) == Approx(1.412755).epsilon(1e-6));
    CHECK(std::isinf(pure_loss_capacity(1.0, kInfBudget)));
    CHECK(pure_loss_capacity(0.3, at(2.0)) == 0.0);
}

TEST_CASE("thermal_loss_ci_lower examples") {
    CHECK(thermal_loss_ci_lower(0.9, 1.0, kInfBudget) == Approx(std::log2(9.0) - 2.0).epsilon(1e-12));
    CHECK(thermal_loss_ci_lower(0.9, 1.0, kInfBudget) == Approx(1.169925).epsilon(1e-6));
    for (double eta : {0.6, 0.8, 0.95})
        CHECK(thermal_loss_ci_lower(eta, 0.0, kInfBudget) == Approx(pure_loss_capacity(eta, kInfBudget)));
    CHECK(std::abs(thermal_loss_ci_lower(0.9, 1.0, at(1e6)) - thermal_loss_ci_lower(0.9, 1.0, kInfBudget)) < 1e-3);
    // finite-budget branch reduces to the pure-loss formula at nth = 0
    for (double n : {0.5, 1.0, 4.0})
        CHECK(thermal_loss_ci_lower(0.8, 0.0, at(n)) == Approx(pure_loss_capacity(0.8, at(n))).epsilon(1e-12));
}

TEST_CASE("hw_bound examples") {
    CHECK(hw_bound(0.9, 0.0) == Approx(std::log2(19.0)).epsilon(1e-12));
    CHECK(hw_bound(0.9, 0.0) == Approx(4.247928).epsilon(1e-6));
    CHECK(hw_bound(0.9, 1.0) == Approx(std::log2(1.9 / 0.3)).epsilon(1e-12));
    CHECK(hw_bound(0.9, 1.0) == Approx(2.662965).epsilon(1e-6));
    CHECK(hw_bound(1.0 / 3.0, 0.0) == Approx(1.0).epsilon(1e-12));
    CHECK(hw_bound(0.9, 1e9) == 0.0);
    CHECK(hw_bound(0.9, INFINITY) == 0.0);
}

TEST_CASE("dp_bound examples") {
    CHECK(dp_bound(0.9, 1.0, kInfBudget) == Approx(std::log2(4.5)).epsilon(1e-12));
    CHECK(dp_bound(0.9, 1.0, kInfBudget) == Approx(2.169925).epsilon(1e-6));
    for (double n : {0.5, 1.0, 5.0}) CHECK(dp_bound(0.8, 0.0, at(n)) == Approx(pure_loss_capacity(0.8, at(n))));
    CHECK(dp_bound(0.9, 1.0, at(1.0)) == Approx(g_direct(9.0 / 11.0) - g_direct(2.0 / 11.0)).epsilon(1e-12));
    CHECK(dp_bound(0.9, 1.0, at(1.0)) == Approx(1.073047).epsilon(1e-6));
}

TEST_CASE("idp_bound examples") {
    CHECK(idp_bound(0.9, 1.0, kInfBudget) == Approx(2.0).epsilon(1e-12));
    CHECK(idp_bound(0.9, 1.0, kInfBudget) < dp_bound(0.9, 1.0, kInfBudget));
    CHECK(idp_bound(0.5, 1.0, kInfBudget) == 0.0);
    CHECK(idp_bound(0.5, 1.0, at(2.0)) == 0.0);
}

TEST_CASE("idp_bound finite budget equals the closed two-g expression") {
    for (double eta : {0.55, 0.7, 0.85, 0.95, 0.99})
        for (double nth : {0.0, 0.3, 1.0, 2.0})
            for (double n : {0.1, 1.0, 10.0}) {
                const double et = eta - (1 - eta) * nth;
                if (!(et > 0)) continue;
                const double a = eta * n + (1 - eta) * nth;
                const double closed = std::max(g_direct(a) - g_direct((1 - eta) * (nth + 1) * a / et), 0.0);
                CHECK(idp_bound(eta, nth, at(n)) == Approx(closed).epsilon(1e-10));
            }
}

TEST_CASE("odp_bound examples") {
    for (double n : {0.5, 1.0, 3.0}) CHECK(odp_bound(0.8, 0.0, n) == Approx(pure_loss_capacity(0.8, at(n))));
    CHECK(odp_bound(0.95, 1.0, 1.0) == Approx(dp_bound(0.95, 1.0, at(1.0))).epsilon(1e-9));
    CHECK(odp_bound(0.7, 1.0, 1.0) == Approx(idp_bound(0.7, 1.0, at(1.0))).epsilon(1e-9));
    CHECK_THROWS_AS(odp_bound(0.9, 1.0, INFINITY), DomainError);
}

TEST_CASE("odp_bound agrees with a dense scan of the split parameter") {
    for (double eta : {0.6, 0.8, 0.9})
        for (double nth : {0.5, 1.0, 2.0})
            for (double n : {0.2, 1.0, 10.0}) {
                if (!(eta - (1 - eta) * nth > 0)) continue;
                const double hi = 1 + (1 - eta) * nth;
                double scan = INFINITY;
                for (int k = 0; k <= 2000; ++k) {
                    const double g1 = std::min(hi, 1 + (hi - 1) * k / 2000.0);
                    if (!(g1 - (1 - eta) * (nth + 1) > 0)) continue;
                    scan = std::min(scan, odp_objective(eta, nth, n, g1));
                }
                const double v = odp_bound(eta, nth, n);
                CHECK(v <= scan + 1e-9);
                CHECK(v >= scan - 1e-6);
            }
}

TEST_CASE("crossover_eta_star") {
    const auto t0 = std::chrono::steady_clock::now();
    const double s = crossover_eta_star(1.0, 1.0);
    CHECK(std::abs(s - 0.8775) <= 0.005);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
    CHECK(crossover_eta_star(0.0, 1.0) == 0.0);
    CHECK(crossover_eta_star(0.0, 7.0) == 0.0);
    // regression value for (nth, nbar) = (1, 10)
    CHECK(crossover_eta_star(1.0, 10.0) == Approx(0.981023).epsilon(1e-5));
    // above the crossover dp is optimal, just below it dp is not
    CHECK(std::abs(dp_bound(s + 1e-3, 1.0, at(1.0)) - odp_bound(s + 1e-3, 1.0, 1.0)) < 1e-9);
    CHECK(dp_bound(s - 1e-2, 1.0, at(1.0)) - odp_bound(s - 1e-2, 1.0, 1.0) > 1e-9);
}

TEST_CASE("displacement_bounds examples") {
    const auto b = displacement_bounds(0.1);
    CHECK(b.lower == Approx(std::log2(1 / (0.1 * std::exp(1.0)))).epsilon(1e-12));
    CHECK(b.lower == Approx(1.879231).epsilon(1e-6));
    CHECK(b.upper_loose == Approx(std::log2(10.0)).epsilon(1e-12));
    CHECK(b.upper_improved == Approx(std::log2(9.0)).epsilon(1e-12));
    CHECK(displacement_bounds(1.0).upper_improved == 0.0);
    CHECK(displacement_bounds(2.0).upper_improved == 0.0);
    for (double s2 = 0.01; s2 < 1.0; s2 += 0.01) {
        const auto c = displacement_bounds(s2);
        CHECK(c.upper_improved < c.upper_loose);
        CHECK(c.lower <= c.upper_improved + 1e-12);
    }
    CHECK_THROWS_AS(displacement_bounds(0.0), DomainError);
}

TEST_CASE("gkp_rate_displacement examples") {
    CHECK(gkp_rate_displacement(0.1) == Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(gkp_rate_displacement(1.0 / std::exp(1.0)) == 0.0);
    CHECK(gkp_rate_displacement(0.5) == 0.0);
    CHECK(gkp_rate_displacement(0.01) == Approx(std::log2(36.0)).epsilon(1e-12));
}

TEST_CASE("gkp_rate_loss examples") {
    CHECK(gkp_rate_loss(0.9, 0.0) == Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(gkp_rate_loss(0.9, 1.0) == 0.0);
    const double gap = idp_bound(0.999, 0.0, kInfBudget) - gkp_rate_loss(0.999, 0.0);
    CHECK(gap >= 0.0);
    CHECK(gap <= std::log2(std::exp(1.0)) + 0.1);
}

TEST_CASE("gkp_rate_loss uses the pre-amplified displacement variance") {
    for (double eta : {0.9, 0.95, 0.99})
        for (double nth : {0.0, 0.5}) CHECK(gkp_rate_loss(eta, nth) == gkp_rate_displacement((1 - eta) * (nth + 1)));
    // (1-eta)/eta from post-amplification would floor 1/(e sigma2) to 6 here instead of 7
    CHECK(gkp_rate_loss(0.95, 0.0) == Approx(std::log2(7.0)));
    CHECK(gkp_rate_displacement(0.05 / 0.95) == Approx(std::log2(6.0)));
    // the floor jumps where 1/(e(1-eta)) crosses an integer
    const double eta3 = 1 - 1 / (3 * std::exp(1.0));
    CHECK(gkp_rate_loss(eta3 + 1e-9, 0.0) == Approx(std::log2(3.0)));
    CHECK(gkp_rate_loss(eta3 - 1e-6, 0.0) == Approx(1.0));
}

TEST_CASE("property: lower bound below every upper bound") {
    for (int i = 0; i <= 44; ++i) {
        const double eta = 0.55 + 0.01 * i;
        for (double nth : {0.0, 0.5, 1.0, 2.0})
            for (double n : {0.5, 1.0, 2.0, 10.0}) {
                const auto p = evaluate_bounds(eta, nth, at(n));
                const double m = std::min({p.hw, p.dp, p.idp, p.odp});
                CHECK(p.lower_ci <= m + 1e-9);
                CHECK(p.odp <= std::min(p.dp, p.idp) + 1e-9);
                CHECK(p.lower_ci >= 0.0);
            }
    }
}

TEST_CASE("property: unconstrained idp never exceeds dp, strictly below with thermal noise") {
    for (int i = 0; i < 1000; ++i) {
        const double eta = i / 1000.0;
        for (double nth : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double idp = idp_bound(eta, nth, kInfBudget), dp = dp_bound(eta, nth, kInfBudget);
            CHECK(idp <= dp + 1e-12);
            if (nth > 0 && idp > 0) CHECK(idp < dp);
        }
    }
}

TEST_CASE("property: pure-loss capacity is nondecreasing in the photon budget") {
    for (double eta : {0.55, 0.7, 0.9, 0.99}) {
        double prev = 0;
        for (double n = 0.01; n < 50; n *= 1.3) {
            const double v = pure_loss_capacity(eta, at(n));
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        CHECK(prev <= pure_loss_capacity(eta, kInfBudget) + 1e-9);
    }
}

TEST_CASE("property: gkp rate within a constant of idp") {
    for (int i = 1; i < 1000; ++i) {
        const double eta = i / 1000.0;
        for (double nth : {0.0, 0.2, 1.0}) {
            const double rate = gkp_rate_loss(eta, nth), idp = idp_bound(eta, nth, kInfBudget);
            CHECK(rate <= idp + 1e-12);
            if (1 / ((1 - eta) * (nth + 1)) >= 100) CHECK(idp - rate <= std::log2(std::exp(1.0)) + 0.1);
        }
    }
}

TEST_CASE("property: thermal inputs saturate the Fock-space coherent information") {
    for (double eta : {0.6, 0.8})
        for (double n : {0.5, 1.0, 2.0}) {
            const auto rho = thermal_state(n, 80);
            const double ic = pure_loss_coherent_information(eta, rho);
            CHECK(std::abs(ic - (g_entropy(eta * n) - g_entropy((1 - eta) * n))) < 1e-4);
        }
}

TEST_CASE("evaluate_bounds edge rows") {
    const auto half = evaluate_bounds(0.5, 0.0, kInfBudget);
    CHECK(half.lower_ci == 0.0);
    CHECK(std::isnan(half.odp));
    CHECK(evaluate_bounds(0.0, 1.0, kInfBudget).gkp_rate == 0.0);
    CHECK(std::isinf(evaluate_bounds(1.0, 1.0, at(1.0)).gkp_rate));
    CHECK_THROWS_AS(PhotonBudget::at_most(-1.0), DomainError);
}
