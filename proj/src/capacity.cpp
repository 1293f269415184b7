#include "bosonic/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "bosonic/errors.hpp"
#include "bosonic/gaussian.hpp"

namespace bosonic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp0(double x) { return x > 0 ? x : 0.0; }

void check_eta(double eta, const char* who) {
    if (!(eta >= 0 && eta <= 1)) throw DomainError(std::string(who) + ": eta must lie in [0,1]");
}

void check_nth(double nth, const char* who) {
    if (!(nth >= 0)) throw DomainError(std::string(who) + ": nth must be >= 0");
}

}  // namespace

PhotonBudget PhotonBudget::at_most(double nbar) {
    if (!(nbar >= 0) || std::isinf(nbar)) throw DomainError("PhotonBudget: nbar must be finite and >= 0");
    return PhotonBudget(nbar);
}

double g_entropy(double x) {
    if (!(x >= 0)) throw DomainError("g_entropy: x must be >= 0");
    if (x < 1e-12) return 0.0;
    // (x+1)log(x+1) - x log x, rearranged to stay accurate for large x
    return std::log2(x + 1) + x * std::log1p(1.0 / x) / std::log(2.0);
}

double pure_loss_capacity(double eta, PhotonBudget nbar) {
    check_eta(eta, "pure_loss_capacity");
    if (nbar.is_unbounded()) {
        if (eta == 1) return kInf;
        if (eta <= 0.5) return 0.0;
        return std::log2(eta / (1 - eta));
    }
    const double n = nbar.value();
    return clamp0(g_entropy(eta * n) - g_entropy((1 - eta) * n));
}

double thermal_loss_ci_lower(double eta, double nth, PhotonBudget nbar) {
    check_eta(eta, "thermal_loss_ci_lower");
    check_nth(nth, "thermal_loss_ci_lower");
    if (nbar.is_unbounded()) {
        if (eta == 1) return kInf;
        if (eta == 0) return 0.0;
        return clamp0(std::log2(eta / (1 - eta)) - g_entropy(nth));
    }
    const double n = nbar.value();
    const double a = (1 + eta) * n + (1 - eta) * nth + 1;
    const double D = std::sqrt(std::max(a * a - 4 * eta * n * (n + 1), 0.0));
    const double b = (1 - eta) * (n - nth);
    const double v = g_entropy(eta * n + (1 - eta) * nth) - g_entropy(std::max((D + b - 1) / 2, 0.0)) -
                     g_entropy(std::max((D - b - 1) / 2, 0.0));
    return clamp0(v);
}

double hw_bound(double eta, double nth) {
    check_eta(eta, "hw_bound");
    check_nth(nth, "hw_bound");
    if (eta == 1) return kInf;
    if (std::isinf(nth)) return 0.0;
    return clamp0(std::log2((1 + eta) / ((1 - eta) * (2 * nth + 1))));
}

double dp_bound(double eta, double nth, PhotonBudget nbar) {
    check_eta(eta, "dp_bound");
    check_nth(nth, "dp_bound");
    if (eta == 1) return pure_loss_capacity(1.0, nbar);
    const auto post = decompose_post_amp(eta, nth);
    return pure_loss_capacity(post.eta_prime, nbar);
}

double idp_bound(double eta, double nth, PhotonBudget nbar) {
    check_eta(eta, "idp_bound");
    check_nth(nth, "idp_bound");
    if (eta == 1) return pure_loss_capacity(1.0, nbar);
    if (!(eta - (1 - eta) * nth > 0)) return 0.0;
    const auto pre = decompose_pre_amp(eta, nth);
    if (nbar.is_unbounded()) return clamp0(std::log2(pre.eta_tilde / ((1 - eta) * (nth + 1))));
    const double n = nbar.value();
    return pure_loss_capacity(pre.eta_tilde, PhotonBudget::at_most(pre.gain * n + pre.gain - 1));
}

double odp_objective(double eta, double nth, double nbar, double post_gain) {
    const auto dec = decompose_general(eta, nth, post_gain);
    const double n_in = dec.pre_gain * nbar + dec.pre_gain - 1;
    return pure_loss_capacity(dec.eta_bar, PhotonBudget::at_most(n_in));
}

double odp_bound(double eta, double nth, double nbar) {
    check_eta(eta, "odp_bound");
    check_nth(nth, "odp_bound");
    if (!(nbar > 0) || std::isinf(nbar)) throw DomainError("odp_bound: nbar must be finite and > 0");
    if (eta == 1 || nth == 0) return pure_loss_capacity(eta, PhotonBudget::at_most(nbar));
    if (!(eta - (1 - eta) * nth > 0)) return 0.0;

    const auto f = [&](double g1) { return odp_objective(eta, nth, nbar, g1); };
    double lo = 1.0, hi = 1.0 + (1 - eta) * nth;
    double best = std::min(f(lo), f(hi));

    // golden-section search; endpoints above guard against a non-unimodal objective
    const double r = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-9) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        if (std::abs(f1 - f2) < 1e-12 && hi - lo < 1e-6) break;
    }
    best = std::min({best, f1, f2});
    return best;
}

double crossover_eta_star(double nth, double nbar) {
    check_nth(nth, "crossover_eta_star");
    if (!(nbar > 0) || std::isinf(nbar)) throw DomainError("crossover_eta_star: nbar must be finite and > 0");
    if (nth == 0) return 0.0;

    // dp strictly above odp means the optimal split is not the pure post-amplifier one
    const auto separated = [&](double eta) {
        return dp_bound(eta, nth, PhotonBudget::at_most(nbar)) - odp_bound(eta, nth, nbar) > 1e-9;
    };
    constexpr int kGrid = 1000;
    if (separated(1.0 - 1.0 / kGrid)) throw NotFoundError("crossover_eta_star: dp above odp up to eta -> 1");
    int k = kGrid - 1;
    while (k > 0 && !separated(static_cast<double>(k) / kGrid)) --k;
    if (k == 0) throw NotFoundError("crossover_eta_star: dp and odp never separate");

    double lo = static_cast<double>(k) / kGrid, hi = static_cast<double>(k + 1) / kGrid;
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (separated(mid) ? lo : hi) = mid;
    }
    return hi;
}

DisplacementBounds displacement_bounds(double sigma2) {
    if (!(sigma2 > 0)) throw DomainError("displacement_bounds: sigma2 must be > 0");
    DisplacementBounds b;
    b.lower = clamp0(std::log2(1.0 / (std::exp(1.0) * sigma2)));
    b.upper_loose = clamp0(std::log2(1.0 / sigma2));
    b.upper_improved = sigma2 < 1 ? clamp0(std::log2((1 - sigma2) / sigma2)) : 0.0;
    return b;
}

double gkp_rate_displacement(double sigma2) {
    if (!(sigma2 > 0)) throw DomainError("gkp_rate_displacement: sigma2 must be > 0");
    const double m = std::floor(1.0 / (std::exp(1.0) * sigma2));
    return m > 1 ? std::log2(m) : 0.0;
}

double gkp_rate_loss(double eta, double nth) {
    if (!(eta > 0 && eta < 1)) throw DomainError("gkp_rate_loss: eta must lie in (0,1)");
    check_nth(nth, "gkp_rate_loss");
    // pre-amplify by 1/eta, then loss: a random displacement with variance (1-eta)(nth+1)
    return gkp_rate_displacement((1 - eta) * (nth + 1));
}

BoundPoint evaluate_bounds(double eta, double nth, PhotonBudget nbar) {
    BoundPoint p;
    p.eta = eta;
    p.nth = nth;
    p.nbar = nbar;
    p.lower_ci = thermal_loss_ci_lower(eta, nth, nbar);
    p.hw = hw_bound(eta, nth);
    p.dp = dp_bound(eta, nth, nbar);
    p.idp = idp_bound(eta, nth, nbar);
    if (!nbar.is_unbounded() && nbar.value() > 0) p.odp = odp_bound(eta, nth, nbar.value());
    if (eta <= 0)
        p.gkp_rate = 0.0;
    else if (eta >= 1)
        p.gkp_rate = kInf;
    else
        p.gkp_rate = gkp_rate_loss(eta, nth);
    return p;
}

}  // namespace bosonic
