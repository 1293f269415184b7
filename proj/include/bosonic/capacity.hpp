#pragma once
// Quantum-capacity bounds for the thermal-loss channel and the random displacement channel.
// All rates are in bits per channel use.

#include <limits>

namespace bosonic {

// Mean-photon constraint on the channel input; `unbounded()` is a distinct branch, not a big number.
class PhotonBudget {
public:
    static PhotonBudget unbounded() { return PhotonBudget(std::numeric_limits<double>::infinity()); }
    static PhotonBudget at_most(double nbar);

    bool is_unbounded() const { return nbar_ == std::numeric_limits<double>::infinity(); }
    double value() const { return nbar_; }

private:
    explicit PhotonBudget(double nbar) : nbar_(nbar) {}
    double nbar_;
};

struct BoundPoint {
    double eta = 0, nth = 0;
    PhotonBudget nbar = PhotonBudget::unbounded();
    double lower_ci = 0, hw = 0, dp = 0, idp = 0, gkp_rate = 0;
    double odp = std::numeric_limits<double>::quiet_NaN();  // NaN when nbar is unbounded
};

struct DisplacementBounds {
    double lower, upper_loose, upper_improved;
};

double g_entropy(double x);

double pure_loss_capacity(double eta, PhotonBudget nbar);
double thermal_loss_ci_lower(double eta, double nth, PhotonBudget nbar);
double hw_bound(double eta, double nth);
double dp_bound(double eta, double nth, PhotonBudget nbar);
double idp_bound(double eta, double nth, PhotonBudget nbar);

// Objective of the mixed decomposition amp(G1) o loss o amp(G2), as a function of G1.
double odp_objective(double eta, double nth, double nbar, double post_gain);
double odp_bound(double eta, double nth, double nbar);

double crossover_eta_star(double nth, double nbar);

DisplacementBounds displacement_bounds(double sigma2);
double gkp_rate_displacement(double sigma2);
double gkp_rate_loss(double eta, double nth);

BoundPoint evaluate_bounds(double eta, double nth, PhotonBudget nbar);

}  // namespace bosonic
