#pragma once
// Peak geometry of sampled Wigner functions.

#include <Eigen/Dense>
#include <vector>

namespace bosonic {

struct Peak {
    double q, p, value;
};

// Strict positive local maxima over the 8-neighbourhood, sorted by decreasing value.
std::vector<Peak> positive_peaks(const Eigen::MatrixXd& W, const Eigen::VectorXd& q, const Eigen::VectorXd& p);

struct RingGeometry {
    bool found = false;     // at least seven positive peaks
    Peak central{};         // peak nearest the W-weighted centroid
    std::vector<Peak> ring;  // six largest remaining peaks
    double cq = 0, cp = 0;  // centroid of the ring
    std::vector<double> spacings_deg;  // consecutive angular gaps about (cq, cp)
    double max_deviation_deg = 0;      // max |gap - 60|
};

// Peaks closer than merge_radius to a stronger one are discarded first.
RingGeometry six_peak_ring(const Eigen::MatrixXd& W, const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                           double merge_radius = 0.5);

}  // namespace bosonic
