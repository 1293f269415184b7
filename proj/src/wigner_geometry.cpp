#include "bosonic/wigner_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bosonic {

std::vector<Peak> positive_peaks(const Eigen::MatrixXd& W, const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
    std::vector<Peak> out;
    for (Eigen::Index i = 1; i + 1 < W.rows(); ++i)
        for (Eigen::Index j = 1; j + 1 < W.cols(); ++j) {
            const double v = W(i, j);
            if (v <= 0) continue;
            bool top = true;
            for (int di = -1; di <= 1 && top; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && W(i + di, j + dj) >= v) {
                        top = false;
                        break;
                    }
            if (top) out.push_back({q(i), p(j), v});
        }
    std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return out;
}

RingGeometry six_peak_ring(const Eigen::MatrixXd& W, const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                           double merge_radius) {
    RingGeometry g;
    // a flat or split maximum shows up as several grid maxima; keep the strongest
    std::vector<Peak> peaks;
    for (const auto& pk : positive_peaks(W, q, p))
        if (std::none_of(peaks.begin(), peaks.end(),
                         [&](const Peak& o) { return std::hypot(o.q - pk.q, o.p - pk.p) < merge_radius; }))
            peaks.push_back(pk);
    if (peaks.size() < 7) return g;

    double sw = 0, sq = 0, sp = 0;
    for (Eigen::Index i = 0; i < W.rows(); ++i)
        for (Eigen::Index j = 0; j < W.cols(); ++j) {
            sw += W(i, j);
            sq += W(i, j) * q(i);
            sp += W(i, j) * p(j);
        }
    const double mq = sq / sw, mp = sp / sw;
    const auto nearest = std::min_element(peaks.begin(), peaks.end(), [&](const Peak& a, const Peak& b) {
        return std::hypot(a.q - mq, a.p - mp) < std::hypot(b.q - mq, b.p - mp);
    });
    g.central = *nearest;
    peaks.erase(nearest);
    g.ring.assign(peaks.begin(), peaks.begin() + 6);

    for (const auto& pk : g.ring) {
        g.cq += pk.q / 6.0;
        g.cp += pk.p / 6.0;
    }
    std::vector<double> ang;
    for (const auto& pk : g.ring) ang.push_back(std::atan2(pk.p - g.cp, pk.q - g.cq) * 180.0 / std::numbers::pi);
    std::sort(ang.begin(), ang.end());
    for (size_t k = 0; k < ang.size(); ++k) {
        const double gap = k + 1 < ang.size() ? ang[k + 1] - ang[k] : ang.front() + 360.0 - ang.back();
        g.spacings_deg.push_back(gap);
        g.max_deviation_deg = std::max(g.max_deviation_deg, std::abs(gap - 60.0));
    }
    g.found = true;
    return g;
}

}  // namespace bosonic
