#include "bosonic/gkp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "bosonic/errors.hpp"
#include "bosonic/gaussian.hpp"

namespace bosonic {

using Eigen::Index;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWeightCut = 1e-10;

struct ReducedBasis {
    Eigen::Matrix2d B;  // reduced basis columns
    Eigen::Matrix2i U;  // original coordinates = U * reduced coordinates
};

// Lagrange-Gauss reduction of a 2-D lattice basis.
ReducedBasis lagrange_reduce(const Eigen::Matrix2d& basis) {
    ReducedBasis r{basis, Eigen::Matrix2i::Identity()};
    for (int guard = 0; guard < 1000; ++guard) {
        if (r.B.col(0).squaredNorm() > r.B.col(1).squaredNorm()) {
            r.B.col(0).swap(r.B.col(1));
            r.U.col(0).swap(r.U.col(1));
        }
        const double m = std::round(r.B.col(0).dot(r.B.col(1)) / r.B.col(0).squaredNorm());
        if (m == 0) break;
        r.B.col(1) -= m * r.B.col(0);
        r.U.col(1) -= static_cast<int>(m) * r.U.col(0);
    }
    return r;
}

// Coefficient matrix taking integer coordinates (m, n2) to the coherent amplitude m alpha_X + n2 alpha_Z.
Eigen::Matrix2d amplitude_matrix(const GkpLattice& lat) {
    const cplx ax = logical_x_amplitude(lat), az = logical_z_amplitude(lat);
    Eigen::Matrix2d A;
    A << ax.real(), az.real(), ax.imag(), az.imag();
    return A;
}

struct Component {
    cplx coeff;  // BCH phase times envelope weight
    cplx gamma;  // damped coherent amplitude
};

std::vector<Component> codeword_components(const GkpLattice& lat, double delta, int mu) {
    const double damp = 1.0 - std::exp(-2.0 * delta * delta);
    const double r2max = 2.0 * std::log(1.0 / kWeightCut) / damp;
    const double rmax = std::sqrt(r2max);
    const Eigen::Matrix2d Ainv = amplitude_matrix(lat).inverse();
    const double mbound = rmax * Ainv.row(0).norm() + 1.0, nbound = rmax * Ainv.row(1).norm() + 1.0;
    const cplx ax = logical_x_amplitude(lat), az = logical_z_amplitude(lat);
    const int d = lat.d;
    const double shrink = std::exp(-delta * delta);

    std::vector<Component> out;
    const long n1max = static_cast<long>(std::ceil((mbound + d) / d));
    const long n2max = static_cast<long>(std::ceil(nbound));
    for (long n1 = -n1max; n1 <= n1max; ++n1) {
        const cplx beta = static_cast<double>(d * n1 + mu) * ax;
        for (long n2 = -n2max; n2 <= n2max; ++n2) {
            const cplx gam = static_cast<double>(n2) * az;
            const cplx alpha = beta + gam;
            const double w = std::exp(-0.5 * std::norm(alpha) * damp);
            if (w < kWeightCut) continue;
            // D(beta) D(gamma) = exp(i Im(beta conj(gamma))) D(beta + gamma)
            const cplx phase = std::polar(1.0, std::imag(beta * std::conj(gam)));
            out.push_back({phase * w, alpha * shrink});
        }
    }
    return out;
}

}  // namespace

std::string to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::square: return "square";
        case LatticeKind::hexagonal: return "hexagonal";
        case LatticeKind::custom: return "custom";
    }
    return "custom";
}

LatticeKind lattice_kind_from_string(const std::string& name) {
    if (name == "square" || name == "sq") return LatticeKind::square;
    if (name == "hexagonal" || name == "hex") return LatticeKind::hexagonal;
    if (name == "custom") return LatticeKind::custom;
    throw DomainError("unknown lattice '" + name + "'");
}

GkpLattice square_lattice(int d) {
    require(d >= 2, "square_lattice: d must be >= 2");
    return {Eigen::Matrix2d::Identity(), d, LatticeKind::square};
}

GkpLattice hexagonal_lattice(int d) {
    require(d >= 2, "hexagonal_lattice: d must be >= 2");
    Eigen::Matrix2d S;
    S << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
    S *= std::sqrt(2.0 / std::sqrt(3.0));
    return {S, d, LatticeKind::hexagonal};
}

GkpLattice custom_lattice(const Eigen::Matrix2d& S, int d) {
    require(d >= 2, "custom_lattice: d must be >= 2");
    require(is_symplectic(S, 1e-10), "custom_lattice: generator is not symplectic");
    return {S, d, LatticeKind::custom};
}

cplx logical_x_amplitude(const GkpLattice& lat) {
    return std::sqrt(kPi / lat.d) * cplx(lat.S(1, 1), -lat.S(0, 1));
}

cplx logical_z_amplitude(const GkpLattice& lat) {
    return std::sqrt(kPi / lat.d) * cplx(-lat.S(1, 0), lat.S(0, 0));
}

Eigen::Matrix2d logical_displacement_basis(const GkpLattice& lat) {
    const cplx ax = logical_x_amplitude(lat), az = logical_z_amplitude(lat);
    Eigen::Matrix2d B;
    B << ax.real(), az.real(), ax.imag(), az.imag();
    return std::sqrt(2.0) * B;
}

Eigen::Matrix2d stabilizer_displacement_basis(const GkpLattice& lat) {
    return static_cast<double>(lat.d) * logical_displacement_basis(lat);
}

double min_distance(const GkpLattice& lat) {
    const ReducedBasis r = lagrange_reduce(lat.S);
    double best = r.B.col(0).norm();
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            if (i != 0 || j != 0) best = std::min(best, (r.B * Eigen::Vector2d(i, j)).norm());
    return best;
}

double correctable_radius(const GkpLattice& lat) {
    return 0.5 * min_distance(lat) * std::sqrt(2.0 * kPi / lat.d);
}

Index required_fock_dim(const GkpLattice& lat, double delta) {
    require(delta > 0, "required_fock_dim: delta must be > 0");
    double rmax = 0;
    for (int mu = 0; mu < lat.d; ++mu)
        for (const auto& c : codeword_components(lat, delta, mu)) rmax = std::max(rmax, std::abs(c.gamma));
    return coherent_guard_dim(rmax);
}

namespace {

// psi += coeff |gamma>, restricted to the Poisson window where the amplitudes are above roundoff
void add_coherent(CVector& psi, cplx coeff, cplx gamma) {
    const double r = std::abs(gamma), x = r * r;
    const Index n = psi.size();
    if (r == 0) {
        psi(0) += coeff;
        return;
    }
    const double w = 12.0 * std::sqrt(x) + 20.0;
    const Index lo = static_cast<Index>(std::max(0.0, std::floor(x - w)));
    const Index hi = std::min<Index>(n - 1, static_cast<Index>(std::ceil(x + w)));
    const double l0 = static_cast<double>(lo);
    cplx amp = std::polar(std::exp(-0.5 * x + l0 * std::log(r) - 0.5 * std::lgamma(l0 + 1.0)), l0 * std::arg(gamma));
    for (Index k = lo; k <= hi; ++k) {
        if (k > lo) amp *= gamma / std::sqrt(static_cast<double>(k));
        psi(k) += coeff * amp;
    }
}

}  // namespace

FiniteEnergyGkp finite_energy_codewords(const GkpLattice& lat, double delta, Index fock_dim) {
    require(delta > 0, "finite_energy_codewords: delta must be > 0");
    FiniteEnergyGkp fe{lat, delta, fock_dim, {}, 0.0};
    for (int mu = 0; mu < lat.d; ++mu) {
        const auto comps = codeword_components(lat, delta, mu);
        double rmax = 0;
        for (const auto& c : comps) rmax = std::max(rmax, std::abs(c.gamma));
        if (fock_dim < coherent_guard_dim(rmax))
            throw TruncationError("finite_energy_codewords: fock_dim " + std::to_string(fock_dim) +
                                  " below required " + std::to_string(coherent_guard_dim(rmax)));
        CVector psi = CVector::Zero(fock_dim);
        for (const auto& c : comps) add_coherent(psi, c.coeff, c.gamma);
        fe.codewords.push_back(psi / psi.norm());
    }
    for (int a = 0; a < lat.d; ++a)
        for (int b = a + 1; b < lat.d; ++b)
            fe.max_overlap = std::max(fe.max_overlap, std::abs(fe.codewords[a].dot(fe.codewords[b])));
    return fe;
}

CMatrix orthonormal_codewords(const FiniteEnergyGkp& fe) {
    const Index d = static_cast<Index>(fe.codewords.size());
    CMatrix V(fe.fock_dim, d);
    for (Index k = 0; k < d; ++k) V.col(k) = fe.codewords[static_cast<size_t>(k)];
    const CMatrix G = V.adjoint() * V;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
    if (es.eigenvalues().minCoeff() < 1e-10) throw DomainError("orthonormal_codewords: codewords are linearly dependent");
    const CMatrix Ginvsqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                             es.eigenvectors().adjoint();
    return V * Ginvsqrt;
}

FockDensity code_mixed_state(const FiniteEnergyGkp& fe) {
    const CMatrix V = orthonormal_codewords(fe);
    return FockDensity::renormalized(V * V.adjoint() / static_cast<double>(V.cols()));
}

namespace {

// (1/d) sum_mu <mu|n|mu> over orthonormal columns, without forming the d-rank density matrix
double columns_mean_photon(const CMatrix& V) {
    double s = 0;
    for (Index k = 0; k < V.rows(); ++k) s += static_cast<double>(k) * V.row(k).squaredNorm();
    return s / static_cast<double>(V.cols());
}

}  // namespace

double code_mean_photon(const GkpLattice& lat, double delta) {
    const auto fe = finite_energy_codewords(lat, delta, required_fock_dim(lat, delta));
    return columns_mean_photon(orthonormal_codewords(fe));
}

double delta_for_mean_photon(const GkpLattice& lat, double nbar_target, std::optional<Index> min_fock_dim) {
    require(nbar_target > 0, "delta_for_mean_photon: target must be > 0");
    const auto nbar_at = [&](double delta) {
        const Index n = std::max(required_fock_dim(lat, delta), min_fock_dim.value_or(0));
        return columns_mean_photon(orthonormal_codewords(finite_energy_codewords(lat, delta, n)));
    };
    double lo = 0.05, hi = 2.0;
    const double f_hi = nbar_at(hi) - nbar_target;
    if (f_hi > 0) throw NotFoundError("delta_for_mean_photon: target below the mean photon at delta = 2");
    const double f_lo = nbar_at(lo) - nbar_target;
    if (f_lo < 0) throw NotFoundError("delta_for_mean_photon: target above the mean photon at delta = 0.05");
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = nbar_at(mid) - nbar_target;
        if (std::abs(f) < 1e-6) return mid;
        (f > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

cplx stabilizer_expectation(const FiniteEnergyGkp& fe, int mu, Quadrature which) {
    require(mu >= 0 && mu < fe.lattice.d, "stabilizer_expectation: codeword index out of range");
    const double d = fe.lattice.d;
    const cplx amp = which == Quadrature::q ? d * logical_z_amplitude(fe.lattice) : d * logical_x_amplitude(fe.lattice);
    const CVector& psi = fe.codewords[static_cast<size_t>(mu)];
    return psi.dot(displacement_op(amp, fe.fock_dim) * psi);
}

double logical_error_closed_form(LatticeKind kind, int d, double eta) {
    require(eta > 0 && eta < 1, "logical_error_closed_form: eta must lie in (0,1)");
    require(d >= 2, "logical_error_closed_form: d must be >= 2");
    const double snr = eta / (1.0 - eta);
    switch (kind) {
        case LatticeKind::square: return std::exp(-kPi / (4.0 * d) * snr);
        case LatticeKind::hexagonal: return std::exp(-kPi / (2.0 * std::sqrt(3.0) * d) * snr);
        case LatticeKind::custom: break;
    }
    throw DomainError("logical_error_closed_form: no closed form for custom lattices");
}

McEstimate mc_logical_error(const GkpLattice& lat, double sigma2, std::int64_t trials, std::uint64_t seed,
                            unsigned threads) {
    require(sigma2 >= 0, "mc_logical_error: sigma2 must be >= 0");
    require(trials >= 10000, "mc_logical_error: at least 1e4 trials required");
    constexpr std::int64_t kChunk = 1 << 16;
    const std::int64_t nchunks = (trials + kChunk - 1) / kChunk;
    const ReducedBasis red = lagrange_reduce(logical_displacement_basis(lat));
    const Eigen::Matrix2d Binv = red.B.inverse();
    const double sigma = std::sqrt(sigma2);
    const int d = lat.d;

    const auto run_chunk = [&](std::int64_t c) -> std::int64_t {
        const std::int64_t begin = c * kChunk, count = std::min(kChunk, trials - begin);
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(sq);
        std::normal_distribution<double> nd(0.0, 1.0);
        std::int64_t errors = 0;
        for (std::int64_t t = 0; t < count; ++t) {
            const Eigen::Vector2d x(sigma * nd(rng), sigma * nd(rng));
            const Eigen::Vector2d c0 = (Binv * x).array().round();
            Eigen::Vector2i best = c0.cast<int>();
            double bd = (x - red.B * c0).squaredNorm();
            for (int i = -2; i <= 2; ++i)
                for (int j = -2; j <= 2; ++j) {
                    const Eigen::Vector2d cand = c0 + Eigen::Vector2d(i, j);
                    const double dist = (x - red.B * cand).squaredNorm();
                    if (dist < bd) {
                        bd = dist;
                        best = cand.cast<int>();
                    }
                }
            const Eigen::Vector2i k = red.U * best;
            if (k(0) % d != 0 || k(1) % d != 0) ++errors;
        }
        return errors;
    };

    std::vector<std::int64_t> per_chunk(static_cast<size_t>(nchunks), 0);
    unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::int64_t>(nt, nchunks));
    if (nt <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) per_chunk[static_cast<size_t>(c)] = run_chunk(c);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t c = w; c < nchunks; c += nt) per_chunk[static_cast<size_t>(c)] = run_chunk(c);
            });
    }
    std::int64_t errors = 0;
    for (auto e : per_chunk) errors += e;
    const double p = static_cast<double>(errors) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials, seed};
}

}  // namespace bosonic
