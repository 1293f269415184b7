#pragma once
// One-mode GKP codes: lattices, finite-energy codewords, and ideal-code decoding statistics.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosonic/fock.hpp"

namespace bosonic {

enum class LatticeKind { square, hexagonal, custom };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

struct GkpLattice {
    Eigen::Matrix2d S;  // symplectic generator, det S = 1
    int d;              // code dimension
    LatticeKind label;
};

GkpLattice square_lattice(int d);
GkpLattice hexagonal_lattice(int d);
GkpLattice custom_lattice(const Eigen::Matrix2d& S, int d);

// Coherent amplitudes of the logical Pauli displacements X_L = D(alpha_X), Z_L = D(alpha_Z).
cplx logical_x_amplitude(const GkpLattice& lat);
cplx logical_z_amplitude(const GkpLattice& lat);
// Columns: phase-space shifts (q, p) of X_L and Z_L, i.e. sqrt(2 pi / d) S^{-T}.
Eigen::Matrix2d logical_displacement_basis(const GkpLattice& lat);
// Columns: phase-space shifts of the two stabilizer generators (d times the logical ones).
Eigen::Matrix2d stabilizer_displacement_basis(const GkpLattice& lat);

double min_distance(const GkpLattice& lat);
double correctable_radius(const GkpLattice& lat);

struct FiniteEnergyGkp {
    GkpLattice lattice;
    double delta;
    Eigen::Index fock_dim;
    std::vector<CVector> codewords;  // normalized, not yet mutually orthogonalized
    double max_overlap;              // largest |<mu|nu>| between raw codewords
};

// Smallest Fock dimension that passes the coherent-state guard for every retained component.
Eigen::Index required_fock_dim(const GkpLattice& lat, double delta);
FiniteEnergyGkp finite_energy_codewords(const GkpLattice& lat, double delta, Eigen::Index fock_dim);
// Columns are the Loewdin-orthonormalized codewords.
CMatrix orthonormal_codewords(const FiniteEnergyGkp& fe);
FockDensity code_mixed_state(const FiniteEnergyGkp& fe);
// Mean photon number of the maximally mixed code state; dimension chosen by the guard.
double code_mean_photon(const GkpLattice& lat, double delta);
// `min_fock_dim` only raises the working dimension above the guard.
double delta_for_mean_photon(const GkpLattice& lat, double nbar_target,
                             std::optional<Eigen::Index> min_fock_dim = std::nullopt);

enum class Quadrature { q, p };
// <mu| S_q |mu> or <mu| S_p |mu> for a raw codeword.
cplx stabilizer_expectation(const FiniteEnergyGkp& fe, int mu, Quadrature which);

// Leading-exponent scaling only, not an absolute probability.
double logical_error_closed_form(LatticeKind kind, int d, double eta);

struct McEstimate {
    double estimate;
    double stderr_;
    std::int64_t trials;
    std::uint64_t seed;
};

// Ideal-code nearest-lattice-point decoding under Gaussian random displacements of variance sigma2 per quadrature.
McEstimate mc_logical_error(const GkpLattice& lat, double sigma2, std::int64_t trials, std::uint64_t seed,
                            unsigned threads = 0);

}  // namespace bosonic
