#pragma once
// Truncated Fock-space numerics: the independent oracle for the symbolic modules.

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "bosonic/gaussian.hpp"

namespace bosonic {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using FockOp = CMatrix;

class FockDensity {
public:
    // Strict: rho must already be a valid density matrix.
    explicit FockDensity(CMatrix rho);
    // Hermitizes and rescales to unit trace; the pre-rescaling |1 - Tr| is kept as trace_defect().
    static FockDensity renormalized(CMatrix rho);
    static FockDensity pure(const CVector& psi);

    const CMatrix& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }
    double trace_defect() const { return trace_defect_; }

private:
    FockDensity(CMatrix rho, double defect);
    static void validate(const CMatrix& rho);
    CMatrix rho_;
    double trace_defect_ = 0.0;
};

FockOp annihilation(Eigen::Index n);
FockOp creation(Eigen::Index n);
FockOp number_op(Eigen::Index n);
std::pair<FockOp, FockOp> quadratures(Eigen::Index n);
FockOp rotation_op(double theta, Eigen::Index n);  // exp(i theta n)
FockOp envelope_op(double delta, Eigen::Index n);  // exp(-delta^2 n)

// Smallest dimension accepted for a coherent amplitude of modulus |alpha|.
Eigen::Index coherent_guard_dim(double abs_alpha);
CVector coherent_state(cplx alpha, Eigen::Index n);
FockOp displacement_op(cplx alpha, Eigen::Index n);

FockDensity thermal_state(double nth, Eigen::Index n);

std::vector<FockOp> pure_loss_kraus(double eta, Eigen::Index n, Eigen::Index l_max);
FockDensity apply_kraus(const std::vector<FockOp>& kraus, const FockDensity& rho);
FockDensity pure_loss_apply(double eta, const FockDensity& rho);
// Beam splitter with a thermal environment of dimension n_env; ordering system (x) environment.
FockDensity thermal_loss_apply(double eta, double nth, const FockDensity& rho, Eigen::Index n_env);
FockDensity random_displacement_apply(double sigma2, const FockDensity& rho);

// W(q, p) on the grid, rows indexed by q and columns by p.
Eigen::MatrixXd wigner(const FockDensity& rho, const Eigen::VectorXd& q_grid, const Eigen::VectorXd& p_grid);
// Same sum without assuming Hermiticity; its imaginary part measures the residue.
cplx wigner_point(const CMatrix& rho, double q, double p);

FockDensity dephase_fock(const FockDensity& rho);
// H(loss_eta(rho)) - H(loss_{1-eta}(rho)); the complementary channel of pure loss is pure loss with 1-eta
// up to a phase-space rotation.
double pure_loss_coherent_information(double eta, const FockDensity& rho);
double entropy(const FockDensity& rho);
double mean_photon(const FockDensity& rho);
double purity(const FockDensity& rho);
double trace_norm_distance(const FockDensity& a, const FockDensity& b);
GaussianStated moments(const FockDensity& rho);

// Gauss-Legendre nodes and weights on [a, b].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b);

}  // namespace bosonic
