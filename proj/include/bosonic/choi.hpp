#pragma once
// Choi matrices and superoperators.
//   X[(i, j), (i', j')] = <j| A(|i><i'|) |j'>,  composite index i * dim_out + j
//   T[(j, j'), (i, i')] = X[(i, j), (i', j')],  vec(rho)[(i, i')] = rho(i, i')

#include <cstdint>
#include <vector>

#include "bosonic/fock.hpp"

namespace bosonic {

class ChoiMatrix {
public:
    ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, CMatrix X);

    Eigen::Index dim_in() const { return din_; }
    Eigen::Index dim_out() const { return dout_; }
    const CMatrix& matrix() const { return X_; }

private:
    Eigen::Index din_, dout_;
    CMatrix X_;
};

struct CptpReport {
    double hermiticity;  // max |X - X^dag|
    double min_eigenvalue;
    double tp_residual;  // max |Tr_out X - I|
    bool ok(double herm_tol = 1e-9, double psd_tol = 1e-8, double tp_tol = 1e-7) const {
        return hermiticity <= herm_tol && min_eigenvalue >= -psd_tol && tp_residual <= tp_tol;
    }
};

CptpReport check_cptp(const ChoiMatrix& X);

struct Superoperator {
    Eigen::Index dim_in, dim_out;
    CMatrix T;  // dim_out^2 x dim_in^2
};

ChoiMatrix choi_from_kraus(const std::vector<CMatrix>& kraus, Eigen::Index dim_in, Eigen::Index dim_out);
ChoiMatrix unitary_choi(const CMatrix& U);
ChoiMatrix isometry_choi(const CMatrix& V);  // V: dim_out x dim_in
Superoperator choi_to_superop(const ChoiMatrix& X);
ChoiMatrix superop_to_choi(const Superoperator& T);
// second o first
Superoperator compose(const Superoperator& second, const Superoperator& first);
CMatrix apply_superop(const Superoperator& T, const CMatrix& rho);

CMatrix partial_trace_out(const CMatrix& X, Eigen::Index dim_in, Eigen::Index dim_out);
CMatrix partial_trace_in(const CMatrix& X, Eigen::Index dim_in, Eigen::Index dim_out);
// (1/dim_in) Tr_in X: the image of the maximally mixed input.
FockDensity encoded_state(const ChoiMatrix& XE);

// For T of shape p^2 x q^2, returns C on the (p in, q out) Choi index space with Tr[T_X T] = Tr[X C].
CMatrix objective_matrix(const CMatrix& T, Eigen::Index p, Eigen::Index q);

// Decoder objective: Tr[X_D f_N(X_E)] = Tr[T_D T_N T_E].
CMatrix f_N(const ChoiMatrix& XN, const ChoiMatrix& XE);
// Encoder objective: Tr[X_E encoder_objective(X_N, X_D)] = Tr[T_D T_N T_E].
CMatrix encoder_objective(const ChoiMatrix& XN, const ChoiMatrix& XD);

double entanglement_fidelity(const ChoiMatrix& XE, const ChoiMatrix& XN, const ChoiMatrix& XD);

// First d columns of a Haar unitary on C^n.
CMatrix haar_isometry(Eigen::Index n, Eigen::Index d, std::uint64_t seed);
ChoiMatrix random_isometry_encoding(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

}  // namespace bosonic
