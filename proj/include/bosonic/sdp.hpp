#pragma once
// Primal-dual interior point method for channel SDPs over complex Hermitian matrices:
//
//   maximize  Re Tr[C X]
//   s.t.      Tr_out X = I_p,  X >= 0                (X on C^p (x) C^q, index a * q + j)
//             Re Tr[E X] <= e                      (optional)
//
// dual: minimize Tr Y + e t  s.t.  Y (x) I_q + t E - C >= 0,  t >= 0.

#include <optional>
#include <string>

#include "bosonic/fock.hpp"

namespace bosonic {

struct SdpOptions {
    double feas_tol = 1e-8;  // contract: reported primal residual must not exceed this
    double gap_tol = 1e-7;   // contract: relative duality gap
    int max_iters = 100;
    // The solver keeps iterating toward these tighter internal targets while progress is possible.
    double target_gap = 1e-10;
    double target_feas = 1e-11;
};

struct ChannelSdp {
    CMatrix C;
    Eigen::Index p = 0, q = 0;
    std::optional<CMatrix> E;  // energy-type operator on the full space
    double e = 0;
    std::optional<CMatrix> X0;  // strictly feasible interior starting point (optional)
};

struct SdpSolution {
    CMatrix X, Y;
    double t = 0, slack = 0;
    double primal_objective = 0, dual_objective = 0;
    double rel_gap = 0, primal_residual = 0, dual_residual = 0;
    int iterations = 0;
};

// Throws SolverError carrying the last iterate's diagnostics when the contract tolerances are missed.
SdpSolution solve_channel_sdp(const ChannelSdp& problem, const SdpOptions& opts = {});

}  // namespace bosonic
