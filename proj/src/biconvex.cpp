#include "bosonic/biconvex.hpp"

#include <future>

#include "bosonic/errors.hpp"

namespace bosonic {

using Eigen::Index;

namespace {

CMatrix kron_left_identity(Index d, const CMatrix& A) {
    const Index n = A.rows();
    CMatrix out = CMatrix::Zero(d * n, d * n);
    for (Index i = 0; i < d; ++i) out.block(i * n, i * n, n, n) = A;
    return out;
}

void fill_info(SdpStepInfo* info, const SdpSolution& s) {
    if (!info) return;
    info->iterations = s.iterations;
    info->rel_gap = s.rel_gap;
    info->primal_residual = s.primal_residual;
    info->energy_multiplier = s.t;
    info->energy_slack = s.slack;
}

}  // namespace

std::string to_string(Phase phase) { return phase == Phase::decoder ? "decoder" : "encoder"; }

ChoiMatrix decoder_sdp_step(const CMatrix& M, Index dim_in, Index dim_out, const SdpOptions& opts,
                            SdpStepInfo* info) {
    require((M - M.adjoint()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + M.cwiseAbs().maxCoeff()),
            "decoder_sdp_step: objective is not Hermitian");
    ChannelSdp pr;
    pr.C = M;
    pr.p = dim_in;
    pr.q = dim_out;
    const SdpSolution s = solve_channel_sdp(pr, opts);
    fill_info(info, s);
    return ChoiMatrix(dim_in, dim_out, s.X);
}

ChoiMatrix encoder_sdp_step(const CMatrix& M, const CMatrix& energy_op, double Ebar, Index d, Index n,
                            const SdpOptions& opts, SdpStepInfo* info) {
    require(Ebar > 0, "encoder_sdp_step: energy bound must be > 0");
    require(energy_op.rows() == n && energy_op.cols() == n, "encoder_sdp_step: energy operator has wrong size");
    require((M - M.adjoint()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + M.cwiseAbs().maxCoeff()),
            "encoder_sdp_step: objective is not Hermitian");
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (energy_op + energy_op.adjoint()), Eigen::EigenvaluesOnly);
        // an encoder onto the ground state is strictly feasible
        require(es.eigenvalues().minCoeff() < Ebar, "encoder_sdp_step: photon budget below the ground energy");
    }
    ChannelSdp pr;
    pr.C = M;
    pr.p = d;
    pr.q = n;
    pr.E = kron_left_identity(d, energy_op);
    pr.e = Ebar * static_cast<double>(d);

    // interior start: I_d (x) tau with a geometric tau of mean below Ebar/2
    const double r = (Ebar / 2.0) / (Ebar / 2.0 + 1.0);
    CMatrix tau = CMatrix::Zero(n, n);
    double z = 0;
    for (Index k = 0; k < n; ++k) z += (tau(k, k) = std::pow(r, static_cast<double>(k))).real();
    tau /= z;
    const CMatrix X0 = kron_left_identity(d, tau);
    if ((*pr.E * X0).trace().real() < pr.e) pr.X0 = X0;

    const SdpSolution s = solve_channel_sdp(pr, opts);
    fill_info(info, s);
    return ChoiMatrix(d, n, s.X);
}

ChoiMatrix pure_loss_choi(double eta, Index n) { return choi_from_kraus(pure_loss_kraus(eta, n, n - 1), n, n); }

OptimizationTrace alternate_optimize(const OptimizationConfig& cfg, const CheckpointFn& checkpoint) {
    require(cfg.fock_dim > cfg.code_dim && cfg.code_dim >= 2, "alternate_optimize: need n > d >= 2");
    require(cfg.energy_bound > 0, "alternate_optimize: energy bound must be > 0");
    require(cfg.max_iters >= 1, "alternate_optimize: max_iters must be >= 1");
    const Index n = cfg.fock_dim, d = cfg.code_dim;

    OptimizationTrace tr;
    tr.config = cfg;
    const ChoiMatrix XN = pure_loss_choi(cfg.eta, n);
    const CMatrix TN = choi_to_superop(XN).T;
    const CMatrix nop = number_op(n);

    ChoiMatrix XE = random_isometry_encoding(n, d, cfg.seed);
    if (checkpoint) checkpoint(0, XE);

    double best_f = -1.0, last_iter_f = -1.0;
    int stall = 0;
    std::optional<ChoiMatrix> XD;
    const auto note = [&](int iter, Phase ph, double f) {
        tr.records.push_back({iter, ph, f});
        // the random start ignores the photon budget, so it never counts as a result
        if (f > best_f && (iter > 1 || ph == Phase::encoder)) {
            best_f = f;
            tr.encoder = XE;
            tr.decoder = *XD;
        }
    };

    try {
        for (int iter = 1; iter <= cfg.max_iters; ++iter) {
            const CMatrix MD = objective_matrix(TN * choi_to_superop(XE).T, n, d);
            XD = decoder_sdp_step(MD, n, d, cfg.sdp);
            note(iter, Phase::decoder, entanglement_fidelity(XE, XN, *XD));

            const CMatrix ME = objective_matrix(choi_to_superop(*XD).T * TN, d, n);
            XE = encoder_sdp_step(ME, nop, cfg.energy_bound, d, n, cfg.sdp);
            const double f = entanglement_fidelity(XE, XN, *XD);
            note(iter, Phase::encoder, f);
            if (checkpoint) checkpoint(iter, XE);

            stall = (last_iter_f >= 0 && f - last_iter_f < cfg.fidelity_tol) ? stall + 1 : 0;
            last_iter_f = f;
            if (stall >= 5) break;
        }
        tr.completed = true;
    } catch (const SolverError& e) {
        tr.failure = e.what();
    }
    tr.infidelity = best_f >= 0 ? 1.0 - best_f : 1.0;
    return tr;
}

std::vector<OptimizationTrace> optimize_seeds(const OptimizationConfig& base, const std::vector<std::uint64_t>& seeds,
                                              const std::function<CheckpointFn(std::uint64_t)>& checkpoint_for) {
    std::vector<std::future<OptimizationTrace>> jobs;
    for (auto seed : seeds) {
        OptimizationConfig cfg = base;
        cfg.seed = seed;
        CheckpointFn cb = checkpoint_for ? checkpoint_for(seed) : CheckpointFn{};
        jobs.push_back(std::async(std::launch::async, [cfg, cb] { return alternate_optimize(cfg, cb); }));
    }
    std::vector<OptimizationTrace> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

ChoiMatrix gkp_encoding_choi(const FiniteEnergyGkp& fe, std::optional<Index> n) {
    CMatrix V = orthonormal_codewords(fe);
    if (n) {
        require(*n >= V.cols() && *n <= V.rows(), "gkp_encoding_choi: cut dimension out of range");
        V = V.topRows(*n).eval();
        const CMatrix G = V.adjoint() * V;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
        if (es.eigenvalues().minCoeff() < 1e-10) throw DomainError("gkp_encoding_choi: cut codewords are dependent");
        V = V * (es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                 es.eigenvectors().adjoint());
    }
    return isometry_choi(V);
}

}  // namespace bosonic
