#pragma once
// Alternating SDP optimization of encoder and decoder for a pure-loss channel under a photon budget.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bosonic/choi.hpp"
#include "bosonic/gkp.hpp"
#include "bosonic/sdp.hpp"

namespace bosonic {

struct SdpStepInfo {
    int iterations = 0;
    double rel_gap = 0, primal_residual = 0;
    double energy_multiplier = 0;  // dual variable of the photon budget (encoder only)
    double energy_slack = 0;
};

// argmax Tr[X_D M] over CPTP decoders with dim_in -> dim_out.
ChoiMatrix decoder_sdp_step(const CMatrix& M, Eigen::Index dim_in, Eigen::Index dim_out, const SdpOptions& opts = {},
                            SdpStepInfo* info = nullptr);

// argmax Tr[X_E M] over CPTP encoders C^d -> C^n with Tr[(I_d (x) energy_op) X_E] <= Ebar d.
ChoiMatrix encoder_sdp_step(const CMatrix& M, const CMatrix& energy_op, double Ebar, Eigen::Index d, Eigen::Index n,
                            const SdpOptions& opts = {}, SdpStepInfo* info = nullptr);

enum class Phase { decoder, encoder };
std::string to_string(Phase phase);

struct OptimizationConfig {
    double eta = 0.9;
    Eigen::Index fock_dim = 20;
    Eigen::Index code_dim = 2;
    double energy_bound = 3.0;
    int max_iters = 800;
    double fidelity_tol = 1e-9;
    std::uint64_t seed = 1;
    SdpOptions sdp;
};

struct IterationRecord {
    int iter;
    Phase phase;
    double fidelity;
};

struct OptimizationTrace {
    OptimizationConfig config;
    std::vector<IterationRecord> records;
    std::optional<ChoiMatrix> encoder, decoder;
    double infidelity = 1.0;
    bool completed = false;  // false when a solver failure cut the run short
    std::string failure;
};

// Invoked after the encoder half-step of iteration `iter` (and with iter = 0 for the starting encoder).
using CheckpointFn = std::function<void(int iter, const ChoiMatrix& encoder)>;

// Requires n > d >= 2, Ebar > 0. Solver failures are recorded in the trace with the last good iterate.
OptimizationTrace alternate_optimize(const OptimizationConfig& config, const CheckpointFn& checkpoint = {});

// One trace per seed, run concurrently.
std::vector<OptimizationTrace> optimize_seeds(const OptimizationConfig& base, const std::vector<std::uint64_t>& seeds,
                                              const std::function<CheckpointFn(std::uint64_t)>& checkpoint_for = {});

ChoiMatrix pure_loss_choi(double eta, Eigen::Index n);

// Encoding isometry onto the Loewdin-orthonormalized codewords, optionally cut to the first n Fock levels
// (and orthonormalized again).
ChoiMatrix gkp_encoding_choi(const FiniteEnergyGkp& fe, std::optional<Eigen::Index> n = std::nullopt);

}  // namespace bosonic
