#include <doctest.h>

#include "bosonic/biconvex.hpp"

using namespace bosonic;
using doctest::Approx;
using Eigen::Index;

namespace {

// From the first encoder half-step on; the random starting isometry ignores the photon budget.
void check_monotone(const OptimizationTrace& tr, double tol) {
    for (size_t k = 2; k < tr.records.size(); ++k) CHECK(tr.records[k].fidelity >= tr.records[k - 1].fidelity - tol);
}

double choi_top_eigenvalue(const ChoiMatrix& X) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(X.matrix());
    return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("noiseless channel is corrected within two iterations") {
    OptimizationConfig cfg;
    cfg.eta = 1.0;
    cfg.fock_dim = 8;
    cfg.max_iters = 2;
    cfg.energy_bound = 3.0;
    const auto tr = alternate_optimize(cfg);
    REQUIRE(tr.completed);
    CHECK(tr.infidelity <= 1e-6);
    CHECK(tr.records.size() == 4);
    CHECK(tr.records.front().phase == Phase::decoder);
    CHECK(tr.records.back().phase == Phase::encoder);
}

TEST_CASE("short lossy run: monotone trace and CPTP iterates") {
    OptimizationConfig cfg;
    cfg.eta = 0.9;
    cfg.fock_dim = 10;
    cfg.max_iters = 15;
    cfg.energy_bound = 2.0;
    std::vector<int> seen;
    const auto tr = alternate_optimize(cfg, [&](int iter, const ChoiMatrix& XE) {
        seen.push_back(iter);
        CHECK(check_cptp(XE).ok());
        if (iter > 0) CHECK(mean_photon(encoded_state(XE)) <= cfg.energy_bound + 1e-6);
    });
    REQUIRE(tr.completed);
    REQUIRE(seen.size() >= 2);
    CHECK(seen.front() == 0);
    CHECK(seen[1] == 1);
    check_monotone(tr, 1e-7);
    REQUIRE(tr.encoder.has_value());
    REQUIRE(tr.decoder.has_value());
    CHECK(check_cptp(*tr.encoder).ok());
    CHECK(check_cptp(*tr.decoder).ok());
    const double F = entanglement_fidelity(*tr.encoder, pure_loss_choi(0.9, 10), *tr.decoder);
    CHECK(1 - F == Approx(tr.infidelity).epsilon(1e-12));
    CHECK(F <= 1 + 1e-8);
    CHECK(tr.infidelity > 0);
}

TEST_CASE("runs are deterministic per seed and seeds differ") {
    OptimizationConfig cfg;
    cfg.fock_dim = 8;
    cfg.max_iters = 4;
    const auto a = optimize_seeds(cfg, {3, 3, 4});
    REQUIRE(a.size() == 3);
    REQUIRE(a[0].records.size() == a[1].records.size());
    for (size_t k = 0; k < a[0].records.size(); ++k) CHECK(a[0].records[k].fidelity == a[1].records[k].fidelity);
    CHECK(a[0].records.front().fidelity != a[2].records.front().fidelity);
    CHECK(a[2].config.seed == 4);
}

TEST_CASE("OptimizationConfig validation") {
    OptimizationConfig cfg;
    cfg.fock_dim = 2;
    CHECK_THROWS_AS(alternate_optimize(cfg), DomainError);
    cfg.fock_dim = 6;
    cfg.code_dim = 1;
    CHECK_THROWS_AS(alternate_optimize(cfg), DomainError);
    cfg.code_dim = 2;
    cfg.energy_bound = 0;
    CHECK_THROWS_AS(alternate_optimize(cfg), DomainError);
}

TEST_CASE("gkp_encoding_choi") {
    // codewords |0>, |1>
    FiniteEnergyGkp fe{square_lattice(2), 1.0, 4, {}, 0.0};
    for (Index k = 0; k < 2; ++k) {
        CVector v = CVector::Zero(4);
        v(k) = 1.0;
        fe.codewords.push_back(v);
    }
    CMatrix V = CMatrix::Zero(4, 2);
    V(0, 0) = V(1, 1) = 1.0;
    CHECK((gkp_encoding_choi(fe).matrix() - isometry_choi(V).matrix()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(gkp_encoding_choi(fe, 1), DomainError);

    const auto hx = hexagonal_lattice(2);
    const double delta = delta_for_mean_photon(hx, 3.0);
    const auto code = finite_energy_codewords(hx, delta, required_fock_dim(hx, delta));
    const auto XE = gkp_encoding_choi(code);
    CHECK(check_cptp(XE).ok());
    CHECK(std::abs(mean_photon(encoded_state(XE)) - 3.0) < 1e-2);
}

TEST_CASE("hexagonal GKP with an optimal decoder is close to the optimized code") {
    const Index n = 20;
    const auto hx = hexagonal_lattice(2);
    const double delta = delta_for_mean_photon(hx, 3.0);
    const auto XE = gkp_encoding_choi(finite_energy_codewords(hx, delta, required_fock_dim(hx, delta)), n);
    const auto XN = pure_loss_choi(0.9, n);
    const auto XD = decoder_sdp_step(f_N(XN, XE), n, 2);
    const double infid = 1 - entanglement_fidelity(XE, XN, XD);
    // reported optimum 0.002092
    CHECK(infid > 0.002092 * 0.5);
    CHECK(infid < 0.002092 * 2);
}

TEST_CASE("property: optimized infidelity does not increase with the photon budget") {
    OptimizationConfig cfg;
    cfg.eta = 0.9;
    cfg.fock_dim = 20;
    cfg.max_iters = 120;
    double prev = 1.0;
    for (double Ebar : {1.0, 2.0, 3.0}) {
        cfg.energy_bound = Ebar;
        const auto tr = alternate_optimize(cfg);
        REQUIRE(tr.completed);
        check_monotone(tr, 1e-7);
        CHECK(tr.infidelity >= 0);
        CHECK(tr.infidelity <= prev);
        prev = tr.infidelity;
        // pure-state encoding: the Choi matrix of an isometry has a single eigenvalue d
        CHECK(choi_top_eigenvalue(*tr.encoder) > 2 * (1 - 1e-3));
        MESSAGE("Ebar=" << Ebar << " 1-F=" << tr.infidelity);
    }
}
