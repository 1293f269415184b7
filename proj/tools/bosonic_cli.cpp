// bosonic: bound curves, Wigner grids, GKP logical-error studies, encoder/decoder optimization.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 numeric guard, 4 solver failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "bosonic/biconvex.hpp"
#include "bosonic/capacity.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/gkp.hpp"
#include "bosonic/io.hpp"
#include "bosonic/verify.hpp"
#include "bosonic/wigner_geometry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bosonic;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kGuard = 3, kSolver = 4 };

fs::path default_dir() {
    const char* env = std::getenv("BOSONIC_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

// Resolve an output path; empty means <default dir>/<fallback>.
fs::path resolve(const std::string& given, const char* fallback) {
    fs::path p = given.empty() ? default_dir() / fallback : fs::path(given);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

// run.json lists every artifact by name relative to the manifest's directory.
void write_manifest(const fs::path& dir, const std::string& command, const json& params, std::uint64_t seed,
                    const std::vector<fs::path>& outputs) {
    json m;
    m["command"] = command;
    m["parameters"] = params;
    m["seed"] = seed;
    m["version"] = kVersion;
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back(o.filename().string());
    m["outputs"] = outs;
    auto os = open_out(dir / "run.json");
    os << m.dump(2) << '\n';
}

fs::path dir_of(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---- bounds ----

struct BoundsArgs {
    double eta_min = 0, eta_max = 1;
    int steps = 101;
    double nth = 0;
    std::string nbar = "inf";
    std::string out;
};

PhotonBudget parse_budget(const std::string& s) {
    if (s == "inf" || s == "infinity") return PhotonBudget::unbounded();
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("--nbar must be a number or 'inf'");
    }
    if (used != s.size()) throw DomainError("--nbar must be a number or 'inf'");
    return PhotonBudget::at_most(v);
}

int cmd_bounds(const BoundsArgs& a, std::uint64_t seed) {
    require(a.eta_min >= 0 && a.eta_min < a.eta_max && a.eta_max <= 1, "need 0 <= eta-min < eta-max <= 1");
    require(a.steps >= 2, "--steps must be >= 2");
    require(a.nth >= 0, "--nth must be >= 0");
    const PhotonBudget nb = parse_budget(a.nbar);
    std::vector<BoundPoint> rows;
    for (int k = 0; k < a.steps; ++k) {
        const double eta = k + 1 == a.steps ? a.eta_max : a.eta_min + (a.eta_max - a.eta_min) * k / (a.steps - 1);
        rows.push_back(evaluate_bounds(eta, a.nth, nb));
    }
    const fs::path out = resolve(a.out, "bounds.csv");
    {
        auto os = open_out(out);
        write_bounds_csv(os, rows);
    }
    json p{{"eta_min", a.eta_min}, {"eta_max", a.eta_max}, {"steps", a.steps}, {"nth", a.nth}, {"nbar", a.nbar}};
    write_manifest(dir_of(out), "bounds", p, seed, {out});
    std::cout << "wrote " << rows.size() << " rows to " << out.string() << '\n';
    return kOk;
}

// ---- wigner ----

struct WignerArgs {
    std::string code = "square";
    int d = 2;
    double nbar = 3;
    int grid_n = 201;
    double range = 6;
    std::string out;
};

GkpLattice lattice_for(const std::string& code, int d) {
    switch (lattice_kind_from_string(code)) {
        case LatticeKind::square: return square_lattice(d);
        case LatticeKind::hexagonal: return hexagonal_lattice(d);
        case LatticeKind::custom: break;
    }
    throw DomainError("--code must be square or hex");
}

int cmd_wigner(const WignerArgs& a, std::uint64_t seed) {
    require(a.grid_n >= 3 && a.grid_n % 2 == 1, "--grid-n must be odd and >= 3");
    require(a.range > 0, "--range must be > 0");
    require(a.d >= 1, "--d must be >= 1");
    json p{{"code", a.code}, {"d", a.d}, {"nbar", a.nbar}, {"grid_n", a.grid_n}, {"range", a.range}};

    std::optional<FockDensity> rho;
    if (a.d == 1) {
        // envelope limit: the code space collapses to the vacuum
        CVector vac = CVector::Zero(1);
        vac(0) = 1.0;
        rho = FockDensity::pure(vac);
        p["mode"] = "vacuum";
    } else {
        require(a.nbar > 0, "--nbar must be > 0");
        const GkpLattice lat = lattice_for(a.code, a.d);
        const double delta = delta_for_mean_photon(lat, a.nbar);
        const auto fe = finite_energy_codewords(lat, delta, required_fock_dim(lat, delta));
        rho = code_mixed_state(fe);
        p["delta"] = delta;
        p["fock_dim"] = fe.fock_dim;
    }
    const Eigen::VectorXd g = symmetric_grid(a.range, a.grid_n);
    const Eigen::MatrixXd W = wigner(*rho, g, g);
    const fs::path out = resolve(a.out, "wigner.csv");
    {
        auto os = open_out(out);
        write_wigner_csv(os, g, g, W);
    }
    write_manifest(dir_of(out), "wigner", p, seed, {out});
    const double h = g(1) - g(0);
    std::cout << "wrote " << out.string() << "  integral " << W.sum() * h * h << "  W(0,0) "
              << W(a.grid_n / 2, a.grid_n / 2) << '\n';
    return kOk;
}

// ---- logical-error ----

struct LogicalArgs {
    std::string code = "square";
    int d = 2;
    std::vector<double> sigma2;
    std::vector<double> eta;
    std::int64_t trials = 1000000;
    unsigned threads = 0;
    std::string out;
};

int cmd_logical_error(const LogicalArgs& a, std::uint64_t seed) {
    require(a.sigma2.empty() != a.eta.empty(), "give exactly one of --sigma2 or --eta");
    require(a.trials >= 10000, "--trials must be >= 10000");
    const GkpLattice lat = lattice_for(a.code, a.d);
    json pts = json::array();
    std::vector<double> xs, ys;
    auto point = [&](double s2, std::optional<double> eta) {
        const auto mc = mc_logical_error(lat, s2, a.trials, seed, a.threads);
        // closed forms are written in eta; sigma2 = (1 - eta)/eta
        const double e = eta ? *eta : 1.0 / (1.0 + s2);
        const double expo = s2 > 0 ? std::log(logical_error_closed_form(lat.label, lat.d, e)) : -INFINITY;
        json j;
        if (eta) j["eta"] = *eta;
        j["sigma2"] = s2;
        j["estimate"] = mc.estimate;
        j["stderr"] = mc.stderr_;
        j["closed_form_exponent"] = number_or_null(expo);
        pts.push_back(j);
        if (eta && mc.estimate > 0) {
            xs.push_back(*eta / (1 - *eta));
            ys.push_back(std::log(mc.estimate));
        }
    };
    for (double s2 : a.sigma2) {
        require(s2 >= 0, "--sigma2 must be >= 0");
        point(s2, std::nullopt);
    }
    for (double e : a.eta) {
        require(e > 0 && e < 1, "--eta values must lie in (0,1)");
        point((1 - e) / e, e);
    }
    json r;
    r["lattice"] = to_string(lat.label);
    r["d"] = lat.d;
    r["trials"] = a.trials;
    r["seed"] = seed;
    r["points"] = pts;
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t k = 0; k < xs.size(); ++k) {
            sx += xs[k];
            sy += ys[k];
            sxx += xs[k] * xs[k];
            sxy += xs[k] * ys[k];
        }
        r["fitted_slope"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double ref = std::log(logical_error_closed_form(lat.label, lat.d, 0.5));  // slope times eta/(1-eta)=1
        r["closed_form_slope"] = ref;
    }
    const fs::path out = resolve(a.out, "logical_error.json");
    {
        auto os = open_out(out);
        os << r.dump(2) << '\n';
    }
    json p{{"code", a.code}, {"d", a.d}, {"sigma2", a.sigma2}, {"eta", a.eta}, {"trials", a.trials}};
    write_manifest(dir_of(out), "logical-error", p, seed, {out});
    std::cout << "wrote " << out.string() << '\n';
    return kOk;
}

// ---- optimize ----

struct OptimizeArgs {
    double eta = 0.9;
    int n = 20, d = 2;
    double nbar = 3;
    int iters = 800;
    int seeds = 3;
    std::vector<int> checkpoints{1, 50, 250, 500, 800};
    int grid_n = 201;
    double range = 6;
    std::string out_dir;
};

json trace_json(const OptimizationTrace& t) {
    json cfg{{"eta", t.config.eta},
             {"fock_dim", t.config.fock_dim},
             {"code_dim", t.config.code_dim},
             {"energy_bound", t.config.energy_bound},
             {"max_iters", t.config.max_iters},
             {"fidelity_tol", t.config.fidelity_tol},
             {"seed", t.config.seed},
             {"sdp", {{"feas_tol", t.config.sdp.feas_tol}, {"gap_tol", t.config.sdp.gap_tol}}}};
    json its = json::array();
    for (const auto& r : t.records) its.push_back({{"iter", r.iter}, {"phase", to_string(r.phase)}, {"fidelity", r.fidelity}});
    json j{{"config", cfg}, {"iterations", its}, {"best", {{"infidelity", t.infidelity}, {"seed", t.config.seed}}}};
    j["completed"] = t.completed;
    if (!t.failure.empty()) j["failure"] = t.failure;
    return j;
}

std::string tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

int cmd_optimize(const OptimizeArgs& a, std::uint64_t seed) {
    require(a.n > a.d && a.d >= 2, "need n > d >= 2");
    require(a.nbar > 0, "--nbar must be > 0");
    require(a.iters >= 1 && a.seeds >= 1, "--iters and --seeds must be >= 1");
    require(a.grid_n >= 3 && a.grid_n % 2 == 1 && a.range > 0, "--grid-n must be odd, --range > 0");
    const fs::path dir = a.out_dir.empty() ? default_dir() : fs::path(a.out_dir);
    fs::create_directories(dir);

    OptimizationConfig base;
    base.eta = a.eta;
    base.fock_dim = a.n;
    base.code_dim = a.d;
    base.energy_bound = a.nbar;
    base.max_iters = a.iters;
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < a.seeds; ++k) seeds.push_back(seed + static_cast<std::uint64_t>(k));

    const std::set<int> schedule(a.checkpoints.begin(), a.checkpoints.end());
    const Eigen::VectorXd g = symmetric_grid(a.range, a.grid_n);
    std::mutex mu;
    std::vector<fs::path> outputs;
    auto emit_wigner = [&](const fs::path& p, const ChoiMatrix& XE) {
        const Eigen::MatrixXd W = wigner(encoded_state(XE), g, g);
        auto os = open_out(p);
        write_wigner_csv(os, g, g, W);
        std::lock_guard lk(mu);
        outputs.push_back(p);
    };
    auto wigner_name = [](std::uint64_t s, int iter) {
        return "wigner_" + tag(s) + "_iter" + std::to_string(iter) + ".csv";
    };
    const auto checkpoint_for = [&](std::uint64_t s) -> CheckpointFn {
        return [&, s](int iter, const ChoiMatrix& XE) {
            if (schedule.count(iter)) emit_wigner(dir / wigner_name(s, iter), XE);
        };
    };

    const auto traces = optimize_seeds(base, seeds, checkpoint_for);

    int exit_code = kOk;
    const OptimizationTrace* best = nullptr;
    json per_seed = json::array();
    for (const auto& t : traces) {
        const std::uint64_t s = t.config.seed;
        const fs::path tp = dir / ("trace_" + tag(s) + ".json");
        {
            auto os = open_out(tp);
            os << trace_json(t).dump(2) << '\n';
        }
        outputs.push_back(tp);
        if (t.encoder && t.decoder) {
            for (auto [name, X] : {std::pair{"encoder", &*t.encoder}, std::pair{"decoder", &*t.decoder}}) {
                const fs::path cp = dir / ("choi_" + std::string(name) + "_" + tag(s) + ".csv");
                auto os = open_out(cp);
                write_choi_csv(os, *X);
                outputs.push_back(cp);
            }
            // a run that stopped early is frozen at its last encoder for the remaining scheduled checkpoints
            const int last = t.records.empty() ? 0 : t.records.back().iter;
            for (int c : schedule)
                if (c > last && c <= a.iters) emit_wigner(dir / wigner_name(s, c), *t.encoder);
            if (!best || t.infidelity < best->infidelity) best = &t;
        }
        if (!t.completed) exit_code = kSolver;
        per_seed.push_back({{"seed", s}, {"infidelity", t.infidelity}, {"completed", t.completed},
                            {"iterations", t.records.empty() ? 0 : t.records.back().iter}});
    }

    json summary{{"seeds", per_seed}};
    if (best) {
        summary["best"] = {{"infidelity", best->infidelity}, {"seed", best->config.seed}};
        const FockDensity rho = encoded_state(*best->encoder);
        const fs::path wp = dir / "wigner_best.csv";
        const Eigen::MatrixXd W = wigner(rho, g, g);
        {
            auto os = open_out(wp);
            write_wigner_csv(os, g, g, W);
        }
        outputs.push_back(wp);
        const auto ring = six_peak_ring(W, g, g);
        json gaps = json::array();
        for (double x : ring.spacings_deg) gaps.push_back(x);
        summary["best_ring"] = {{"found", ring.found}, {"max_deviation_deg", ring.max_deviation_deg}, {"spacings_deg", gaps}};
        const auto pop = rho.matrix().diagonal().real();
        summary["best_top_populations"] = {pop(pop.size() - 2), pop(pop.size() - 1)};
        summary["best_mean_photon"] = mean_photon(rho);
    }
    const fs::path sp = dir / "summary.json";
    {
        auto os = open_out(sp);
        os << summary.dump(2) << '\n';
    }
    outputs.push_back(sp);
    std::sort(outputs.begin(), outputs.end());

    json p{{"eta", a.eta}, {"n", a.n},           {"d", a.d},         {"nbar", a.nbar}, {"iters", a.iters},
           {"seeds", a.seeds}, {"checkpoints", a.checkpoints}, {"grid_n", a.grid_n}, {"range", a.range}};
    write_manifest(dir, "optimize", p, seed, outputs);
    if (best) std::cout << "best infidelity " << best->infidelity << " (seed " << best->config.seed << ")\n";
    for (const auto& t : traces)
        if (!t.completed) std::cerr << "seed " << t.config.seed << ": " << t.failure << '\n';
    return exit_code;
}

// ---- verify ----

int cmd_verify(double scale) {
    const auto checks = run_verification(scale);
    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  error=" << format_double(c.error)
                  << "  tol=" << format_double(c.tolerance) << '\n';
        ok = ok && c.pass;
    }
    std::cout << checks.size() << " checks, " << (ok ? "all passed" : "FAILURES") << '\n';
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bosonic channel bounds, GKP codes and encoder/decoder optimization"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // --seed may follow the subcommand
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Random seed (recorded in run.json)")->capture_default_str();

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Capacity bounds versus eta as CSV");
    bounds->add_option("--eta-min", ba.eta_min)->capture_default_str();
    bounds->add_option("--eta-max", ba.eta_max)->capture_default_str();
    bounds->add_option("--steps", ba.steps)->capture_default_str();
    bounds->add_option("--nth", ba.nth)->capture_default_str();
    bounds->add_option("--nbar", ba.nbar, "Photon budget or 'inf'")->capture_default_str();
    bounds->add_option("--out", ba.out, "Output CSV (default $BOSONIC_OUT_DIR/bounds.csv)");

    WignerArgs wa;
    auto* wig = app.add_subcommand("wigner", "Wigner grid of the maximally mixed GKP code state");
    wig->add_option("--code", wa.code, "square or hex")->capture_default_str();
    wig->add_option("--d", wa.d, "Code dimension; 1 gives the vacuum")->capture_default_str();
    wig->add_option("--nbar", wa.nbar)->capture_default_str();
    wig->add_option("--grid-n", wa.grid_n, "Odd number of samples per axis")->capture_default_str();
    wig->add_option("--range", wa.range)->capture_default_str();
    wig->add_option("--out", wa.out, "Output CSV (default $BOSONIC_OUT_DIR/wigner.csv)");

    LogicalArgs la;
    auto* le = app.add_subcommand("logical-error", "Monte-Carlo GKP logical error under random displacements");
    le->add_option("--code", la.code)->capture_default_str();
    le->add_option("--d", la.d)->capture_default_str();
    le->add_option("--sigma2", la.sigma2, "Displacement variances")->delimiter(',');
    le->add_option("--eta", la.eta, "Loss transmissivities, sigma2 = (1-eta)/eta")->delimiter(',');
    le->add_option("--trials", la.trials)->capture_default_str();
    le->add_option("--threads", la.threads, "0 = hardware concurrency")->capture_default_str();
    le->add_option("--out", la.out, "Output JSON (default $BOSONIC_OUT_DIR/logical_error.json)");

    OptimizeArgs oa;
    auto* opt = app.add_subcommand("optimize", "Alternating SDP optimization of encoder and decoder");
    opt->add_option("--eta", oa.eta)->capture_default_str();
    opt->add_option("--n", oa.n, "Fock truncation")->capture_default_str();
    opt->add_option("--d", oa.d, "Code dimension")->capture_default_str();
    opt->add_option("--nbar", oa.nbar, "Mean photon bound")->capture_default_str();
    opt->add_option("--iters", oa.iters)->capture_default_str();
    opt->add_option("--seeds", oa.seeds, "Number of starts: seed, seed+1, ...")->capture_default_str();
    opt->add_option("--checkpoints", oa.checkpoints)->delimiter(',')->capture_default_str();
    opt->add_option("--grid-n", oa.grid_n)->capture_default_str();
    opt->add_option("--range", oa.range)->capture_default_str();
    opt->add_option("--out-dir", oa.out_dir, "Output directory (default $BOSONIC_OUT_DIR)");

    double scale = 1.0;
    auto* ver = app.add_subcommand("verify", "Cross-module identity checks");
    ver->add_option("--tolerance-scale", scale)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*bounds) return cmd_bounds(ba, seed);
        if (*wig) return cmd_wigner(wa, seed);
        if (*le) return cmd_logical_error(la, seed);
        if (*opt) return cmd_optimize(oa, seed);
        if (*ver) return cmd_verify(scale);
    } catch (const TruncationError& e) {
        std::cerr << "truncation guard: " << e.what() << '\n';
        return kGuard;
    } catch (const NotFoundError& e) {
        std::cerr << "numeric guard: " << e.what() << '\n';
        return kGuard;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kGuard;
    }
    return kUsage;
}
