#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modisperse/imethod.hpp"
#include "modisperse/io.hpp"
#include "modisperse/irregularity.hpp"
#include "modisperse/operator.hpp"
#include "modisperse/quadrature_reference.hpp"
#include "modisperse/young.hpp"

namespace {

constexpr const char* kVersion = "modisperse 0.1.0";

using modisperse::complexd;
using modisperse::TorusField;

struct PathArgs {
    std::string kind = "brownian";
    double hurst = 0.5;
    std::uint64_t seed = 1;
    int n = 1024;
    double horizon = 1.0;
    double level = 0.0;
    double slope = 1.0;
};

void add_path_options(CLI::App* cmd, PathArgs& pa) {
    cmd->add_option("--kind", pa.kind, "path kind: fbm|brownian|linear|constant")
        ->check(CLI::IsMember({"fbm", "brownian", "linear", "constant"}));
    cmd->add_option("--hurst", pa.hurst, "Hurst exponent for fbm");
    cmd->add_option("--seed", pa.seed, "path RNG seed");
    cmd->add_option("--n", pa.n, "number of path segments");
    cmd->add_option("--horizon", pa.horizon, "time horizon T");
    cmd->add_option("--level", pa.level, "constant path level");
    cmd->add_option("--slope", pa.slope, "linear path slope");
}

modisperse::ModulationPath build_path(const PathArgs& pa) {
    using modisperse::ModulationPath;
    if (pa.kind == "fbm") return modisperse::sample_fbm(pa.hurst, pa.n, pa.horizon, pa.seed);
    if (pa.kind == "brownian") return modisperse::sample_brownian(pa.n, pa.horizon, pa.seed);
    if (pa.kind == "linear") return ModulationPath::linear(pa.slope, pa.n, pa.horizon);
    return ModulationPath::constant(pa.level, pa.n, pa.horizon);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

// Reproducibility manifest next to the primary output. The thread count is
// excluded: results are thread-count independent by construction.
void write_manifest(const std::string& out_path, const std::string& command,
                    const std::vector<std::string>& args) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["command"] = command;
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--threads") {
            ++i;  // skip its value too
            continue;
        }
        if (args[i].rfind("--threads=", 0) == 0) continue;
        arr.push_back(args[i]);
    }
    j["args"] = arr;
    auto os = open_out(out_path + ".manifest.json");
    os << j.dump(2) << '\n';
}

int run(const std::vector<std::string>& args);

// ---------------------------------------------------------------- commands

int cmd_path(const PathArgs& pa, const std::string& out,
             const std::vector<std::string>& args) {
    const auto path = build_path(pa);
    auto os = open_out(out);
    path.write_csv(os);
    write_manifest(out, "path", args);
    return 0;
}

struct IrregArgs {
    double gamma = 0.55;
    double a_min = 1.0;
    double a_decades = 4.0;
    int points_per_decade = 8;
    int pair_depth = 8;
};

int cmd_irregularity(const PathArgs& pa, const IrregArgs& ia, const std::string& out, int threads,
                     const std::vector<std::string>& args) {
    const auto path = build_path(pa);
    const auto grid = modisperse::geometric_grid(
        ia.a_min, ia.a_min * std::pow(10.0, ia.a_decades), ia.points_per_decade);
    const auto pairs = modisperse::dyadic_pairs(pa.horizon, ia.pair_depth);
    const auto est = modisperse::estimate_rho(path, ia.gamma, grid, pairs,
                                              modisperse::resolve_threads(threads));
    auto os = open_out(out);
    os << modisperse::irregularity_report_json(est);
    write_manifest(out, "irregularity", args);
    std::cout << "rho_hat " << modisperse::fmt17(est.rho_hat) << '\n';
    return 0;
}

struct OperatorArgs {
    std::string mode = "probe";
    std::string equation = "kdv";
    int K = 16;
    double lambda = 1.0;
    double alpha = 0.0;
    double beta = 0.4;
    double gamma = 0.55;
    int samples = 16;
    int pair_depth = 4;
    int cases = 20;
    double dt = 1.0 / 1024.0;
    std::uint64_t field_seed = 11;
    std::vector<double> l_list = {4, 8, 12};
};

int cmd_operator(const PathArgs& pa, const OperatorArgs& oa, const std::string& out, int threads,
                 const std::vector<std::string>& args) {
    using namespace modisperse;
    auto path = std::make_shared<ModulationPath>(build_path(pa));
    const Equation eq = equation_from_string(oa.equation);
    ModulatedOperator op(eq, path, oa.lambda, oa.K);
    auto os = open_out(out);
    if (oa.mode == "probe") {
        const auto pairs = dyadic_pairs(pa.horizon, oa.pair_depth);
        const auto rows = operator_norm_probe(op, oa.alpha, oa.beta, oa.gamma, oa.samples,
                                              pairs.pairs, oa.field_seed,
                                              resolve_threads(threads));
        write_probe_csv(os, rows);
    } else if (oa.mode == "oracle") {
        os << "case,rel_err\n";
        for (int c = 0; c < oa.cases; ++c) {
            PathArgs pc = pa;
            pc.seed = pa.seed + static_cast<std::uint64_t>(c);
            auto pathc = std::make_shared<ModulationPath>(build_path(pc));
            ModulatedOperator opc(eq, pathc, oa.lambda, oa.K);
            const TorusField f = random_field(oa.lambda, oa.K, oa.alpha,
                                              oa.field_seed + static_cast<std::uint64_t>(c));
            const double s = (pa.horizon - oa.dt) * double(c) / double(std::max(1, oa.cases));
            const double t = s + oa.dt;
            const TorusField got = opc.x_quadratic(s, t, f);
            const TorusField ref =
                eq == Equation::kdv
                    ? quadref::x_kdv_reference(*pathc, oa.lambda, oa.K, s, t, f, f)
                    : quadref::x_mkdv_reference(*pathc, oa.lambda, oa.K, s, t, f, f, f);
            const double rel = l2_distance(got, ref) / l2_norm(ref);
            os << c << ',' << fmt17(rel) << '\n';
        }
    } else {  // truncation
        const TorusField f = random_field(oa.lambda, oa.K, oa.alpha, oa.field_seed);
        const double s = 0.0, t = std::min(pa.horizon, oa.dt * 64.0);
        const TorusField full = op.x_quadratic(s, t, f);
        os << "L,gap\n";
        for (double L : oa.l_list) {
            const TorusField xl = op.x_truncated(L, s, t, f);
            TorusField diff = full;
            for (int j = -diff.cutoff(); j <= diff.cutoff(); ++j) {
                if (j == 0) continue;
                const complexd v = std::abs(j) <= xl.cutoff() ? xl.coeff(j) : complexd(0.0);
                diff.set_coeff(j, diff.coeff(j) - v);
            }
            os << fmt17(L) << ',' << fmt17(l2_norm(diff) / l2_norm(full)) << '\n';
        }
    }
    write_manifest(out, "operator", args);
    return 0;
}

struct SolveArgs {
    std::string mode = "global";
    std::string equation = "kdv";
    double alpha = 0.0;
    int K = 32;
    double T = 1.0;
    double tol = 1e-10;
    double step = 1e-3;
    double gamma = 0.55;
    double lambda = 1.0;
    std::uint64_t field_seed = 11;
    std::vector<double> snapshots;
    std::vector<double> l_list = {8, 16, 32};
    std::string snapshot_prefix;
    bool zero_data = false;
};

int cmd_solve(const PathArgs& pa, const SolveArgs& sa, const std::string& out,
              const std::vector<std::string>& args) {
    using namespace modisperse;
    auto path = std::make_shared<ModulationPath>(build_path(pa));
    const Equation eq = equation_from_string(sa.equation);
    auto op = std::make_shared<ModulatedOperator>(eq, path, sa.lambda, sa.K);
    TorusField psi0 = random_field(sa.lambda, sa.K, sa.alpha, sa.field_seed);
    if (sa.zero_data) psi0 *= 0.0;
    auto os = open_out(out);
    if (sa.mode == "galerkin") {
        const auto rows = galerkin_convergence_study(*op, psi0, sa.T, sa.l_list, sa.tol, sa.step,
                                                     sa.gamma);
        os << "L,gap_c0,gap_c_half\n";
        for (const auto& r : rows) {
            os << fmt17(r.L) << ',' << fmt17(r.gap_c0) << ',' << fmt17(r.gap_c_half) << '\n';
        }
    } else {
        IncrementFamily fam = [op](double s, double t, const TorusField& g) {
            return op->x_quadratic(s, t, g, op->cutoff());
        };
        const SolutionTrace tr = solve_global(fam, psi0, sa.T, sa.tol, sa.step, sa.gamma);
        write_trace_csv(os, tr);
        for (std::size_t q = 0; q < sa.snapshots.size(); ++q) {
            // nearest trace time
            std::size_t best = 0;
            for (std::size_t i = 1; i < tr.times.size(); ++i) {
                if (std::abs(tr.times[i] - sa.snapshots[q]) <
                    std::abs(tr.times[best] - sa.snapshots[q])) {
                    best = i;
                }
            }
            const std::string prefix =
                sa.snapshot_prefix.empty() ? out + ".snapshot" : sa.snapshot_prefix;
            auto fs = open_out(prefix + std::to_string(q) + ".csv");
            tr.states[best].write_csv(fs);
        }
    }
    write_manifest(out, "solve", args);
    return 0;
}

struct IMethodArgs {
    std::string mode = "conservation";
    double alpha = -0.25;
    double N = 16.0;
    double epsilon0 = 0.1;
    int K = 32;
    int windows = 8;
    double tol = 1e-8;
    double step = 1.0 / 256.0;
    double gamma = 0.55;
    double lambda = -1.0;
    std::uint64_t field_seed = 2;
    int spu = 256;
    std::vector<double> n_list = {4, 8, 16, 32};
    int samples = 8;
    double dt = 1.0 / 64.0;
};

int cmd_imethod(const PathArgs& pa, const IMethodArgs& ia, const std::string& out,
                const std::vector<std::string>& args) {
    using namespace modisperse;
    auto os = open_out(out);
    if (ia.mode == "commutator") {
        auto path = std::make_shared<ModulationPath>(build_path(pa));
        ModulatedOperator op(Equation::kdv, path, 1.0, ia.K);
        os << "N,median_commutator\n";
        std::vector<double> lx, ly;
        for (double N : ia.n_list) {
            const IMultiplier mult(ia.alpha, N);
            std::vector<double> vals;
            for (int q = 0; q < ia.samples; ++q) {
                const TorusField f =
                    random_field(1.0, ia.K, ia.alpha, ia.field_seed + static_cast<std::uint64_t>(q));
                vals.push_back(commutator_norm(op, mult, 0.0, ia.dt, f, f));
            }
            std::sort(vals.begin(), vals.end());
            const double med = vals[vals.size() / 2];
            os << fmt17(N) << ',' << fmt17(med) << '\n';
            lx.push_back(std::log2(N));
            ly.push_back(std::log2(med));
        }
        const auto fit = least_squares(lx, ly);
        std::cout << "slope " << fmt17(fit.slope) << '\n';
    } else {
        AlmostConservationConfig cfg;
        cfg.alpha = ia.alpha;
        cfg.N = ia.N;
        cfg.epsilon0 = ia.epsilon0;
        cfg.K = ia.K;
        cfg.windows = ia.windows;
        cfg.tol = ia.tol;
        cfg.step_hint = ia.step;
        cfg.gamma = ia.gamma;
        cfg.path_seed = pa.seed;
        cfg.field_seed = ia.field_seed;
        cfg.samples_per_unit = ia.spu;
        cfg.lambda_override = ia.lambda;
        const auto rep = almost_conservation_run(cfg);
        os << almost_conservation_json(rep);
    }
    write_manifest(out, "imethod", args);
    return 0;
}

int cmd_rerun(const std::string& manifest, int threads) {
    std::ifstream is(manifest);
    if (!is) throw std::runtime_error("cannot open manifest: " + manifest);
    nlohmann::json j;
    is >> j;
    std::vector<std::string> args;
    for (const auto& a : j.at("args")) args.push_back(a.get<std::string>());
    if (threads != 0) {
        args.push_back("--threads");
        args.push_back(std::to_string(threads));
    }
    return run(args);
}

// ---------------------------------------------------------------- driver

int run(const std::vector<std::string>& args) {
    CLI::App app{"modisperse: modulated-dispersion spectral toolkit"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config")->configurable(false);
    app.require_subcommand(1);

    PathArgs pa;
    int threads = 0;
    std::string out;

    auto* c_path = app.add_subcommand("path", "generate a modulation path CSV");
    add_path_options(c_path, pa);
    c_path->add_option("--out", out, "output CSV")->required();
    c_path->add_option("--threads", threads, "worker threads (0 = auto)");

    IrregArgs ia;
    auto* c_irr = app.add_subcommand("irregularity", "estimate the decay exponent rho");
    add_path_options(c_irr, pa);
    c_irr->add_option("--gamma", ia.gamma, "time Holder exponent");
    c_irr->add_option("--a-min", ia.a_min, "lowest probed frequency");
    c_irr->add_option("--a-decades", ia.a_decades, "decades above a-min");
    c_irr->add_option("--points-per-decade", ia.points_per_decade, "a-grid density");
    c_irr->add_option("--pair-depth", ia.pair_depth, "dyadic (s,t) pair depth");
    c_irr->add_option("--out", out, "output JSON report")->required();
    c_irr->add_option("--threads", threads, "worker threads (0 = auto)");

    OperatorArgs oa;
    auto* c_op = app.add_subcommand("operator", "operator probes and reference comparisons");
    add_path_options(c_op, pa);
    c_op->add_option("--mode", oa.mode, "probe|oracle|truncation")
        ->check(CLI::IsMember({"probe", "oracle", "truncation"}));
    c_op->add_option("--equation", oa.equation, "kdv|mkdv")
        ->check(CLI::IsMember({"kdv", "mkdv"}));
    c_op->add_option("--K", oa.K, "mode cutoff");
    c_op->add_option("--lambda", oa.lambda, "torus scale");
    c_op->add_option("--alpha", oa.alpha, "input regularity");
    c_op->add_option("--beta", oa.beta, "output norm exponent");
    c_op->add_option("--gamma", oa.gamma, "time Holder exponent");
    c_op->add_option("--samples", oa.samples, "random fields per probe pair");
    c_op->add_option("--pair-depth", oa.pair_depth, "dyadic pair depth");
    c_op->add_option("--cases", oa.cases, "reference comparison cases");
    c_op->add_option("--dt", oa.dt, "interval length for comparisons");
    c_op->add_option("--field-seed", oa.field_seed, "field RNG seed");
    c_op->add_option("--l-list", oa.l_list, "truncation levels")->delimiter(',');
    c_op->add_option("--out", out, "output CSV")->required();
    c_op->add_option("--threads", threads, "worker threads (0 = auto)");

    SolveArgs sa;
    auto* c_solve = app.add_subcommand("solve", "run the nonlinear Young solver");
    add_path_options(c_solve, pa);
    c_solve->add_option("--mode", sa.mode, "global|galerkin")
        ->check(CLI::IsMember({"global", "galerkin"}));
    c_solve->add_option("--equation", sa.equation, "kdv|mkdv")
        ->check(CLI::IsMember({"kdv", "mkdv"}));
    c_solve->add_option("--alpha", sa.alpha, "initial data regularity");
    c_solve->add_option("--K", sa.K, "mode cutoff");
    c_solve->add_option("--lambda", sa.lambda, "torus scale");
    c_solve->add_option("--T", sa.T, "final time");
    c_solve->add_option("--tol", sa.tol, "Picard tolerance");
    c_solve->add_option("--step", sa.step, "target step size");
    c_solve->add_option("--gamma", sa.gamma, "time Holder exponent");
    c_solve->add_option("--field-seed", sa.field_seed, "field RNG seed");
    c_solve->add_option("--snapshots", sa.snapshots, "snapshot times")->delimiter(',');
    c_solve->add_option("--snapshot-prefix", sa.snapshot_prefix, "snapshot file prefix");
    c_solve->add_option("--l-list", sa.l_list, "galerkin levels (last = reference)")
        ->delimiter(',');
    c_solve->add_flag("--zero-data", sa.zero_data, "use zero initial data");
    c_solve->add_option("--out", out, "output trace/table CSV")->required();
    c_solve->add_option("--threads", threads, "worker threads (0 = auto)");

    IMethodArgs ma;
    auto* c_im = app.add_subcommand("imethod", "commutator scans and almost conservation");
    add_path_options(c_im, pa);
    c_im->add_option("--mode", ma.mode, "commutator|conservation")
        ->check(CLI::IsMember({"commutator", "conservation"}));
    c_im->add_option("--alpha", ma.alpha, "data regularity (negative)");
    c_im->add_option("--N", ma.N, "I-multiplier cutoff");
    c_im->add_option("--epsilon0", ma.epsilon0, "target rescaled energy");
    c_im->add_option("--K", ma.K, "mode cutoff");
    c_im->add_option("--windows", ma.windows, "unit windows after rescaling");
    c_im->add_option("--tol", ma.tol, "Picard tolerance");
    c_im->add_option("--step", ma.step, "target step size");
    c_im->add_option("--gamma", ma.gamma, "time Holder exponent");
    c_im->add_option("--lambda", ma.lambda, "override the rescaling (skip bisection)");
    c_im->add_option("--field-seed", ma.field_seed, "field RNG seed");
    c_im->add_option("--spu", ma.spu, "path samples per unit rescaled time");
    c_im->add_option("--n-list", ma.n_list, "N values for the commutator scan")->delimiter(',');
    c_im->add_option("--samples", ma.samples, "fields per N in the scan");
    c_im->add_option("--dt", ma.dt, "commutator interval length");
    c_im->add_option("--out", out, "output report")->required();
    c_im->add_option("--threads", threads, "worker threads (0 = auto)");

    std::string manifest;
    int rerun_threads = 0;
    auto* c_rerun = app.add_subcommand("rerun", "re-execute a command from its manifest");
    c_rerun->add_option("--manifest", manifest, "manifest JSON")->required();
    c_rerun->add_option("--threads", rerun_threads, "worker threads override");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (c_path->parsed()) return cmd_path(pa, out, args);
    if (c_irr->parsed()) return cmd_irregularity(pa, ia, out, threads, args);
    if (c_op->parsed()) return cmd_operator(pa, oa, out, threads, args);
    if (c_solve->parsed()) return cmd_solve(pa, sa, out, args);
    if (c_im->parsed()) return cmd_imethod(pa, ma, out, args);
    if (c_rerun->parsed()) return cmd_rerun(manifest, rerun_threads);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args);
    } catch (const modisperse::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
