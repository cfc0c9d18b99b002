// rkl: predictors, solvers, and experiment drivers for restarted Krylov
// and Anderson iterations on small dense systems.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rkl/exact.hpp"
#include "rkl/experiments.hpp"
#include "rkl/matrix_io.hpp"
#include "rkl/solvers.hpp"
#include "rkl/spectral.hpp"
#include "rkl/theory.hpp"
#include "svg_plot.hpp"

namespace {

using namespace rkl;
using linalg::DenseMatrix;
using linalg::DenseVector;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DenseMatrix load_matrix(const std::string& name_or_path) {
    if (experiments::is_builtin_matrix(name_or_path)) {
        return experiments::builtin_matrix(name_or_path);
    }
    return io::read_matrix_file(name_or_path);
}

std::vector<int> to_zero_based(const std::vector<int>& one_based, int count, const char* what) {
    std::vector<int> out;
    for (int v : one_based) {
        if (v < 1 || v > count) {
            throw InvalidArgument(std::string(what) + " index " + std::to_string(v) +
                                  " out of range 1.." + std::to_string(count));
        }
        out.push_back(v - 1);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << content;
}

// ---------------------------------------------------------------- predict

int run_predict(const std::string& matrix, const std::vector<int>& restrict_1based) {
    const DenseMatrix A = load_matrix(matrix);
    std::printf("matrix: %s (n=%zu)\n", matrix.c_str(), A.size());

    if (A.is_symmetric(1e-12)) {
        const auto spectrum = spectral::eig_symmetric(A);
        auto rep = theory::worst_case_gmres1(spectrum);
        std::printf("regime: %s\n", theory::to_string(rep.regime).c_str());
        std::printf("distinct_eigenvalues:");
        for (double a : spectrum.distinct) std::printf(" %s", fmt(a).c_str());
        std::printf("\n");
        std::printf("rho_star_gmres1 = %s\n", fmt(rep.worst_case_rho).c_str());
        const double lam = theory::lambda_star_raa1(spectrum);
        std::printf("lambda_star_raa1 = %s\n", fmt(lam).c_str());
        std::printf("raa1_lower_bound = %s\n", fmt(std::pow(lam, 0.25)).c_str());
        if (!restrict_1based.empty()) {
            const auto sel = to_zero_based(restrict_1based, spectrum.group_count(), "eigenvalue");
            const auto rrep = theory::worst_case_gmres1(spectrum, sel);
            std::printf("rho_star_restricted = %s\n", fmt(rrep.worst_case_rho).c_str());
        }
        std::printf("pairs (i j factor eps_sq):\n");
        for (const auto& p : rep.pairs) {
            std::printf("  %d %d %s %s\n", p.i + 1, p.j + 1, fmt(p.value).c_str(),
                        fmt(p.eps_sq).c_str());
        }
        return kExitOk;
    }

    const DenseMatrix M = DenseMatrix::identity(A.size()) - A;
    if (M.is_skew_symmetric(1e-12)) {
        const auto blocks = spectral::schur_skew(M);
        std::printf("regime: SkewM\n");
        std::printf("block_moduli:");
        for (const auto& b : blocks.blocks) std::printf(" %s", fmt(b.modulus).c_str());
        std::printf("\n");
        std::printf("rho_star_gmres1_ss = %s\n", fmt(theory::worst_case_skew(blocks)).c_str());
        std::printf("rho_star_raa1_ss = %s\n", fmt(theory::raa1_factor_skew(blocks)).c_str());
        if (!restrict_1based.empty()) {
            const auto sel =
                to_zero_based(restrict_1based, static_cast<int>(blocks.blocks.size()), "block");
            std::printf("rho_star_restricted = %s\n",
                        fmt(theory::skew_factor_restricted(blocks, sel)).c_str());
        }
        std::printf("blocks (j modulus factor):\n");
        const auto rep = theory::skew_report(blocks);
        for (const auto& p : rep.pairs) {
            std::printf("  %d %s %s\n", p.i + 1, fmt(p.eps_sq).c_str(), fmt(p.value).c_str());
        }
        return kExitOk;
    }
    throw UnsupportedStructure("matrix is neither symmetric nor I - A skew-symmetric");
}

// ------------------------------------------------------------------ solve

DenseVector make_x0(const std::string& x0_spec, std::size_t n) {
    if (x0_spec == "zeros") return DenseVector(n);
    if (x0_spec.rfind("rand:", 0) == 0) {
        const std::uint64_t seed = std::stoull(x0_spec.substr(5));
        return experiments::random_x0(n, seed, 0);
    }
    DenseVector x0 = io::read_vector_file(x0_spec);
    if (x0.size() != n) throw DimensionMismatch("x0 dimension does not match the matrix");
    return x0;
}

int run_solve(const std::string& matrix, const std::string& x0_spec, const std::string& method,
              double tol, int max_iters, const std::string& trace_path) {
    const DenseMatrix A = load_matrix(matrix);
    const DenseVector x0 = make_x0(x0_spec, A.size());
    const DenseVector b(A.size());

    solvers::SolveConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;

    solvers::SolveResult res;
    if (method == "gmres1") res = solvers::gmres1(A, b, x0, cfg);
    else if (method == "raa1") res = solvers::raa1(A, b, x0, cfg);
    else if (method == "stationary") res = solvers::stationary(A, b, x0, cfg);
    else throw InvalidArgument("unknown method '" + method + "'");

    std::printf("matrix: %s (n=%zu) method: %s\n", matrix.c_str(), A.size(), method.c_str());
    std::printf("termination: %s\n", solvers::to_string(res.trace.termination).c_str());
    std::printf("steps: %d\n", res.trace.steps());
    std::printf("final_residual = %s\n", fmt(res.trace.residual_norms.back()).c_str());
    std::printf("final_rho = %s\n", fmt(res.trace.final_rho()).c_str());
    if (!trace_path.empty()) {
        write_file(trace_path, experiments::trace_csv(res.trace));
        std::printf("trace: %s\n", trace_path.c_str());
    }
    const bool numeric_failure = res.trace.termination == solvers::Termination::Breakdown ||
                                 res.trace.termination == solvers::Termination::Diverged;
    return numeric_failure ? kExitNumeric : kExitOk;
}

// ---------------------------------------------------------------- measure

int run_measure(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw ParseError("cannot open config file: " + config_path);
    const auto cfg = experiments::parse_config(in);
    const auto result = experiments::run_ensemble(cfg);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/ensemble.csv", experiments::ensemble_csv(result));
    write_file(out_dir + "/ensemble.meta", experiments::ensemble_metadata(result));
    std::printf("trials: %d\n", cfg.trials);
    std::printf("theoretical_rho = %s\n", fmt(result.theoretical_rho).c_str());
    std::printf("max_observed_rho_tail = %s\n", fmt(result.max_observed_rho_tail).c_str());
    std::printf("wrote %s/ensemble.csv and %s/ensemble.meta\n", out_dir.c_str(), out_dir.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- eigpair

int run_eigpair(const std::string& matrix, const std::string& map_name,
                const std::string& pair_spec, const std::string& eps_spec, bool spread) {
    const DenseMatrix A = load_matrix(matrix);
    if (!A.is_symmetric(1e-12)) throw NotSymmetric("eigpair requires a symmetric matrix");
    const auto spectrum = spectral::eig_symmetric(A);

    theory::MapKind kind;
    if (map_name == "i2") kind = theory::MapKind::I2;
    else if (map_name == "pi") kind = theory::MapKind::Pi;
    else if (map_name == "psi") kind = theory::MapKind::Psi;
    else if (map_name == "upsilon") kind = theory::MapKind::Upsilon;
    else throw InvalidArgument("unknown map '" + map_name + "'");

    const std::size_t comma = pair_spec.find(',');
    if (comma == std::string::npos) throw InvalidArgument("--pair expects i,j");
    const int i1 = std::stoi(pair_spec.substr(0, comma));
    const int i2 = std::stoi(pair_spec.substr(comma + 1));
    const auto sel = to_zero_based({i1, i2}, spectrum.group_count(), "eigenvalue");

    theory::EigpairOptions opts;
    opts.spread = spread;
    if (eps_spec != "auto") opts.eps = std::stod(eps_spec);

    const auto pair = theory::construct_eigpair(spectrum, kind, sel[0], sel[1], opts);
    const double resid = theory::verify_eigenpair(A, pair);

    std::printf("map: %s pair: (%d,%d) a_i=%s a_j=%s\n", theory::to_string(kind).c_str(), i1, i2,
                fmt(spectrum.distinct[sel[0]]).c_str(), fmt(spectrum.distinct[sel[1]]).c_str());
    std::printf("eps = %s%s\n", fmt(pair.eps).c_str(), eps_spec == "auto" ? " (auto)" : "");
    std::printf("value = %s\n", fmt(pair.value).c_str());
    std::printf("verify_residual = %s\n", fmt(resid).c_str());
    return kExitOk;
}

// ----------------------------------------------------------- counterexample

int run_counterexample(const std::string& which, bool exact_print) {
    std::vector<int> cases;
    if (which == "all") cases = {1, 2, 3};
    else cases = {std::stoi(which)};

    bool all_violated = true;
    for (int c : cases) {
        if (c < 1 || c > 3) throw InvalidArgument("case must be 1, 2, 3 or all");
        const std::string name = "CA" + std::to_string(c);
        const auto A = experiments::builtin_matrix_exact(name);
        const auto v = experiments::counterexample_vector(c);
        const auto chk = exact::check_conjecture_violation(A, v);
        const double ratio = std::sqrt(exact::to_float(chk.ratio_sq));
        const auto parity = exact::parity_certificate(A, v);

        std::printf("case %d: matrix=%s\n", c, name.c_str());
        std::printf("  lambda_star = %s ~= %s\n", chk.lambda_star.to_string().c_str(),
                    fmt(exact::to_float(chk.lambda_star)).c_str());
        std::printf("  ratio = %s (exact ratio_sq = %s)\n", fmt(ratio).c_str(),
                    chk.ratio_sq.to_string().c_str());
        std::printf("  verdict: %s\n", chk.violated ? "VIOLATED" : "NOT-VIOLATED");
        std::printf("  parity_certificate: %s\n",
                    parity ? (*parity ? "true (parities differ, exact inequality certified)"
                                      : "inconclusive (parities agree)")
                           : "not-applicable");
        if (exact_print) {
            for (std::size_t i = 0; i < chk.w.size(); ++i) {
                std::printf("  w[%zu] = %s ~= %s\n", i, chk.w[i].to_string().c_str(),
                            fmt(exact::to_float(chk.w[i])).c_str());
            }
        }
        all_violated = all_violated && chk.violated;
    }
    return all_violated ? kExitOk : kExitNumeric;
}

// ----------------------------------------------------------------- figure

void write_panel(const std::string& out_dir, const std::string& stem,
                 const experiments::EnsembleResult& result) {
    tools::SvgPlot plot;
    plot.dashed_y = result.theoretical_rho;
    plot.title = stem;
    for (const auto& tr : result.trials) {
        tools::SvgPlot::Curve c;
        for (std::size_t k = 1; k <= tr.rho_series.size(); ++k) {
            c.xs.push_back(static_cast<double>(k));
            c.ys.push_back(tr.rho_series[k - 1]);
        }
        plot.curves.push_back(std::move(c));
    }
    write_file(out_dir + "/" + stem + ".csv", experiments::ensemble_csv(result));
    write_file(out_dir + "/" + stem + ".meta", experiments::ensemble_metadata(result));
    write_file(out_dir + "/" + stem + ".svg", tools::render_svg(plot));
}

void write_structured_panel(const std::string& out_dir, const std::string& stem,
                            const std::vector<solvers::IterationTrace>& traces, double dashed) {
    tools::SvgPlot plot;
    plot.dashed_y = dashed;
    plot.title = stem;
    std::string csv = "trial,k,residual_norm,rho_k,alpha_k,termination\n";
    for (std::size_t t = 0; t < traces.size(); ++t) {
        tools::SvgPlot::Curve c;
        for (std::size_t k = 1; k <= traces[t].rho_series.size(); ++k) {
            c.xs.push_back(static_cast<double>(k));
            c.ys.push_back(traces[t].rho_series[k - 1]);
        }
        plot.curves.push_back(std::move(c));
        std::string one = experiments::trace_csv(traces[t]);
        if (t == 0) {
            csv = one;
        } else {
            // append without the header, renumbering the trial column
            std::istringstream ss(one);
            std::string line;
            std::getline(ss, line);
            while (std::getline(ss, line)) {
                const auto comma = line.find(',');
                csv += std::to_string(t) + line.substr(comma) + "\n";
            }
        }
    }
    write_file(out_dir + "/" + stem + ".csv", csv);
    write_file(out_dir + "/" + stem + ".svg", tools::render_svg(plot));
}

int run_figure(const std::string& name, const std::string& out_dir, int trials,
               std::uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    experiments::EnsembleConfig base;
    base.trials = trials;
    base.seed = seed;
    base.tol = 1e-30;
    base.max_iters = 2000;

    if (name == "fig1") {
        auto cfg = base;
        cfg.matrix = "A1";
        write_panel(out_dir, "fig1_left", experiments::run_ensemble(cfg));
        cfg.matrix = "A2";
        write_panel(out_dir, "fig1_right", experiments::run_ensemble(cfg));
        return kExitOk;
    }
    if (name == "fig2") {
        auto cfg = base;
        cfg.matrix = "A3";
        write_panel(out_dir, "fig2_left", experiments::run_ensemble(cfg));
        cfg.mask = {0};
        write_panel(out_dir, "fig2_right", experiments::run_ensemble(cfg));
        return kExitOk;
    }
    if (name == "fig3") {
        const DenseMatrix A2 = experiments::builtin_matrix("A2");
        const DenseVector xa{1.0, 2.0 * std::sqrt(2.0), 0.0, 0.0, 0.0};
        const DenseVector xb{1.0, 0.0, 8.0, 0.0, 0.0};
        const auto ra = experiments::run_structured(A2, xa, "gmres1", base.tol, base.max_iters);
        const auto rb = experiments::run_structured(A2, xb, "gmres1", base.tol, base.max_iters);
        const auto spectrum = spectral::eig_symmetric(A2);
        write_structured_panel(out_dir, "fig3", {ra.result.trace, rb.result.trace},
                               theory::worst_case_gmres1(spectrum).worst_case_rho);
        return kExitOk;
    }
    if (name == "fig4") {
        auto cfg = base;
        cfg.matrix = "A4";
        write_panel(out_dir, "fig4_left", experiments::run_ensemble(cfg));

        // Initial guess spanning every block except the dominant one: the
        // run contracts at the second-largest modulus factor.
        const DenseMatrix A4 = experiments::builtin_matrix("A4");
        const DenseMatrix M = DenseMatrix::identity(A4.size()) - A4;
        const auto blocks = spectral::schur_skew(M);
        DenseVector x0(A4.size());
        std::vector<int> rest;
        for (std::size_t j = 1; j < blocks.blocks.size(); ++j) {
            rest.push_back(static_cast<int>(j));
            for (std::size_t i = 0; i < A4.size(); ++i) {
                x0[i] += blocks.q(i, blocks.blocks[j].col);
            }
        }
        const auto run = experiments::run_structured(A4, x0, "gmres1", base.tol, base.max_iters);
        write_structured_panel(out_dir, "fig4_right", {run.result.trace},
                               theory::skew_factor_restricted(blocks, rest));
        return kExitOk;
    }
    throw InvalidArgument("unknown figure name '" + name + "' (use fig1..fig4)");
}

int dispatch(int exit_usage_on_any_error, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage_on_any_error ? kExitUsage : kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root-convergence analysis of GMRES(1) and restarted AA(1)"};
    app.require_subcommand(1);

    // predict
    std::string p_matrix;
    std::vector<int> p_restrict;
    auto* predict = app.add_subcommand("predict", "Worst-case convergence factors from the spectrum");
    predict->add_option("--matrix", p_matrix, "builtin name (A1..A4, CA1..CA3) or matrix file")
        ->required();
    predict->add_option("--restrict", p_restrict,
                        "1-based eigenvalue indices (symmetric) or Schur block indices (skew)")
        ->delimiter(',');

    // solve
    std::string s_matrix, s_x0 = "rand:1", s_method = "gmres1", s_trace;
    double s_tol = 1e-30;
    int s_max_iters = 10000;
    auto* solve = app.add_subcommand("solve", "Run one solve of A x = 0 and report the trace");
    solve->add_option("--matrix", s_matrix, "matrix name or file")->required();
    solve->add_option("--x0", s_x0, "initial guess: file path, 'zeros', or 'rand:<seed>'");
    solve->add_option("--method", s_method, "gmres1 | raa1 | stationary");
    solve->add_option("--tol", s_tol, "residual norm stopping threshold");
    solve->add_option("--max-iters", s_max_iters, "iteration cap");
    solve->add_option("--trace", s_trace, "write the per-step CSV trace here");

    // measure
    std::string m_config, m_out = ".";
    auto* measure = app.add_subcommand("measure", "Run a random-ensemble experiment from a config");
    measure->add_option("--config", m_config, "key=value config file")->required();
    measure->add_option("--out", m_out, "output directory");

    // eigpair
    std::string e_matrix, e_map = "pi", e_pair, e_eps = "auto";
    bool e_spread = false;
    auto* eigpair = app.add_subcommand("eigpair", "Construct and verify a nonlinear eigenpair");
    eigpair->add_option("--matrix", e_matrix, "matrix name or file")->required();
    eigpair->add_option("--map", e_map, "i2 | pi | psi | upsilon");
    eigpair->add_option("--pair", e_pair, "1-based distinct-eigenvalue indices i,j")->required();
    eigpair->add_option("--eps", e_eps, "mode ratio, or 'auto' for the admissible/maximizing one");
    eigpair->add_flag("--spread", e_spread, "randomized multi-component eigenvector");

    // counterexample
    std::string c_case = "all";
    bool c_exact_print = false;
    auto* counter = app.add_subcommand("counterexample",
                                       "Exact-rational certificates against the Lambda* conjecture");
    counter->add_option("--case", c_case, "1 | 2 | 3 | all");
    counter->add_flag("--exact-print", c_exact_print, "print the exact fractions of Upsilon(v)v");

    // figure
    std::string f_name, f_out = ".";
    int f_trials = 1000;
    std::uint64_t f_seed = 42;
    auto* figure = app.add_subcommand("figure", "Reproduce an experiment figure (CSV + SVG)");
    figure->add_option("--name", f_name, "fig1 | fig2 | fig3 | fig4")->required();
    figure->add_option("--out", f_out, "output directory");
    figure->add_option("--trials", f_trials, "ensemble size");
    figure->add_option("--seed", f_seed, "ensemble seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (predict->parsed()) {
        return dispatch(1, [&] { return run_predict(p_matrix, p_restrict); });
    }
    if (solve->parsed()) {
        return dispatch(0, [&] {
            return run_solve(s_matrix, s_x0, s_method, s_tol, s_max_iters, s_trace);
        });
    }
    if (measure->parsed()) {
        return dispatch(1, [&] { return run_measure(m_config, m_out); });
    }
    if (eigpair->parsed()) {
        return dispatch(0, [&] { return run_eigpair(e_matrix, e_map, e_pair, e_eps, e_spread); });
    }
    if (counter->parsed()) {
        return dispatch(0, [&] { return run_counterexample(c_case, c_exact_print); });
    }
    if (figure->parsed()) {
        return dispatch(1, [&] { return run_figure(f_name, f_out, f_trials, f_seed); });
    }
    return kExitUsage;
}
