#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "rkl/experiments.hpp"
#include "test_support.hpp"

using namespace rkl;
using experiments::EnsembleConfig;
using linalg::DenseMatrix;
using linalg::DenseVector;

TEST_CASE("builtin matrices") {
    const DenseMatrix a1 = experiments::builtin_matrix("A1");
    CHECK(a1.size() == 3);
    CHECK(a1(2, 2) == 3.0);

    const DenseMatrix a4 = experiments::builtin_matrix("A4");
    // symmetric part of A4 is the identity (M is skew)
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(0.5 * (a4(i, j) + a4(j, i)) == (i == j ? 1.0 : 0.0));
        }
    }

    const DenseMatrix c2 = experiments::builtin_matrix("CA2");
    CHECK(c2(0, 0) == -0.5);
    CHECK(c2(1, 1) == -4.0);
    CHECK(c2(2, 2) == 2.0);

    CHECK_THROWS_AS(experiments::builtin_matrix("A9"), InvalidArgument);
    CHECK_THROWS_AS(experiments::counterexample_vector(4), InvalidArgument);
}

TEST_CASE("ensemble output is deterministic for a fixed config") {
    EnsembleConfig cfg;
    cfg.matrix = "A1";
    cfg.trials = 16;
    cfg.seed = 7;
    cfg.max_iters = 400;
    const auto r1 = experiments::run_ensemble(cfg);
    const auto r2 = experiments::run_ensemble(cfg);
    CHECK(experiments::ensemble_csv(r1) == experiments::ensemble_csv(r2));
    CHECK(experiments::ensemble_metadata(r1) == experiments::ensemble_metadata(r2));
}

TEST_CASE("ensemble csv schema") {
    EnsembleConfig cfg;
    cfg.matrix = "A1";
    cfg.trials = 2;
    cfg.seed = 3;
    cfg.max_iters = 50;
    const auto result = experiments::run_ensemble(cfg);
    const std::string csv = experiments::ensemble_csv(result);
    std::istringstream ss(csv);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "trial,k,residual_norm,rho_k,alpha_k,termination");
    std::string first;
    std::getline(ss, first);
    CHECK(first.rfind("0,0,", 0) == 0);
    // every row has exactly five commas
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
        ++rows;
    }
    CHECK(rows > 10);
}

TEST_CASE("masked components stay exactly zero for diagonal systems") {
    EnsembleConfig cfg;
    cfg.matrix = "A3";
    cfg.trials = 8;
    cfg.seed = 11;
    cfg.mask = {0};
    cfg.max_iters = 300;
    const auto result = experiments::run_ensemble(cfg);
    CHECK(result.theoretical_rho == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // rerun one trial by hand and watch the masked residual component
    const DenseMatrix a3 = experiments::builtin_matrix("A3");
    DenseVector x0 = experiments::random_x0(4, cfg.seed, 5);
    x0[0] = 0.0;
    solvers::SolveConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iters = cfg.max_iters;
    scfg.record_vectors = true;
    const auto res = solvers::gmres1(a3, DenseVector(4), x0, scfg);
    for (const auto& r : res.trace.residual_vectors) CHECK(r[0] == 0.0);
}

TEST_CASE("ensemble bound: no trial exceeds the worst case after the transient") {
    EnsembleConfig cfg;
    cfg.matrix = "A2";
    cfg.trials = 60;
    cfg.seed = 19;
    cfg.max_iters = 2000;
    const auto result = experiments::run_ensemble(cfg);
    CHECK(result.theoretical_rho == doctest::Approx(15.0 / 17.0).epsilon(1e-14));
    for (const auto& tr : result.trials) {
        CHECK(tr.termination == solvers::Termination::Converged);
        for (std::size_t k = 20; k < tr.residual_norms.size(); ++k) {
            CHECK(tr.rho_series[k - 1] <= result.theoretical_rho + 1e-3);
        }
    }
}

TEST_CASE("block-restricted ensembles stay inside the selected spans") {
    EnsembleConfig cfg;
    cfg.matrix = "A4";
    cfg.trials = 12;
    cfg.seed = 5;
    cfg.block_init = {1, 2, 3};
    cfg.max_iters = 2000;
    const auto result = experiments::run_ensemble(cfg);
    CHECK(result.theoretical_rho == doctest::Approx(0.6).epsilon(1e-12));
    for (const auto& tr : result.trials) {
        CHECK(tr.rho_series.back() == doctest::Approx(0.6).epsilon(0.02));
    }

    EnsembleConfig bad = cfg;
    bad.matrix = "A1";
    CHECK_THROWS_AS(experiments::run_ensemble(bad), InvalidArgument);
    bad = cfg;
    bad.block_init = {7};
    CHECK_THROWS_AS(experiments::run_ensemble(bad), InvalidArgument);
}

TEST_CASE("structured runs pair measurements with predictions") {
    const DenseMatrix a2 = experiments::builtin_matrix("A2");
    const DenseVector xa{1.0, 2.0 * std::sqrt(2.0), 0.0, 0.0, 0.0};
    const auto ra = experiments::run_structured(a2, xa, "gmres1", 1e-30, 2000);
    CHECK(ra.predicted_rho == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(!ra.predicted_is_bound);
    CHECK(ra.result.trace.rho_at(60) == doctest::Approx(ra.predicted_rho).epsilon(5e-3));

    // single-mode start converges in one step with prediction zero
    const DenseVector xe{1.0, 0.0, 0.0, 0.0, 0.0};
    const auto re = experiments::run_structured(a2, xe, "gmres1", 1e-30, 100);
    CHECK(re.predicted_rho == 0.0);
    CHECK(re.result.trace.termination == solvers::Termination::Converged);
    CHECK(re.result.trace.steps() == 1);

    // three active modes: the prediction is the restricted worst case
    const DenseVector x3{1.0, 1.0, 1.0, 0.0, 0.0};
    const auto r3 = experiments::run_structured(a2, x3, "gmres1", 1e-30, 2000);
    CHECK(r3.predicted_is_bound);
    CHECK(r3.predicted_rho == doctest::Approx(3.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("config parser round trip and validation") {
    std::istringstream in(
        "# experiment configuration\n"
        "matrix=A2\n"
        "trials=25\n"
        "seed=99\n"
        "solver=raa1\n"
        "tol=1e-20\n"
        "max_iters=500\n"
        "mask=0,2\n"
        "block_init=\n");
    const auto cfg = experiments::parse_config(in);
    CHECK(cfg.matrix == "A2");
    CHECK(cfg.trials == 25);
    CHECK(cfg.seed == 99);
    CHECK(cfg.solver == "raa1");
    CHECK(cfg.tol == 1e-20);
    CHECK(cfg.max_iters == 500);
    CHECK(cfg.mask == std::vector<int>{0, 2});
    CHECK(cfg.block_init.empty());

    std::istringstream bad("unknown_key=1\n");
    CHECK_THROWS_AS(experiments::parse_config(bad), ParseError);
    std::istringstream noeq("just a line\n");
    CHECK_THROWS_AS(experiments::parse_config(noeq), ParseError);
}

TEST_CASE("metadata carries the config echo and a content hash") {
    EnsembleConfig cfg;
    cfg.matrix = "A1";
    cfg.trials = 4;
    cfg.seed = 2;
    cfg.max_iters = 100;
    const auto result = experiments::run_ensemble(cfg);
    const std::string meta = experiments::ensemble_metadata(result);
    CHECK(meta.find("matrix=A1") != std::string::npos);
    CHECK(meta.find("trials=4") != std::string::npos);
    CHECK(meta.find("distribution=uniform(-1,1)") != std::string::npos);
    CHECK(meta.find("theoretical_rho=0.5") != std::string::npos);
    CHECK(meta.find("content_hash=") != std::string::npos);

    // git-style blob hash of a known string
    CHECK(experiments::content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("ensemble output does not depend on the worker count") {
    EnsembleConfig cfg;
    cfg.matrix = "A2";
    cfg.trials = 24;
    cfg.seed = 77;
    cfg.max_iters = 800;
    setenv("RKL_THREADS", "1", 1);
    const std::string serial = experiments::ensemble_csv(experiments::run_ensemble(cfg));
    unsetenv("RKL_THREADS");
    const std::string parallel = experiments::ensemble_csv(experiments::run_ensemble(cfg));
    CHECK(serial == parallel);
}

TEST_CASE("ensembles accept matrices from files") {
    const std::string path = "exp_test_matrix.mat";
    {
        std::ofstream out(path);
        out << "2\n1/2 0\n0 2\n";
    }
    EnsembleConfig cfg;
    cfg.matrix = path;
    cfg.trials = 3;
    cfg.seed = 1;
    cfg.max_iters = 300;
    const auto result = experiments::run_ensemble(cfg);
    CHECK(result.theoretical_rho == doctest::Approx(1.5 / 2.5).epsilon(1e-14));
    for (const auto& tr : result.trials) {
        CHECK(tr.termination == solvers::Termination::Converged);
    }
    std::remove(path.c_str());

    EnsembleConfig missing;
    missing.matrix = "no_such_matrix_file.mat";
    CHECK_THROWS_AS(experiments::run_ensemble(missing), ParseError);
}

TEST_CASE("per-trial rng substreams are independent of execution order") {
    const DenseVector a = experiments::random_x0(5, 42, 0);
    const DenseVector b = experiments::random_x0(5, 42, 1);
    const DenseVector a2 = experiments::random_x0(5, 42, 0);
    CHECK(linalg::norm2(a - a2) == 0.0);
    CHECK(linalg::norm2(a - b) > 1e-3);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a[i] >= -1.0);
        CHECK(a[i] <= 1.0);
    }
}
