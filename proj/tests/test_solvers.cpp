#include <doctest.h>

#include <cmath>

#include "rkl/experiments.hpp"
#include "rkl/solvers.hpp"
#include "rkl/theory.hpp"
#include "test_support.hpp"

using namespace rkl;
using linalg::DenseMatrix;
using linalg::DenseVector;
using solvers::SolveConfig;
using solvers::Termination;

TEST_CASE("gmres1 on the identity converges in one step") {
    const DenseMatrix a = DenseMatrix::identity(4);
    const DenseVector b{1.0, -2.0, 3.0, 0.5};
    const DenseVector x0(4);
    const auto res = solvers::gmres1(a, b, x0, {});
    CHECK(res.trace.termination == Termination::Converged);
    CHECK(res.trace.steps() == 1);
    CHECK(res.trace.alphas[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 0; i < 4; ++i) CHECK(res.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("gmres1 residual norms are nonincreasing and rho matches its recomputation") {
    rkltest::Rng rng(5);
    const DenseMatrix a = rkltest::symmetric_with_spectrum({0.4, 1.0, 1.7, 2.2, 3.1}, rng);
    const DenseVector x0 = rkltest::random_vector(5, rng);
    SolveConfig cfg;
    cfg.tol = 1e-28;
    const auto res = solvers::gmres1(a, DenseVector(5), x0, cfg);
    CHECK(res.trace.termination == Termination::Converged);
    for (int k = 1; k <= res.trace.steps(); ++k) {
        CHECK(res.trace.residual_norms[k] <=
              res.trace.residual_norms[k - 1] * (1.0 + 1e-14));
        const double direct = std::pow(res.trace.residual_norms[k], 1.0 / k);
        CHECK(res.trace.rho_at(k) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("gmres1 recursive residual tracks the true residual") {
    rkltest::Rng rng(17);
    const DenseMatrix a = rkltest::symmetric_with_spectrum({0.5, 1.2, 2.8}, rng);
    const DenseVector b = rkltest::random_vector(3, rng);
    const DenseVector x0 = rkltest::random_vector(3, rng);
    SolveConfig cfg;
    cfg.tol = 1e-25;
    cfg.record_vectors = true;
    const auto res = solvers::gmres1(a, b, x0, cfg);

    // replay x_k from the stored alphas and residual vectors
    DenseVector x = x0;
    const double n0 = res.trace.residual_norms[0];
    for (int k = 0; k <= res.trace.steps(); ++k) {
        DenseVector true_r = linalg::matvec(a, x);
        for (std::size_t i = 0; i < 3; ++i) true_r[i] -= b[i];
        CHECK(linalg::norm2(true_r - res.trace.residual_vectors[k]) <= 1e-10 * n0);
        if (k < res.trace.steps()) {
            linalg::axpy(-res.trace.alphas[k], res.trace.residual_vectors[k], x);
        }
    }
}

TEST_CASE("structured two-mode runs on the geometric diagonal") {
    const DenseMatrix a2 = experiments::builtin_matrix("A2");
    SolveConfig cfg;
    cfg.tol = 1e-30;
    cfg.max_iters = 2000;

    // r0 on eigenvalues (1/2, 1/4) with the maximizing ratio: factor 1/3
    const DenseVector xa{1.0, 2.0 * std::sqrt(2.0), 0.0, 0.0, 0.0};
    const auto ra = solvers::gmres1(a2, DenseVector(5), xa, cfg);
    CHECK(ra.trace.termination == Termination::Converged);
    for (int k = 1; k <= ra.trace.steps(); ++k) {
        CHECK(ra.trace.residual_norms[k] / ra.trace.residual_norms[k - 1] ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    CHECK(ra.trace.rho_at(60) == doctest::Approx(1.0 / 3.0).epsilon(5e-3));

    // r0 on eigenvalues (1/2, 1/8): factor 3/5
    const DenseVector xb{1.0, 0.0, 8.0, 0.0, 0.0};
    const auto rb = solvers::gmres1(a2, DenseVector(5), xb, cfg);
    CHECK(rb.trace.rho_at(60) == doctest::Approx(0.6).epsilon(5e-3));
}

TEST_CASE("gmres1 stagnates when alpha vanishes") {
    // r0 with <A r0, r0> = 0 for the indefinite diagonal
    const DenseMatrix a3 = experiments::builtin_matrix("A3");
    const DenseVector r0{std::sqrt(2.0), 1.0, 0.0, 0.0};
    const DenseVector x0 = linalg::solve(a3, r0);
    const auto res = solvers::gmres1(a3, DenseVector(4), x0, {});
    CHECK(res.trace.termination == Termination::Stagnated);
    CHECK(res.trace.steps() == 0);
}

TEST_CASE("gmres1 breaks down when A r vanishes with r nonzero") {
    const DenseMatrix a = DenseMatrix::diagonal({1.0, 0.0});
    const DenseVector b{0.0, 1.0};
    const auto res = solvers::gmres1(a, b, DenseVector(2), {});
    CHECK(res.trace.termination == Termination::Breakdown);
}

TEST_CASE("raa1 on the identity converges in one step") {
    const DenseMatrix a = DenseMatrix::identity(3);
    const DenseVector b{2.0, -1.0, 4.0};
    const auto res = solvers::raa1(a, b, DenseVector(3), {});
    CHECK(res.trace.termination == Termination::Converged);
    CHECK(res.trace.steps() == 1);
}

TEST_CASE("raa1 residuals satisfy the two-step contraction identity") {
    rkltest::Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng.below(9);
        std::vector<double> eigs(n);
        for (auto& e : eigs) e = (rng.uniform01() < 0.3 ? -1.0 : 1.0) * (0.2 + 2.8 * rng.uniform01());
        const DenseMatrix a = rkltest::symmetric_with_spectrum(eigs, rng);
        const DenseVector x0 = rkltest::random_vector(n, rng);
        SolveConfig cfg;
        cfg.tol = 1e-20;
        cfg.max_iters = 40;
        cfg.record_vectors = true;
        const auto res = solvers::raa1(a, DenseVector(n), x0, cfg);
        for (int k = 0; k + 2 <= res.trace.steps(); k += 2) {
            const DenseVector& rk = res.trace.residual_vectors[k];
            const double nk = linalg::norm2(rk);
            if (nk < 1e-200 || nk > 1e100) break;
            const double al = linalg::alpha(a, rk);
            DenseVector step = rk;
            linalg::axpy(-al, linalg::matvec(a, rk), step);
            DenseVector expect = step;
            linalg::axpy(-1.0, linalg::matvec(a, step), expect);
            CHECK(linalg::norm2(expect - res.trace.residual_vectors[k + 2]) <= 1e-10 * nk);
        }
    }
}

TEST_CASE("raa1 post-transient cycle matches the four-step eigenvalue") {
    // x0 = A1^{-1} [15,5,1]: after one full cycle the residual lands on a
    // two-mode eigenvector of the cycle map, so every later cycle scales
    // by mu = 3422500/57342449 exactly.
    const DenseMatrix a1 = experiments::builtin_matrix("A1");
    const DenseVector x0{15.0, 2.5, 1.0 / 3.0};
    SolveConfig cfg;
    cfg.tol = 1e-30;
    cfg.max_iters = 500;
    const auto res = solvers::raa1(a1, DenseVector(3), x0, cfg);
    const double mu = 3422500.0 / 57342449.0;
    REQUIRE(res.trace.steps() >= 20);
    for (int k = 4; k + 4 <= std::min(res.trace.steps(), 40); k += 4) {
        CHECK(res.trace.residual_norms[k + 4] / res.trace.residual_norms[k] ==
              doctest::Approx(mu).epsilon(1e-10));
    }
    CHECK(res.trace.final_rho() == doctest::Approx(std::pow(mu, 0.25)).epsilon(0.05));
}

TEST_CASE("stationary iteration contracts at the spectral radius of M") {
    const DenseMatrix a2 = experiments::builtin_matrix("A2");
    rkltest::Rng rng(9);
    const DenseVector x0 = rkltest::random_vector(5, rng);
    SolveConfig cfg;
    cfg.tol = 1e-25;
    cfg.max_iters = 5000;
    const auto res = solvers::stationary(a2, DenseVector(5), x0, cfg);
    const int k = res.trace.steps();
    REQUIRE(k > 50);
    CHECK(res.trace.residual_norms[k] / res.trace.residual_norms[k - 1] ==
          doctest::Approx(31.0 / 32.0).epsilon(1e-6));

    // M = 0 converges in one step
    const auto one = solvers::stationary(DenseMatrix::identity(2), {1.0, 2.0}, DenseVector(2), {});
    CHECK(one.trace.steps() == 1);
}

TEST_CASE("stationary diverges when rho(M) > 1") {
    const DenseMatrix a1 = experiments::builtin_matrix("A1");
    rkltest::Rng rng(13);
    const DenseVector x0 = rkltest::random_vector(3, rng);
    SolveConfig cfg;
    cfg.max_iters = 100000;
    const auto res = solvers::stationary(a1, DenseVector(3), x0, cfg);
    CHECK(res.trace.termination == Termination::Diverged);
}

TEST_CASE("skew regime keeps residuals inside the starting block span") {
    rkltest::Rng rng(41);
    const DenseMatrix m = rkltest::skew_with_moduli({1.3, 0.7, 0.4}, rng);
    const DenseMatrix a = DenseMatrix::identity(6) - m;
    const auto blocks = spectral::schur_skew(m);

    DenseVector x0(6);
    for (std::size_t i = 0; i < 6; ++i) x0[i] = blocks.q(i, blocks.blocks[0].col);
    SolveConfig cfg;
    cfg.tol = 1e-40;
    cfg.max_iters = 400;
    cfg.record_vectors = true;
    const auto res = solvers::gmres1(a, DenseVector(6), x0, cfg);
    const double n0 = res.trace.residual_norms[0];
    for (int k = 0; k <= res.trace.steps(); ++k) {
        const DenseVector& r = res.trace.residual_vectors[k];
        const DenseVector inside = spectral::project_onto_block(blocks, 0, r);
        CHECK(linalg::norm2(r - inside) <= 1e-10 * n0);
    }
}

TEST_CASE("q-factor bound and ratio monotonicity hold on random instances") {
    rkltest::Rng rng(67);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng.below(11);
        std::vector<double> eigs(n);
        for (auto& e : eigs) e = 0.3 + 2.7 * rng.uniform01();
        const DenseMatrix a = rkltest::symmetric_with_spectrum(eigs, rng);
        const double sigma = theory::qfactor(a);
        const DenseVector x0 = rkltest::random_vector(n, rng);
        SolveConfig cfg;
        cfg.tol = 1e-250;
        cfg.max_iters = 20000;
        const auto res = solvers::gmres1(a, DenseVector(n), x0, cfg);
        double prev = 0.0;
        for (int k = 1; k <= res.trace.steps(); ++k) {
            if (res.trace.residual_norms[k] < 1e-250) break;
            const double ratio = res.trace.residual_norms[k] / res.trace.residual_norms[k - 1];
            CHECK(ratio <= sigma + 1e-12);
            CHECK(ratio >= prev - 1e-12);
            prev = ratio;
        }
    }
}
