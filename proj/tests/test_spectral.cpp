#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rkl/experiments.hpp"
#include "rkl/spectral.hpp"
#include "test_support.hpp"

using namespace rkl;
using linalg::DenseMatrix;
using linalg::DenseVector;

namespace {

double frob(const DenseMatrix& m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
        for (std::size_t i = 0; i < m.size(); ++i) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

DenseMatrix basis_gram_error(const DenseMatrix& u) {
    const DenseMatrix g = linalg::transpose(u) * u;
    return g - DenseMatrix::identity(u.size());
}

}  // namespace

TEST_CASE("eig_symmetric on the diagonal instances") {
    const auto s1 = spectral::eig_symmetric(DenseMatrix::diagonal({1.0, 2.0, 3.0}));
    REQUIRE(s1.group_count() == 3);
    CHECK(s1.distinct[0] == 1.0);
    CHECK(s1.distinct[1] == 2.0);
    CHECK(s1.distinct[2] == 3.0);
    CHECK(s1.multiplicity == std::vector<int>{1, 1, 1});

    const auto s2 = spectral::eig_symmetric(DenseMatrix::diagonal({2.0, 2.0}));
    REQUIRE(s2.group_count() == 1);
    CHECK(s2.distinct[0] == 2.0);
    CHECK(s2.multiplicity[0] == 2);

    const auto s3 = spectral::eig_symmetric(
        DenseMatrix::diagonal({0.5, 0.25, 0.125, 0.0625, 0.03125}));
    CHECK(s3.group_count() == 5);
}

TEST_CASE("eig_symmetric rejects nonsymmetric input") {
    DenseMatrix m(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral::eig_symmetric(m), NotSymmetric);
}

TEST_CASE("eig_symmetric reconstruction and orthonormality on random instances") {
    rkltest::Rng rng(2024);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng.below(7);
        std::vector<double> eigs(n);
        for (auto& e : eigs) e = -5.0 + 10.0 * rng.uniform01();
        const DenseMatrix a = rkltest::symmetric_with_spectrum(eigs, rng);
        const auto spectrum = spectral::eig_symmetric(a);

        CHECK(frob(basis_gram_error(spectrum.basis)) <= 1e-12 * static_cast<double>(n));

        // A U = U diag(repeated eigenvalues)
        DenseMatrix lam(n);
        int col = 0;
        for (int g = 0; g < spectrum.group_count(); ++g) {
            for (int m = 0; m < spectrum.multiplicity[g]; ++m) lam(col, col) = spectrum.distinct[g], ++col;
        }
        const DenseMatrix err = a * spectrum.basis - spectrum.basis * lam;
        CHECK(frob(err) <= 1e-10 * std::max(1e-300, frob(a)));
    }
}

TEST_CASE("eigenvalue grouping merges clustered values") {
    const DenseMatrix a = DenseMatrix::diagonal({1.0, 1.0 + 1e-12, 2.0});
    const auto spectrum = spectral::eig_symmetric(a);
    REQUIRE(spectrum.group_count() == 2);
    CHECK(spectrum.multiplicity[0] == 2);
    CHECK(spectrum.multiplicity[1] == 1);
}

TEST_CASE("schur_skew on the 8x8 experiment generator") {
    const DenseMatrix a4 = experiments::builtin_matrix("A4");
    const DenseMatrix m = DenseMatrix::identity(8) - a4;
    REQUIRE(m.is_skew_symmetric(1e-12));
    const auto blocks = spectral::schur_skew(m);

    REQUIRE(blocks.blocks.size() == 4);
    CHECK(blocks.blocks[0].modulus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(blocks.blocks[1].modulus == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(blocks.blocks[2].modulus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(blocks.blocks[3].modulus == doctest::Approx(0.25).epsilon(1e-12));

    CHECK(frob(basis_gram_error(blocks.q)) <= 1e-12 * 8.0);

    // each 2x2 compression has zero diagonal and off-diagonal +-|m_j|
    for (const auto& b : blocks.blocks) {
        DenseVector c0(8), c1(8);
        for (std::size_t i = 0; i < 8; ++i) {
            c0[i] = blocks.q(i, b.col);
            c1[i] = blocks.q(i, b.col + 1);
        }
        const DenseVector mc0 = linalg::matvec(m, c0);
        const DenseVector mc1 = linalg::matvec(m, c1);
        CHECK(std::fabs(linalg::dot(c0, mc0)) <= 1e-10);
        CHECK(std::fabs(linalg::dot(c1, mc1)) <= 1e-10);
        CHECK(std::fabs(std::fabs(linalg::dot(c0, mc1)) - b.modulus) <= 1e-10);
        CHECK(std::fabs(std::fabs(linalg::dot(c1, mc0)) - b.modulus) <= 1e-10);

        // invariance of the span
        const double q00 = linalg::dot(c0, mc0), q01 = linalg::dot(c0, mc1);
        const double q10 = linalg::dot(c1, mc0), q11 = linalg::dot(c1, mc1);
        double err = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            const double e0 = mc0[i] - (c0[i] * q00 + c1[i] * q10);
            const double e1 = mc1[i] - (c0[i] * q01 + c1[i] * q11);
            err += e0 * e0 + e1 * e1;
        }
        CHECK(std::sqrt(err) <= 1e-10 * frob(m));
    }
}

TEST_CASE("schur_skew canonical 2x2 and zero matrix") {
    DenseMatrix rot(2);
    rot(0, 1) = 1.0;
    rot(1, 0) = -1.0;
    const auto b1 = spectral::schur_skew(rot);
    REQUIRE(b1.blocks.size() == 1);
    CHECK(b1.blocks[0].modulus == doctest::Approx(1.0).epsilon(1e-14));

    const auto b0 = spectral::schur_skew(DenseMatrix(2));
    REQUIRE(b0.blocks.size() == 2);
    CHECK(b0.blocks[0].modulus == 0.0);
    CHECK(b0.blocks[1].modulus == 0.0);

    DenseMatrix sym(2);
    sym(0, 0) = 1.0;
    CHECK_THROWS_AS(spectral::schur_skew(sym), NotSkewSymmetric);
}

TEST_CASE("schur_skew handles repeated moduli and kernels") {
    rkltest::Rng rng(7);
    // two planes with the same modulus plus a genuinely skew extra plane
    const DenseMatrix m = rkltest::skew_with_moduli({0.8, 0.8, 0.3}, rng);
    const auto blocks = spectral::schur_skew(m);
    REQUIRE(blocks.blocks.size() == 3);
    CHECK(blocks.blocks[0].modulus == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(blocks.blocks[1].modulus == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(blocks.blocks[2].modulus == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(frob(basis_gram_error(blocks.q)) <= 1e-12 * 6.0);

    // odd-dimensional skew matrix has a kernel column
    DenseMatrix odd(3);
    odd(0, 1) = 1.0;
    odd(1, 0) = -1.0;
    const auto ob = spectral::schur_skew(odd);
    REQUIRE(ob.blocks.size() == 2);
    CHECK(ob.blocks[0].modulus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ob.blocks[1].modulus == 0.0);
    CHECK(ob.blocks[1].width == 1);
}

TEST_CASE("eigenvalues of S = (I + M M^T)^{-1} match the block formula") {
    const DenseMatrix a4 = experiments::builtin_matrix("A4");
    const DenseMatrix m = DenseMatrix::identity(8) - a4;
    const auto blocks = spectral::schur_skew(m);

    // direct inversion column by column
    const DenseMatrix k = m * linalg::transpose(m);
    DenseMatrix ipk(8);
    for (std::size_t j = 0; j < 8; ++j) {
        for (std::size_t i = 0; i < 8; ++i) ipk(i, j) = (i == j ? 1.0 : 0.0) + k(i, j);
    }
    DenseMatrix s(8);
    for (std::size_t j = 0; j < 8; ++j) {
        DenseVector e(8);
        e[j] = 1.0;
        const DenseVector col = linalg::solve(ipk, e);
        for (std::size_t i = 0; i < 8; ++i) s(i, j) = col[i];
    }
    const auto sspec = spectral::eig_symmetric(s);

    std::vector<double> expected;
    for (const auto& b : blocks.blocks) expected.push_back(1.0 / (1.0 + b.modulus * b.modulus));
    std::sort(expected.begin(), expected.end());

    std::vector<double> got;
    for (int g = 0; g < sspec.group_count(); ++g) {
        for (int r = 0; r < sspec.multiplicity[g]; ++r) got.push_back(sspec.distinct[g]);
    }
    // expected holds one value per block (each plane is 2-dimensional)
    REQUIRE(got.size() == 2 * expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(got[2 * i] == doctest::Approx(expected[i]).epsilon(1e-10));
        CHECK(got[2 * i + 1] == doctest::Approx(expected[i]).epsilon(1e-10));
    }
}

TEST_CASE("projections are idempotent and complete") {
    rkltest::Rng rng(31);
    const DenseMatrix m = rkltest::skew_with_moduli({1.4, 0.9, 0.2}, rng);
    const auto blocks = spectral::schur_skew(m);
    const DenseVector v = rkltest::random_vector(6, rng);

    DenseVector total(6);
    for (int j = 0; j < static_cast<int>(blocks.blocks.size()); ++j) {
        const DenseVector p = spectral::project_onto_block(blocks, j, v);
        const DenseVector pp = spectral::project_onto_block(blocks, j, p);
        CHECK(linalg::norm2(pp - p) <= 1e-12 * std::max(1.0, linalg::norm2(p)));
        total = total + p;
    }
    CHECK(linalg::norm2(total - v) <= 1e-12 * std::max(1.0, linalg::norm2(v)));

    // a vector already inside a block projects to itself
    DenseVector in_block(6);
    for (std::size_t i = 0; i < 6; ++i) in_block[i] = blocks.q(i, blocks.blocks[1].col);
    const DenseVector p = spectral::project_onto_block(blocks, 1, in_block);
    CHECK(linalg::norm2(p - in_block) <= 1e-12);

    CHECK_THROWS_AS(spectral::project_onto_block(blocks, 11, v), InvalidArgument);
}

TEST_CASE("phi_map preserves Schur block spans") {
    rkltest::Rng rng(55);
    const DenseMatrix m = rkltest::skew_with_moduli({1.1, 0.6}, rng);
    const DenseMatrix a = DenseMatrix::identity(4) - m;
    const auto blocks = spectral::schur_skew(m);

    for (int j = 0; j < 2; ++j) {
        DenseVector q(4);
        for (std::size_t i = 0; i < 4; ++i) {
            q[i] = blocks.q(i, blocks.blocks[j].col) - 0.7 * blocks.q(i, blocks.blocks[j].col + 1);
        }
        const DenseVector phi = linalg::phi_map(a, q);
        const DenseVector proj = spectral::project_onto_block(blocks, j, phi);
        CHECK(linalg::norm2(phi - proj) <= 1e-10 * linalg::norm2(q));

        // contraction factor inside the block
        const double f = blocks.blocks[j].modulus /
                         std::sqrt(1.0 + blocks.blocks[j].modulus * blocks.blocks[j].modulus);
        CHECK(linalg::norm2(phi) / linalg::norm2(q) == doctest::Approx(f).epsilon(1e-12));
    }
}
