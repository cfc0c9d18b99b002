#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rkl/linalg.hpp"

// Deterministic generators shared by the test files.
namespace rkltest {

using rkl::linalg::DenseMatrix;
using rkl::linalg::DenseVector;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

inline DenseMatrix random_orthogonal(std::size_t n, Rng& rng) {
    DenseMatrix q = DenseMatrix::identity(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t r = p + 1; r < n; ++r) {
            const double th = 3.14159265358979323846 * rng.uniform_pm1();
            const double c = std::cos(th), s = std::sin(th);
            for (std::size_t i = 0; i < n; ++i) {
                const double a = q(i, p), b = q(i, r);
                q(i, p) = c * a - s * b;
                q(i, r) = s * a + c * b;
            }
        }
    }
    return q;
}

// Symmetric matrix with prescribed eigenvalues (repeated per multiplicity)
// in a random orthogonal basis.
inline DenseMatrix symmetric_with_spectrum(const std::vector<double>& eigs, Rng& rng) {
    const std::size_t n = eigs.size();
    const DenseMatrix q = random_orthogonal(n, rng);
    DenseMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = eigs[i];
    DenseMatrix a = q * d * rkl::linalg::transpose(q);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = v;
        }
    }
    return a;
}

// Skew-symmetric matrix with prescribed block moduli in a random basis.
inline DenseMatrix skew_with_moduli(const std::vector<double>& moduli, Rng& rng) {
    const std::size_t n = 2 * moduli.size();
    const DenseMatrix q = random_orthogonal(n, rng);
    DenseMatrix h(n);
    for (std::size_t j = 0; j < moduli.size(); ++j) {
        h(2 * j, 2 * j + 1) = -moduli[j];
        h(2 * j + 1, 2 * j) = moduli[j];
    }
    DenseMatrix m = q * h * rkl::linalg::transpose(q);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) - m(j, i));
            m(i, j) = v;
            m(j, i) = -v;
        }
    }
    return m;
}

inline DenseVector random_vector(std::size_t n, Rng& rng) {
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform_pm1();
    return v;
}

}  // namespace rkltest
