#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rkl/errors.hpp"

namespace rkl::linalg {

// Dense column vector of doubles. Entries are validated to be finite when
// the vector is built from existing data; in-place mutation through
// operator[] is unchecked (solvers keep iterates finite themselves).
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t n) : e_(n, 0.0) {}
    DenseVector(std::initializer_list<double> init);
    explicit DenseVector(std::vector<double> entries);

    static DenseVector zeros(std::size_t n) { return DenseVector(n); }

    std::size_t size() const { return e_.size(); }
    double operator[](std::size_t i) const { return e_[i]; }
    double& operator[](std::size_t i) { return e_[i]; }
    const std::vector<double>& entries() const { return e_; }

    bool all_finite() const;

private:
    std::vector<double> e_;
};

// Square dense matrix, column-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), e_(n * n, 0.0) {}
    DenseMatrix(std::size_t n, std::vector<double> entries_column_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(const std::vector<double>& d);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return e_[j * n_ + i]; }
    double& operator()(std::size_t i, std::size_t j) { return e_[j * n_ + i]; }

    bool is_symmetric(double tol) const;
    bool is_skew_symmetric(double tol) const;
    bool is_diagonal(double tol) const;

    // Largest absolute entry; scale reference for the tolerance predicates.
    double max_abs() const;

private:
    std::size_t n_ = 0;
    std::vector<double> e_;
};

// Norm below which a vector counts as zero. Far under any stopping
// tolerance, so breakdown detection never fires on a converged residual.
inline constexpr double kZeroVectorThreshold = 1e-300;

// BLAS-1/2 kernels. Dot products accumulate sequentially in ascending
// index order so results are bit-reproducible run to run.
double dot(const DenseVector& x, const DenseVector& y);
// Overflow/underflow-safe Euclidean norm (scaled accumulation).
double norm2(const DenseVector& x);
// y += a*x
void axpy(double a, const DenseVector& x, DenseVector& y);
DenseVector matvec(const DenseMatrix& A, const DenseVector& x);

DenseVector operator+(const DenseVector& x, const DenseVector& y);
DenseVector operator-(const DenseVector& x, const DenseVector& y);
DenseVector operator*(double a, const DenseVector& x);
DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix transpose(const DenseMatrix& A);

// alpha(v) = <v,Av> / <Av,Av>, the step length that minimizes ||v - c*A*v||.
double alpha(const DenseMatrix& A, const DenseVector& v);

// Phi(v) = (I - alpha(v) A) v. The output is orthogonal to A*v.
DenseVector phi_map(const DenseMatrix& A, const DenseVector& v);

// Solve A x = b by LU with partial pivoting. Plumbing for tests and for
// building initial guesses; throws SingularDirection on a zero pivot.
DenseVector solve(const DenseMatrix& A, const DenseVector& b);

}  // namespace rkl::linalg
