#include "rkl/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rkl::linalg {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
    if (a != b) {
        throw DimensionMismatch(std::string(where) + ": sizes " + std::to_string(a) +
                                " and " + std::to_string(b) + " differ");
    }
}

void require_finite(const std::vector<double>& e, const char* where) {
    for (double x : e) {
        if (!std::isfinite(x)) {
            throw InvalidArgument(std::string(where) + ": non-finite entry");
        }
    }
}

}  // namespace

DenseVector::DenseVector(std::initializer_list<double> init) : e_(init) {
    require_finite(e_, "DenseVector");
}

DenseVector::DenseVector(std::vector<double> entries) : e_(std::move(entries)) {
    require_finite(e_, "DenseVector");
}

bool DenseVector::all_finite() const {
    for (double x : e_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> entries_column_major)
    : n_(n), e_(std::move(entries_column_major)) {
    if (e_.size() != n * n) {
        throw DimensionMismatch("DenseMatrix: entry count does not match n*n");
    }
    require_finite(e_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
    DenseMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : e_) m = std::max(m, std::fabs(x));
    return m;
}

bool DenseMatrix::is_symmetric(double tol) const {
    const double scale = std::max(1.0, max_abs());
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = j + 1; i < n_; ++i) {
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
        }
    }
    return true;
}

bool DenseMatrix::is_skew_symmetric(double tol) const {
    const double scale = std::max(1.0, max_abs());
    for (std::size_t j = 0; j < n_; ++j) {
        if (std::fabs((*this)(j, j)) > tol * scale) return false;
        for (std::size_t i = j + 1; i < n_; ++i) {
            if (std::fabs((*this)(i, j) + (*this)(j, i)) > tol * scale) return false;
        }
    }
    return true;
}

bool DenseMatrix::is_diagonal(double tol) const {
    const double scale = std::max(1.0, max_abs());
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (i != j && std::fabs((*this)(i, j)) > tol * scale) return false;
        }
    }
    return true;
}

double dot(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const DenseVector& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i]));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] / m;
        s += t * t;
    }
    return m * std::sqrt(s);
}

void axpy(double a, const DenseVector& x, DenseVector& y) {
    require_same_size(x.size(), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

DenseVector matvec(const DenseMatrix& A, const DenseVector& x) {
    require_same_size(A.size(), x.size(), "matvec");
    const std::size_t n = A.size();
    DenseVector y(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        for (std::size_t i = 0; i < n; ++i) y[i] += A(i, j) * xj;
    }
    return y;
}

DenseVector operator+(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "operator+");
    DenseVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

DenseVector operator-(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "operator-");
    DenseVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

DenseVector operator*(double a, const DenseVector& x) {
    DenseVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = a * x[i];
    return z;
}

DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
    require_same_size(A.size(), B.size(), "matrix operator-");
    DenseMatrix C(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) {
        for (std::size_t i = 0; i < A.size(); ++i) C(i, j) = A(i, j) - B(i, j);
    }
    return C;
}

DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) {
    require_same_size(A.size(), B.size(), "matrix operator*");
    const std::size_t n = A.size();
    DenseMatrix C(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double bkj = B(k, j);
            for (std::size_t i = 0; i < n; ++i) C(i, j) += A(i, k) * bkj;
        }
    }
    return C;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) {
        for (std::size_t i = 0; i < A.size(); ++i) T(j, i) = A(i, j);
    }
    return T;
}

double alpha(const DenseMatrix& A, const DenseVector& v) {
    if (norm2(v) < kZeroVectorThreshold) {
        throw ZeroResidual("alpha: ||v|| is zero");
    }
    const DenseVector av = matvec(A, v);
    const double denom = dot(av, av);
    if (!(denom > 0.0)) {
        throw SingularDirection("alpha: ||A v|| is zero");
    }
    return dot(v, av) / denom;
}

DenseVector phi_map(const DenseMatrix& A, const DenseVector& v) {
    if (norm2(v) < kZeroVectorThreshold) {
        throw ZeroResidual("phi_map: ||v|| is zero");
    }
    const DenseVector av = matvec(A, v);
    const double denom = dot(av, av);
    if (!(denom > 0.0)) {
        throw SingularDirection("phi_map: ||A v|| is zero");
    }
    const double a = dot(v, av) / denom;
    DenseVector r = v;
    axpy(-a, av, r);
    return r;
}

DenseVector solve(const DenseMatrix& A, const DenseVector& b) {
    require_same_size(A.size(), b.size(), "solve");
    const std::size_t n = A.size();
    DenseMatrix lu = A;
    DenseVector x = b;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(lu(i, k)) > std::fabs(lu(piv, k))) piv = i;
        }
        if (std::fabs(lu(piv, k)) < kZeroVectorThreshold) {
            throw SingularDirection("solve: singular matrix");
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(x[k], x[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu(k, j) * x[j];
        x[k] /= lu(k, k);
    }
    return x;
}

}  // namespace rkl::linalg
