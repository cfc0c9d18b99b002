#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rkl/bigint.hpp"

namespace rkl::exact {

// Exact rational number, always stored reduced with a positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    Rational(BigInt num, BigInt den);

    // Accepts "p/q", plain integers, and decimal literals like "0.25"
    // or "-1.5e-3".
    static Rational parse(std::string_view s);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    std::strong_ordering operator<=>(const Rational& o) const;
    bool operator==(const Rational& o) const;

    double to_double() const;  // nearest double; overflows to +-inf
    std::string to_string() const;  // "p/q", or "p" when q = 1

private:
    void reduce();

    BigInt num_;
    BigInt den_;  // > 0
};

class RationalVector {
public:
    RationalVector() = default;
    explicit RationalVector(std::size_t n) : e_(n) {}
    RationalVector(std::initializer_list<Rational> init) : e_(init) {}

    std::size_t size() const { return e_.size(); }
    const Rational& operator[](std::size_t i) const { return e_[i]; }
    Rational& operator[](std::size_t i) { return e_[i]; }

private:
    std::vector<Rational> e_;
};

class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t n) : n_(n), e_(n * n) {}

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix diagonal(const std::vector<Rational>& d);

    std::size_t size() const { return n_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return e_[j * n_ + i]; }
    Rational& operator()(std::size_t i, std::size_t j) { return e_[j * n_ + i]; }

    bool is_diagonal() const;
    std::vector<Rational> diagonal_entries() const;

private:
    std::size_t n_ = 0;
    std::vector<Rational> e_;
};

Rational dot_exact(const RationalVector& x, const RationalVector& y);
Rational norm_sq_exact(const RationalVector& x);
RationalVector matvec_exact(const RationalMatrix& A, const RationalVector& x);

}  // namespace rkl::exact
