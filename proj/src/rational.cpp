#include "rkl/rational.hpp"

#include <cctype>
#include <cmath>

namespace rkl::exact {

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_.is_zero()) throw InvalidArgument("Rational: zero denominator");
    reduce();
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidArgument("Rational: zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    const BigInt g = BigInt::gcd(num_, den_);
    if (!(g == BigInt(1))) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw InvalidArgument("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    return (num_ * o.den_) <=> (o.num_ * den_);
}

bool Rational::operator==(const Rational& o) const {
    // Canonical reduced form makes structural equality exact equality.
    return num_ == o.num_ && den_ == o.den_;
}

double Rational::to_double() const {
    if (num_.is_zero()) return 0.0;
    const BigInt p = num_.abs();
    const BigInt& q = den_;

    // Produce a 54/55-bit integer quotient plus remainder, then round the
    // 53-bit mantissa half to even. ldexp supplies the scale (and returns
    // +-inf on exponent overflow).
    const int shift = 54 - (p.bit_length() - q.bit_length());
    BigInt n = shift >= 0 ? p.shifted_left(shift) : p;
    BigInt d = shift >= 0 ? q : q.shifted_left(-shift);
    BigInt t, r;
    BigInt::divmod(n, d, t, r);

    const int drop = t.bit_length() - 53;
    BigInt mant_big = t.shifted_right(drop);
    const bool round_bit = t.bit(drop - 1);
    bool sticky = !r.is_zero();
    if (!sticky) {
        // Any nonzero bit below the round bit also counts.
        const BigInt low = t - mant_big.shifted_left(drop) - (round_bit ? BigInt(1).shifted_left(drop - 1) : BigInt(0));
        sticky = !low.is_zero();
    }
    std::uint64_t mant = mant_big.low_u64();
    int exp = drop - shift;
    if (round_bit && (sticky || (mant & 1u))) {
        ++mant;
        if (mant == (1ULL << 53)) {
            mant >>= 1;
            ++exp;
        }
    }
    const double mag = std::ldexp(static_cast<double>(mant), exp);
    return num_.is_negative() ? -mag : mag;
}

std::string Rational::to_string() const {
    if (den_ == BigInt(1)) return num_.to_decimal();
    return num_.to_decimal() + "/" + den_.to_decimal();
}

Rational Rational::parse(std::string_view s) {
    // Trim surrounding whitespace.
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    s = s.substr(b, e - b);
    if (s.empty()) throw ParseError("Rational: empty literal");

    const std::size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
        if (slash == 0 || slash + 1 >= s.size()) throw ParseError("Rational: malformed fraction");
        return Rational(BigInt::from_decimal(s.substr(0, slash)),
                        BigInt::from_decimal(s.substr(slash + 1)));
    }

    // Decimal literal with optional fraction and exponent.
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            break;
        } else {
            throw ParseError("Rational: invalid character in literal");
        }
    }
    if (!seen_digit) throw ParseError("Rational: no digits in literal");

    long exponent = 0;
    if (pos < s.size()) {  // at 'e' or 'E'
        ++pos;
        if (pos >= s.size()) throw ParseError("Rational: dangling exponent");
        bool eneg = false;
        if (s[pos] == '+' || s[pos] == '-') {
            eneg = s[pos] == '-';
            ++pos;
        }
        if (pos >= s.size()) throw ParseError("Rational: dangling exponent");
        for (; pos < s.size(); ++pos) {
            if (s[pos] < '0' || s[pos] > '9') throw ParseError("Rational: invalid exponent");
            exponent = exponent * 10 + (s[pos] - '0');
            if (exponent > 100000) throw ParseError("Rational: exponent out of range");
        }
        if (eneg) exponent = -exponent;
    }

    BigInt num = BigInt::from_decimal(digits.empty() ? "0" : digits);
    BigInt den(1);
    long pow10 = exponent - frac_digits;
    const BigInt ten(10);
    for (long i = 0; i < pow10; ++i) num = num * ten;
    for (long i = 0; i > pow10; --i) den = den * ten;
    if (neg) num = -num;
    return Rational(std::move(num), std::move(den));
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
}

RationalMatrix RationalMatrix::diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

bool RationalMatrix::is_diagonal() const {
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (i != j && !(*this)(i, j).is_zero()) return false;
        }
    }
    return true;
}

std::vector<Rational> RationalMatrix::diagonal_entries() const {
    std::vector<Rational> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
}

Rational dot_exact(const RationalVector& x, const RationalVector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("dot_exact: sizes differ");
    Rational s;
    for (std::size_t i = 0; i < x.size(); ++i) s = s + x[i] * y[i];
    return s;
}

Rational norm_sq_exact(const RationalVector& x) { return dot_exact(x, x); }

RationalVector matvec_exact(const RationalMatrix& A, const RationalVector& x) {
    if (A.size() != x.size()) throw DimensionMismatch("matvec_exact: sizes differ");
    RationalVector y(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        Rational s;
        for (std::size_t j = 0; j < A.size(); ++j) s = s + A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

}  // namespace rkl::exact
