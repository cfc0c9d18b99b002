#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rkl/errors.hpp"

namespace rkl::exact {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// The counterexample certificates square products in the 1e24 range and
// beyond, so fixed-width arithmetic is not an option here.
class BigInt {
public:
    BigInt() = default;
    BigInt(std::int64_t v);  // NOLINT(google-explicit-constructor)

    static BigInt from_decimal(std::string_view s);
    std::string to_decimal() const;

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0u; }
    int bit_length() const;
    bool bit(int i) const;

    BigInt abs() const;
    BigInt operator-() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    // Truncated division: q rounds toward zero, r keeps the numerator sign.
    static void divmod(const BigInt& num, const BigInt& den, BigInt& q, BigInt& r);
    BigInt operator/(const BigInt& d) const;
    BigInt operator%(const BigInt& d) const;

    static BigInt gcd(const BigInt& a, const BigInt& b);  // nonnegative

    BigInt shifted_left(int bits) const;
    BigInt shifted_right(int bits) const;

    std::strong_ordering operator<=>(const BigInt& o) const;
    bool operator==(const BigInt& o) const;

    // Magnitude modulo 2^64; exact when bit_length() <= 64.
    std::uint64_t low_u64() const;

    // Nearest double of the full value (round half to even).
    double to_double() const;

private:
    static int compare_mag(const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    void normalize();

    bool negative_ = false;
    std::vector<std::uint32_t> limbs_;  // little-endian, no high zero limbs
};

}  // namespace rkl::exact
