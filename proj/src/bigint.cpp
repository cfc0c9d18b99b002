#include "rkl/bigint.hpp"

#include <algorithm>
#include <cmath>

namespace rkl::exact {

namespace {

void shl1_inplace(std::vector<std::uint32_t>& m) {
    std::uint32_t carry = 0;
    for (auto& limb : m) {
        const std::uint32_t next = limb >> 31;
        limb = (limb << 1) | carry;
        carry = next;
    }
    if (carry) m.push_back(carry);
}

void trim(std::vector<std::uint32_t>& m) {
    while (!m.empty() && m.back() == 0u) m.pop_back();
}

// a -= b, requires a >= b.
void sub_inplace(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
        if (d < 0) {
            d += (std::int64_t{1} << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        a[i] = static_cast<std::uint32_t>(d);
    }
    trim(a);
}

}  // namespace

BigInt::BigInt(std::int64_t v) {
    negative_ = v < 0;
    std::uint64_t mag = negative_ ? (~static_cast<std::uint64_t>(v) + 1u) : static_cast<std::uint64_t>(v);
    while (mag != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(mag & 0xFFFFFFFFu));
        mag >>= 32;
    }
    if (limbs_.empty()) negative_ = false;
}

void BigInt::normalize() {
    trim(limbs_);
    if (limbs_.empty()) negative_ = false;
}

int BigInt::compare_mag(const std::vector<std::uint32_t>& a,
                        const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(std::max(a.size(), b.size()) + 1, 0u);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        out[i] = static_cast<std::uint32_t>(s & 0xFFFFFFFFu);
        carry = s >> 32;
    }
    trim(out);
    return out;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out = a;
    sub_inplace(out, b);
    return out;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    r.negative_ = false;
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.limbs_.empty()) r.negative_ = !r.negative_;
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.negative_ == b.negative_) {
        r.limbs_ = BigInt::add_mag(a.limbs_, b.limbs_);
        r.negative_ = a.negative_;
    } else {
        const int c = BigInt::compare_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.limbs_ = BigInt::sub_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_;
        } else {
            r.limbs_ = BigInt::sub_mag(b.limbs_, a.limbs_);
            r.negative_ = b.negative_;
        }
    }
    r.normalize();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0u);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xFFFFFFFFu);
            carry = cur >> 32;
        }
        std::size_t k = i + b.limbs_.size();
        while (carry != 0) {
            std::uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<std::uint32_t>(cur & 0xFFFFFFFFu);
            carry = cur >> 32;
            ++k;
        }
    }
    r.negative_ = a.negative_ != b.negative_;
    r.normalize();
    return r;
}

int BigInt::bit_length() const {
    if (limbs_.empty()) return 0;
    const std::uint32_t top = limbs_.back();
    int bits = static_cast<int>(limbs_.size() - 1) * 32;
    for (int i = 31; i >= 0; --i) {
        if (top & (1u << i)) return bits + i + 1;
    }
    return bits;
}

bool BigInt::bit(int i) const {
    if (i < 0) return false;
    const std::size_t limb = static_cast<std::size_t>(i) / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (static_cast<unsigned>(i) % 32u)) & 1u;
}

BigInt BigInt::shifted_left(int bits) const {
    if (bits <= 0 || is_zero()) return *this;
    BigInt r;
    const int limb_shift = bits / 32;
    const int bit_shift = bits % 32;
    r.limbs_.assign(limbs_.size() + static_cast<std::size_t>(limb_shift) + 1, 0u);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        const std::uint64_t v = static_cast<std::uint64_t>(limbs_[i]) << bit_shift;
        r.limbs_[i + static_cast<std::size_t>(limb_shift)] |= static_cast<std::uint32_t>(v & 0xFFFFFFFFu);
        r.limbs_[i + static_cast<std::size_t>(limb_shift) + 1] |= static_cast<std::uint32_t>(v >> 32);
    }
    r.negative_ = negative_;
    r.normalize();
    return r;
}

BigInt BigInt::shifted_right(int bits) const {
    if (bits <= 0) return *this;
    if (bits >= bit_length()) return BigInt();
    BigInt r;
    const std::size_t limb_shift = static_cast<std::size_t>(bits) / 32;
    const int bit_shift = bits % 32;
    r.limbs_.assign(limbs_.size() - limb_shift, 0u);
    for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(limbs_[i + limb_shift]) >> bit_shift;
        if (bit_shift != 0 && i + limb_shift + 1 < limbs_.size()) {
            v |= static_cast<std::uint64_t>(limbs_[i + limb_shift + 1]) << (32 - bit_shift);
        }
        r.limbs_[i] = static_cast<std::uint32_t>(v & 0xFFFFFFFFu);
    }
    r.negative_ = negative_;
    r.normalize();
    return r;
}

void BigInt::divmod(const BigInt& num, const BigInt& den, BigInt& q, BigInt& r) {
    if (den.is_zero()) throw InvalidArgument("BigInt::divmod: division by zero");
    if (compare_mag(num.limbs_, den.limbs_) < 0) {
        q = BigInt();
        r = num;
        return;
    }

    // Bitwise long division on magnitudes; numbers here stay in the hundreds
    // of bits, so this is plenty fast and easy to trust.
    const int nbits = num.bit_length();
    std::vector<std::uint32_t> rem;
    std::vector<std::uint32_t> quo(static_cast<std::size_t>(nbits + 31) / 32, 0u);
    for (int i = nbits - 1; i >= 0; --i) {
        shl1_inplace(rem);
        if (num.bit(i)) {
            if (rem.empty()) rem.push_back(1u);
            else rem[0] |= 1u;
        }
        if (compare_mag(rem, den.limbs_) >= 0) {
            sub_inplace(rem, den.limbs_);
            quo[static_cast<std::size_t>(i) / 32] |= (1u << (static_cast<unsigned>(i) % 32u));
        }
    }

    q.limbs_ = std::move(quo);
    q.negative_ = num.negative_ != den.negative_;
    q.normalize();
    r.limbs_ = std::move(rem);
    r.negative_ = num.negative_;
    r.normalize();
}

BigInt BigInt::operator/(const BigInt& d) const {
    BigInt q, r;
    divmod(*this, d, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& d) const {
    BigInt q, r;
    divmod(*this, d, q, r);
    return r;
}

BigInt BigInt::gcd(const BigInt& a, const BigInt& b) {
    BigInt x = a.abs();
    BigInt y = b.abs();
    while (!y.is_zero()) {
        BigInt q, r;
        divmod(x, y, q, r);
        x = y;
        y = r;
    }
    return x;
}

std::strong_ordering BigInt::operator<=>(const BigInt& o) const {
    if (negative_ != o.negative_) {
        return negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    const int c = compare_mag(limbs_, o.limbs_);
    const int s = negative_ ? -c : c;
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool BigInt::operator==(const BigInt& o) const {
    return negative_ == o.negative_ && limbs_ == o.limbs_;
}

std::uint64_t BigInt::low_u64() const {
    std::uint64_t v = 0;
    if (!limbs_.empty()) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
}

double BigInt::to_double() const {
    const int bits = bit_length();
    if (bits == 0) return 0.0;
    double mag;
    if (bits <= 64) {
        mag = static_cast<double>(low_u64());
    } else {
        BigInt top = shifted_right(bits - 64);
        std::uint64_t t = top.low_u64();
        // Fold dropped bits into the sticky bit so the 64->double conversion
        // rounds to nearest correctly.
        BigInt back = top.shifted_left(bits - 64);
        if (!(back == this->abs())) t |= 1u;
        mag = std::ldexp(static_cast<double>(t), bits - 64);
    }
    return negative_ ? -mag : mag;
}

BigInt BigInt::from_decimal(std::string_view s) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    if (pos >= s.size()) throw ParseError("BigInt: empty numeral");
    BigInt r;
    std::uint32_t chunk = 0;
    int chunk_digits = 0;
    const auto flush = [&](int digits) {
        std::uint32_t scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10u;
        r = r * BigInt(static_cast<std::int64_t>(scale)) + BigInt(static_cast<std::int64_t>(chunk));
        chunk = 0;
        chunk_digits = 0;
    };
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c < '0' || c > '9') throw ParseError("BigInt: invalid digit in numeral");
        chunk = chunk * 10u + static_cast<std::uint32_t>(c - '0');
        if (++chunk_digits == 9) flush(9);
    }
    if (chunk_digits > 0) flush(chunk_digits);
    if (neg && !r.is_zero()) r.negative_ = true;
    return r;
}

std::string BigInt::to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigInt v = abs();
    const BigInt base(1000000000);
    std::vector<std::uint32_t> chunks;
    while (!v.is_zero()) {
        BigInt q, r;
        divmod(v, base, q, r);
        chunks.push_back(static_cast<std::uint32_t>(r.low_u64()));
        v = q;
    }
    out = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
        std::string part = std::to_string(chunks[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return negative_ ? "-" + out : out;
}

}  // namespace rkl::exact
