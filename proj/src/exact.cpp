#include "rkl/exact.hpp"

namespace rkl::exact {

namespace {

bool vector_is_zero(const RationalVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) return false;
    }
    return true;
}

// M w = (I - A) w without forming M.
RationalVector apply_m(const RationalMatrix& A, const RationalVector& w) {
    RationalVector aw = matvec_exact(A, w);
    RationalVector out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] - aw[i];
    return out;
}

}  // namespace

Rational alpha_exact(const RationalMatrix& A, const RationalVector& v) {
    if (vector_is_zero(v)) throw ZeroResidual("alpha_exact: v = 0");
    const RationalVector av = matvec_exact(A, v);
    const Rational den = norm_sq_exact(av);
    if (den.is_zero()) throw SingularDirection("alpha_exact: A v = 0");
    return dot_exact(v, av) / den;
}

RationalVector mri_step_exact(const RationalMatrix& A, const RationalVector& v) {
    const Rational a = alpha_exact(A, v);
    const RationalVector av = matvec_exact(A, v);
    RationalVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - a * av[i];
    return out;
}

RationalVector psi_exact(const RationalMatrix& A, const RationalVector& v) {
    return apply_m(A, mri_step_exact(A, v));
}

RationalVector upsilon_exact(const RationalMatrix& A, const RationalVector& v) {
    const RationalVector u = psi_exact(A, v);
    if (vector_is_zero(u)) {
        throw IntermediateBreakdown("upsilon_exact: Psi(v) = 0, map undefined");
    }
    return apply_m(A, mri_step_exact(A, u));
}

Rational lambda_star_exact(const std::vector<Rational>& eigenvalues) {
    const Rational one(1);
    Rational best;
    const auto abs_r = [](const Rational& r) { return r.is_negative() ? -r : r; };
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
            const Rational& ai = eigenvalues[i];
            const Rational& aj = eigenvalues[j];
            if (ai == aj) continue;
            const Rational den = abs_r((one - ai) * ai) + abs_r((one - aj) * aj);
            if (den.is_zero()) continue;
            const Rational r = (one - ai) * (one - aj) * (ai - aj) / den;
            const Rational sq = r * r;
            if (sq > best) best = sq;
        }
    }
    return best;
}

ConjectureCheck check_conjecture_violation(const RationalMatrix& A, const RationalVector& v) {
    if (!A.is_diagonal()) {
        throw UnsupportedStructure(
            "check_conjecture_violation: exact spectrum requires a diagonal matrix");
    }
    ConjectureCheck out;
    out.w = upsilon_exact(A, v);
    out.lambda_star = lambda_star_exact(A.diagonal_entries());
    out.lambda_star_sq = out.lambda_star * out.lambda_star;
    out.ratio_sq = norm_sq_exact(out.w) / norm_sq_exact(v);
    out.violated = out.ratio_sq > out.lambda_star_sq;
    return out;
}

std::optional<bool> parity_certificate(const RationalMatrix& A, const RationalVector& v) {
    RationalVector w;
    try {
        w = upsilon_exact(A, v);
    } catch (const IntermediateBreakdown&) {
        return std::nullopt;  // degenerate start, certificate not applicable
    }
    if (!A.is_diagonal()) {
        throw UnsupportedStructure("parity_certificate: requires a diagonal matrix");
    }
    const Rational lambda = lambda_star_exact(A.diagonal_entries());
    if (lambda.is_zero()) return std::nullopt;

    // Would-be identity ||w||^2 = Lambda*^2 ||v||^2. Put the w components
    // over a common denominator D: with Lambda* = p/q and ||v||^2 = vp/vq,
    //   q^2 vq sum(n_i^2)  ==  p^2 vp D^2
    // must hold as integers; differing parity certifies it cannot.
    BigInt common_den(1);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const BigInt g = BigInt::gcd(common_den, w[i].den());
        common_den = common_den * (w[i].den() / g);
    }
    BigInt sum_num_sq(0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const BigInt n = w[i].num() * (common_den / w[i].den());
        sum_num_sq = sum_num_sq + n * n;
    }
    const Rational vsq = norm_sq_exact(v);
    const BigInt lhs = lambda.den() * lambda.den() * vsq.den() * sum_num_sq;
    const BigInt rhs = lambda.num() * lambda.num() * vsq.num() * common_den * common_den;
    return lhs.is_even() != rhs.is_even();
}

double to_float(const Rational& r) { return r.to_double(); }

Rational to_rational(std::string_view s) { return Rational::parse(s); }

}  // namespace rkl::exact
