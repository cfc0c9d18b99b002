#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rkl/rational.hpp"

namespace rkl::exact {

// alpha(v) = <v, A v> / <A v, A v> as an exact reduced rational.
Rational alpha_exact(const RationalMatrix& A, const RationalVector& v);

// (I - alpha(v) A) v.
RationalVector mri_step_exact(const RationalMatrix& A, const RationalVector& v);

// Psi(v) = M (I - alpha(v) A) v with M = I - A.
RationalVector psi_exact(const RationalMatrix& A, const RationalVector& v);

// Upsilon(v) v = M (I - alpha(Psi(v)) A) Psi(v): the full 4-step rAA(1)
// residual cycle, exactly. Throws IntermediateBreakdown when Psi(v) = 0.
RationalVector upsilon_exact(const RationalMatrix& A, const RationalVector& v);

// Lambda* over an exact spectrum. Pairs whose denominator vanishes are
// skipped.
Rational lambda_star_exact(const std::vector<Rational>& eigenvalues);

struct ConjectureCheck {
    Rational ratio_sq;        // ||Upsilon(v) v||^2 / ||v||^2
    Rational lambda_star;
    Rational lambda_star_sq;
    bool violated = false;    // ratio_sq > lambda_star_sq, compared exactly
    RationalVector w;         // Upsilon(v) v
};

// Requires a diagonal A (the counterexample instances are diagonal), so the
// exact spectrum is just the diagonal.
ConjectureCheck check_conjecture_violation(const RationalMatrix& A, const RationalVector& v);

// Reconstructs the integer identity that would have to hold if
// ||Upsilon(v) v|| = Lambda* ||v|| and compares the parity of both sides.
// Returns true when the parities differ (certifying strict inequality),
// false when parity is inconclusive, nullopt when the map breaks down at v.
std::optional<bool> parity_certificate(const RationalMatrix& A, const RationalVector& v);

// Nearest-double conversion (overflow is reported as +-inf) and exact
// parsing of "p/q" or decimal literals.
double to_float(const Rational& r);
Rational to_rational(std::string_view s);

}  // namespace rkl::exact
