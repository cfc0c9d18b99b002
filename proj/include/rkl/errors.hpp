#pragma once

#include <stdexcept>
#include <string>

namespace rkl {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// ||v|| below the zero threshold where a nonzero vector is required.
class ZeroResidual : public Error {
public:
    explicit ZeroResidual(const std::string& what) : Error(what) {}
};

// ||A v|| = 0 with v != 0, so alpha(v) is undefined.
class SingularDirection : public Error {
public:
    explicit SingularDirection(const std::string& what) : Error(what) {}
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(const std::string& what) : Error(what) {}
};

class NotSkewSymmetric : public Error {
public:
    explicit NotSkewSymmetric(const std::string& what) : Error(what) {}
};

// Requested nonlinear eigenpair does not exist for the given spectrum
// (sign condition of the construction fails).
class SignConditionViolated : public Error {
public:
    explicit SignConditionViolated(const std::string& what) : Error(what) {}
};

class ZeroEigenvalue : public Error {
public:
    explicit ZeroEigenvalue(const std::string& what) : Error(what) {}
};

class UnsupportedStructure : public Error {
public:
    explicit UnsupportedStructure(const std::string& what) : Error(what) {}
};

// An intermediate map output vanished, e.g. Psi(v) = 0, so the composite
// map is undefined at v.
class IntermediateBreakdown : public Error {
public:
    explicit IntermediateBreakdown(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace rkl
