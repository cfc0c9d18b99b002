#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkl/linalg.hpp"
#include "rkl/spectral.hpp"

namespace rkl::theory {

using linalg::DenseMatrix;
using linalg::DenseVector;
using spectral::SchurBlocks;
using spectral::Spectrum;

enum class Regime { SymmetricDefinite, SymmetricIndefinite, SkewM };

std::string to_string(Regime r);

// One row of a factor table. For the symmetric regime (i, j) index distinct
// eigenvalues, value = |a_j - a_i| / (|a_j| + |a_i|) and eps_sq = |a_i/a_j|
// is the ratio attaining it. For the skew regime i = j index a Schur block,
// value = |m_j| / sqrt(1 + |m_j|^2) and eps_sq carries |m_j|.
struct PairFactor {
    int i = 0;
    int j = 0;
    double value = 0.0;
    double eps_sq = 0.0;
};

struct FactorReport {
    Regime regime = Regime::SymmetricDefinite;
    double worst_case_rho = 0.0;
    std::vector<PairFactor> pairs;
};

// Worst-case root-convergence factor of GMRES(1) for symmetric A:
// max pairwise |a_j - a_i|/(|a_j| + |a_i|), which is 1 exactly when the
// spectrum mixes signs. `restrict_to` selects a subset of distinct
// eigenvalue indices (initial residuals supported on those groups only).
FactorReport worst_case_gmres1(const Spectrum& spectrum);
FactorReport worst_case_gmres1(const Spectrum& spectrum, const std::vector<int>& restrict_to);

// rho(r0) for a two-mode initial residual c_i u_i + c_j u_j with
// eps = c_j / c_i: sqrt of the two-step eigenvalue lambda_ij(eps).
double rho_for_two_modes(double a_i, double a_j, double eps);

// lambda_ij(eps) = (a_j - a_i)^2 / (a_i^2 + eps^2 a_j^2) / (1 + 1/eps^2).
double lambda_two_mode(double a_i, double a_j, double eps);

// Eigenvalue of the one-step squared map for the admissible two-mode
// vector: (a_j - a_i)^2 / (a_j + a_i)^2.
double i2_value(double a_i, double a_j);

// Half-cycle rAA(1) eigenvalue (may be negative) and its required eps^2.
double mu_psi(double a_i, double a_j);
double psi_eps_sq(double a_i, double a_j);

// Full-cycle rAA(1) eigenvalue at a given eps, and the eps^2 maximizing it.
double mu_upsilon(double a_i, double a_j, double eps);
double upsilon_opt_eps_sq(double a_i, double a_j);
// Closed form of the maximum of mu_upsilon over eps.
double mu_upsilon_max(double a_i, double a_j);

// Lambda* = max over pairs of mu_upsilon_max. Pairs whose denominator
// vanishes entirely (both eigenvalues in {0,1}) are skipped.
double lambda_star_raa1(const Spectrum& spectrum);

enum class MapKind { I2, Pi, Psi, Upsilon };

std::string to_string(MapKind m);

struct NepEigenpair {
    DenseVector vector;
    double value = 0.0;   // signed: Psi eigenvalues can be negative
    MapKind map_kind = MapKind::I2;
    int i1 = 0;
    int i2 = 0;
    double eps = 0.0;
};

struct EigpairOptions {
    std::optional<double> eps;   // empty = Auto (the admissible / maximizing value)
    bool spread = false;         // use randomized multi-component coefficients
    std::uint64_t seed = 0x5eed; // spread coefficients only
};

// Builds the two-mode (or spread multi-component) eigenvector for map
// `kind` on distinct-eigenvalue groups i1, i2 of the spectrum, together
// with its eigenvalue. Throws SignConditionViolated when the requested
// construction does not exist (I2 needs a_{i1} a_{i2} > 0; Psi needs its
// eps^2 formula positive; explicit eps for I2/Psi must match the admissible
// value).
NepEigenpair construct_eigpair(const Spectrum& spectrum, MapKind kind, int i1, int i2,
                               const EigpairOptions& opts = {});

// Applies the actual map composition (never the closed forms) and returns
// ||map(u) u - value * u|| / ||u||. Independent oracle for the closed-form
// eigenvalues above.
double verify_eigenpair(const DenseMatrix& A, const NepEigenpair& pair);

// Skew regime factors. worst_case_skew = m* / sqrt(1 + m*^2); the rAA(1)
// comparator is m* / (1 + m*^2)^{1/4}.
double worst_case_skew(const SchurBlocks& blocks);
double raa1_factor_skew(const SchurBlocks& blocks);
double skew_factor_restricted(const SchurBlocks& blocks, const std::vector<int>& block_subset);
FactorReport skew_report(const SchurBlocks& blocks);

// q-linear convergence factor: the worst-case rho of the matching regime.
// Throws UnsupportedStructure when A is neither symmetric nor I - A skew.
double qfactor(const DenseMatrix& A);

// Range of alpha(v) over nonzero v when M = I - A is skew-symmetric:
// [1/(1 + m*^2), 1/(1 + m_*^2)].
std::pair<double, double> alpha_range_skew(const SchurBlocks& blocks);

}  // namespace rkl::theory
