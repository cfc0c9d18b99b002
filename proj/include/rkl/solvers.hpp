#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rkl/linalg.hpp"

namespace rkl::solvers {

using linalg::DenseMatrix;
using linalg::DenseVector;

enum class Termination { Converged, Stagnated, Breakdown, MaxIters, Diverged };

std::string to_string(Termination t);

struct SolveConfig {
    double tol = 1e-30;          // stop when ||r_k|| <= tol
    int max_iters = 10000;
    bool record_vectors = false;
    double stagnation_eps = 1e-14;
};

// Per-step record of a solve. rho_series[k-1] holds rho_k = ||r_k||^{1/k}
// for k >= 1; it is accumulated from log step ratios so deep runs do not
// underflow. alphas[k] is the step parameter consumed at step k (the mixing
// weight for rAA(1) accelerated steps, 0.0 at its plain steps and for the
// stationary iteration).
struct IterationTrace {
    std::vector<double> residual_norms;
    std::vector<double> alphas;
    std::vector<double> rho_series;
    Termination termination = Termination::MaxIters;
    std::vector<DenseVector> residual_vectors;  // only when record_vectors

    int steps() const { return static_cast<int>(residual_norms.size()) - 1; }
    double rho_at(int k) const { return rho_series.at(static_cast<std::size_t>(k) - 1); }
    double final_rho() const { return rho_series.empty() ? 0.0 : rho_series.back(); }
};

struct SolveResult {
    DenseVector x;
    IterationTrace trace;
};

// Minimal residual iteration: alpha_k = <r_k, A r_k>/<A r_k, A r_k>,
// x_{k+1} = x_k - alpha_k r_k, r_{k+1} = r_k - alpha_k A r_k, r = A x - b.
SolveResult gmres1(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                   const SolveConfig& cfg);

// Restarted Anderson acceleration with window 1 on the fixed-point map
// x -> M x + b, M = I - A. Plain step at k = 0, 2, 4, ..., Anderson-mixed
// step at k = 1, 3, 5, ... The mixed step uses the least-squares weight
// beta_k = <r_k, r_k - r_{k-1}> / ||r_k - r_{k-1}||^2 applied as
// x_{k+1} = M x_k + b - beta_k M (x_k - x_{k-1}), which makes the residuals
// satisfy r_{k+2} = M (I - alpha(r_k) A) r_k for even k.
SolveResult raa1(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                 const SolveConfig& cfg);

// Plain fixed-point iteration x_{k+1} = M x_k + b.
SolveResult stationary(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                       const SolveConfig& cfg);

}  // namespace rkl::solvers
