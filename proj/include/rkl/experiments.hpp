#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkl/rational.hpp"
#include "rkl/solvers.hpp"
#include "rkl/spectral.hpp"
#include "rkl/theory.hpp"

namespace rkl::experiments {

using linalg::DenseMatrix;
using linalg::DenseVector;

// Built-in matrices: A1-A3 symmetric, A4 = I - M with M skew-symmetric,
// CA1-CA3 the exact-counterexample instances. Throws InvalidArgument for
// unknown names.
DenseMatrix builtin_matrix(const std::string& name);
bool is_builtin_matrix(const std::string& name);
exact::RationalMatrix builtin_matrix_exact(const std::string& name);  // CA1..CA3 (and A1..A3)
exact::RationalVector counterexample_vector(int case_index);          // 1..3

struct EnsembleConfig {
    std::string matrix = "A1";          // builtin name or file path
    int trials = 1000;
    std::uint64_t seed = 42;
    std::string solver = "gmres1";      // gmres1 | raa1 | stationary
    double tol = 1e-30;
    int max_iters = 2000;
    std::vector<int> mask;              // x0 components forced to zero
    std::vector<int> block_init;        // Schur block indices restricting x0
};

struct TrialResult {
    std::vector<double> residual_norms;
    std::vector<double> rho_series;
    std::vector<double> alphas;
    solvers::Termination termination = solvers::Termination::MaxIters;
};

struct EnsembleResult {
    EnsembleConfig config;
    std::vector<TrialResult> trials;
    double theoretical_rho = 0.0;
    double max_observed_rho_tail = 0.0;
};

// Runs cfg.trials independent solves from random x0 (entries uniform on
// (-1,1), per-trial splitmix64 substream seeded with seed + (trial+1)*
// golden gamma), b = 0. Deterministic for a fixed config; trials may run
// in parallel (RKL_THREADS caps the worker count) with results assembled
// in trial order.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

struct StructuredRun {
    solvers::SolveResult result;
    double predicted_rho = 0.0;   // from the decomposition of r0
    bool predicted_is_bound = false;  // true when >2 modes: restricted worst case
};

// Single run from an explicit x0, paired with the predicted rho(r0) from
// the spectral decomposition of r0 = A x0.
StructuredRun run_structured(const DenseMatrix& A, const DenseVector& x0,
                             const std::string& solver, double tol, int max_iters);

// Deterministic x0 draw used by the ensemble (exposed for tests).
DenseVector random_x0(std::size_t n, std::uint64_t seed, int trial);

// Worst-case factor for the configured restriction (mask restriction is
// spectral only for diagonal matrices).
double theoretical_rho_for(const DenseMatrix& A, const EnsembleConfig& cfg);

// CSV with header trial,k,residual_norm,rho_k,alpha_k,termination; byte
// deterministic for a fixed config.
std::string ensemble_csv(const EnsembleResult& result);
std::string trace_csv(const solvers::IterationTrace& trace);

// Flat key=value metadata echo (config, derived values, content hash).
std::string ensemble_metadata(const EnsembleResult& result);

// git-style SHA-1 ("blob <len>\0" + content) of a string, hex encoded.
std::string content_hash(const std::string& content);

// Parse the flat key=value config format (# starts a comment).
EnsembleConfig parse_config(std::istream& in);

}  // namespace rkl::experiments
