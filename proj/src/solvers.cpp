#include "rkl/solvers.hpp"

#include <cmath>

namespace rkl::solvers {

namespace {

constexpr double kDivergeLimit = 1e150;

using linalg::axpy;
using linalg::dot;
using linalg::matvec;
using linalg::norm2;

// Shared trace bookkeeping: norms, log-accumulated rho, optional vectors.
class TraceBuilder {
public:
    TraceBuilder(const DenseVector& r0, bool record) : record_(record) {
        const double n0 = norm2(r0);
        trace_.residual_norms.push_back(n0);
        log_norm_ = std::log(n0);
        if (record_) trace_.residual_vectors.push_back(r0);
    }

    void step(const DenseVector& r, double alpha_used) {
        const double prev = trace_.residual_norms.back();
        const double nr = norm2(r);
        trace_.residual_norms.push_back(nr);
        trace_.alphas.push_back(alpha_used);
        log_norm_ += std::log(nr / prev);
        const int k = static_cast<int>(trace_.residual_norms.size()) - 1;
        trace_.rho_series.push_back(std::exp(log_norm_ / k));
        if (record_) trace_.residual_vectors.push_back(r);
    }

    double current_norm() const { return trace_.residual_norms.back(); }

    IterationTrace finish(Termination t) {
        trace_.termination = t;
        return std::move(trace_);
    }

private:
    IterationTrace trace_;
    double log_norm_ = 0.0;
    bool record_;
};

DenseVector initial_residual(const DenseMatrix& A, const DenseVector& b,
                             const DenseVector& x0) {
    DenseVector r = matvec(A, x0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::Stagnated: return "Stagnated";
        case Termination::Breakdown: return "Breakdown";
        case Termination::MaxIters: return "MaxIters";
        case Termination::Diverged: return "Diverged";
    }
    return "Unknown";
}

SolveResult gmres1(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                   const SolveConfig& cfg) {
    DenseVector x = x0;
    DenseVector r = initial_residual(A, b, x0);
    TraceBuilder tb(r, cfg.record_vectors);

    Termination term = Termination::MaxIters;
    for (int k = 0;; ++k) {
        if (tb.current_norm() <= cfg.tol) {
            term = Termination::Converged;
            break;
        }
        if (k >= cfg.max_iters) {
            term = Termination::MaxIters;
            break;
        }
        // alpha is scale-invariant; computing it on the normalized direction
        // keeps the dot products away from denormal range in deep runs.
        const double nr = tb.current_norm();
        DenseVector rhat = r;
        for (std::size_t i = 0; i < rhat.size(); ++i) rhat[i] /= nr;
        const DenseVector what = matvec(A, rhat);
        const double ww = dot(what, what);
        if (!(ww > 0.0)) {
            term = Termination::Breakdown;
            break;
        }
        const double a = dot(rhat, what) / ww;
        // alpha ~ 0 means r is (numerically) A-orthogonal to itself and the
        // step makes no progress; happens for indefinite symmetric A.
        if (std::fabs(a) * std::sqrt(ww) <= cfg.stagnation_eps) {
            term = Termination::Stagnated;
            break;
        }
        axpy(-a, r, x);
        axpy(-a * nr, what, r);
        tb.step(r, a);
    }
    return {x, tb.finish(term)};
}

SolveResult raa1(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                 const SolveConfig& cfg) {
    DenseVector x = x0;
    DenseVector r = initial_residual(A, b, x0);
    DenseVector x_prev(x.size()), r_prev(r.size());
    TraceBuilder tb(r, cfg.record_vectors);

    Termination term = Termination::MaxIters;
    for (int k = 0;; ++k) {
        const double nr = tb.current_norm();
        if (nr <= cfg.tol) {
            term = Termination::Converged;
            break;
        }
        if (nr > kDivergeLimit) {
            term = Termination::Diverged;
            break;
        }
        if (k >= cfg.max_iters) {
            term = Termination::MaxIters;
            break;
        }

        if (k % 2 == 0) {
            // x <- M x + b, written as x - r; residual picks up one factor M.
            x_prev = x;
            r_prev = r;
            const DenseVector ar = matvec(A, r);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] -= r[i];
                r[i] -= ar[i];
            }
            tb.step(r, 0.0);
        } else {
            DenseVector d = r;
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= r_prev[i];
            // beta is invariant under joint scaling of r and d; evaluating
            // the dots on vectors scaled by 1/nr keeps them away from
            // denormal range in deep runs.
            DenseVector rhat = r, dhat = d;
            for (std::size_t i = 0; i < d.size(); ++i) {
                rhat[i] /= nr;
                dhat[i] /= nr;
            }
            const double dd = dot(dhat, dhat);
            if (!(dd > 0.0)) {
                term = Termination::Breakdown;
                break;
            }
            const double beta = dot(rhat, dhat) / dd;

            // M(x - x_prev) = (x - x_prev) - (r - r_prev), no extra matvec.
            DenseVector xd = x;
            for (std::size_t i = 0; i < xd.size(); ++i) xd[i] -= x_prev[i] + d[i];

            const DenseVector ar = matvec(A, r);
            const DenseVector ad = matvec(A, d);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] -= r[i] + beta * xd[i];
                r[i] -= ar[i] + beta * (d[i] - ad[i]);
            }
            tb.step(r, beta);
        }
    }
    return {x, tb.finish(term)};
}

SolveResult stationary(const DenseMatrix& A, const DenseVector& b, const DenseVector& x0,
                       const SolveConfig& cfg) {
    DenseVector x = x0;
    DenseVector r = initial_residual(A, b, x0);
    TraceBuilder tb(r, cfg.record_vectors);

    Termination term = Termination::MaxIters;
    for (int k = 0;; ++k) {
        const double nr = tb.current_norm();
        if (nr <= cfg.tol) {
            term = Termination::Converged;
            break;
        }
        if (nr > kDivergeLimit) {
            term = Termination::Diverged;
            break;
        }
        if (k >= cfg.max_iters) {
            term = Termination::MaxIters;
            break;
        }
        const DenseVector ar = matvec(A, r);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] -= r[i];
            r[i] -= ar[i];
        }
        tb.step(r, 0.0);
    }
    return {x, tb.finish(term)};
}

}  // namespace rkl::solvers
