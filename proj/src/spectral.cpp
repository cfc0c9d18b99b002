#include "rkl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rkl::spectral {

namespace {

// Plain eigenpairs before grouping, sorted ascending by eigenvalue.
struct EigPairs {
    std::vector<double> values;
    DenseMatrix vectors;
};

// Cyclic Jacobi with the Golub & Van Loan rotation. Matrices here are tiny,
// so sweeps to machine precision are cheap and give near-ulp orthogonality.
EigPairs jacobi(const DenseMatrix& A) {
    const std::size_t n = A.size();
    DenseMatrix a = A;
    DenseMatrix v = DenseMatrix::identity(n);

    double frob = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) frob += a(i, j) * a(i, j);
    frob = std::sqrt(frob);
    const double stop = 1e-15 * std::max(frob, 1e-300);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j + 1; i < n; ++i) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p), arq = a(r, q);
                        a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                        a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigPairs out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

}  // namespace

double group_tolerance() { return 1e-8; }

int Spectrum::group_offset(int group) const {
    int off = 0;
    for (int i = 0; i < group; ++i) off += multiplicity[i];
    return off;
}

DenseVector Spectrum::group_vector(int group) const {
    const int col = group_offset(group);
    DenseVector u(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) u[i] = basis(i, col);
    return u;
}

Spectrum eig_symmetric(const DenseMatrix& A) {
    if (!A.is_symmetric(1e-12)) {
        throw NotSymmetric("eig_symmetric: matrix is not symmetric within 1e-12");
    }
    const EigPairs eig = jacobi(A);
    const std::size_t n = A.size();

    double spectral_radius = 0.0;
    for (double a : eig.values) spectral_radius = std::max(spectral_radius, std::fabs(a));
    const double merge = group_tolerance() * std::max(1.0, spectral_radius);

    Spectrum s;
    s.basis = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        if (!s.distinct.empty() && eig.values[k] - s.distinct.back() <= merge) {
            ++s.multiplicity.back();
        } else {
            s.distinct.push_back(eig.values[k]);
            s.multiplicity.push_back(1);
        }
    }
    return s;
}

SchurBlocks schur_skew(const DenseMatrix& M) {
    if (!M.is_skew_symmetric(1e-12)) {
        throw NotSkewSymmetric("schur_skew: matrix is not skew-symmetric within 1e-12");
    }
    const std::size_t n = M.size();

    // K = M M^T is symmetric positive semidefinite with eigenvalues |m_j|^2,
    // each of even multiplicity on the nonsingular part.
    const DenseMatrix K = M * transpose(M);
    const Spectrum ks = eig_symmetric(K);

    const double k_scale = std::max(1.0, std::fabs(ks.distinct.empty() ? 0.0 : ks.distinct.back()));
    const double zero_tol = 1e-12 * k_scale;

    struct Pending {
        double modulus;
        std::vector<DenseVector> cols;
    };
    std::vector<Pending> groups;

    for (int g = 0; g < ks.group_count(); ++g) {
        const int off = ks.group_offset(g);
        const int mult = ks.multiplicity[g];
        const double lam = std::max(0.0, ks.distinct[g]);

        std::vector<DenseVector> gbasis;
        for (int c = 0; c < mult; ++c) {
            DenseVector y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = ks.basis(i, off + c);
            gbasis.push_back(y);
        }

        if (lam <= zero_tol) {
            // Kernel of M: each column is its own zero-modulus block.
            for (auto& y : gbasis) groups.push_back({0.0, {y}});
            continue;
        }

        const double m = std::sqrt(lam);
        Pending pending{m, {}};
        std::vector<DenseVector> chosen;  // q and q~ columns already fixed
        for (auto& y : gbasis) {
            if (static_cast<int>(chosen.size()) >= mult) break;
            // Orthogonalize the candidate against the pairs fixed so far
            // (two Gram-Schmidt passes for orthogonality to roundoff).
            DenseVector q = y;
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& c : chosen) linalg::axpy(-linalg::dot(c, q), c, q);
            }
            const double nq = linalg::norm2(q);
            if (nq < 1e-8) continue;  // already inside a chosen plane
            for (std::size_t i = 0; i < n; ++i) q[i] /= nq;

            DenseVector qt = linalg::matvec(M, q);
            for (std::size_t i = 0; i < n; ++i) qt[i] /= m;
            // M q is orthogonal to q exactly (skew symmetry); renormalize to
            // absorb the eigenvalue rounding in |m|.
            const double nqt = linalg::norm2(qt);
            for (std::size_t i = 0; i < n; ++i) qt[i] /= nqt;

            pending.cols.push_back(q);
            pending.cols.push_back(qt);
            chosen.push_back(q);
            chosen.push_back(qt);
        }
        groups.push_back(std::move(pending));
    }

    std::stable_sort(groups.begin(), groups.end(),
                     [](const Pending& a, const Pending& b) { return a.modulus > b.modulus; });

    SchurBlocks out;
    out.q = DenseMatrix(n);
    int col = 0;
    for (const auto& g : groups) {
        // A repeated modulus contributes several 2x2 blocks.
        for (std::size_t c = 0; c < g.cols.size(); c += (g.modulus > 0.0 ? 2 : 1)) {
            SchurBlocks::Block b;
            b.col = col;
            b.width = g.modulus > 0.0 ? 2 : 1;
            b.modulus = g.modulus;
            for (int w = 0; w < b.width; ++w) {
                for (std::size_t i = 0; i < n; ++i) out.q(i, col) = g.cols[c + w][i];
                ++col;
            }
            out.blocks.push_back(b);
        }
    }
    if (col != static_cast<int>(n)) {
        throw UnsupportedStructure("schur_skew: block columns do not fill the space (" +
                                   std::to_string(col) + " of " + std::to_string(n) + ")");
    }
    return out;
}

double SchurBlocks::max_modulus() const {
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, b.modulus);
    return m;
}

double SchurBlocks::min_modulus() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) m = std::min(m, b.modulus);
    return std::isfinite(m) ? m : 0.0;
}

DenseVector project_onto_block(const SchurBlocks& blocks, int j, const DenseVector& v) {
    if (j < 0 || j >= static_cast<int>(blocks.blocks.size())) {
        throw InvalidArgument("project_onto_block: block index out of range");
    }
    const auto& b = blocks.blocks[static_cast<std::size_t>(j)];
    const std::size_t n = blocks.q.size();
    DenseVector out(n);
    for (int w = 0; w < b.width; ++w) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += blocks.q(i, b.col + w) * v[i];
        for (std::size_t i = 0; i < n; ++i) out[i] += c * blocks.q(i, b.col + w);
    }
    return out;
}

}  // namespace rkl::spectral
