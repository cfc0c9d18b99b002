#pragma once

#include <cstddef>
#include <vector>

#include "rkl/linalg.hpp"

namespace rkl::spectral {

using linalg::DenseMatrix;
using linalg::DenseVector;

// Eigendecomposition of a symmetric matrix with eigenvalues grouped into
// distinct values. Columns of `basis` are orthonormal and ordered to match
// the grouping: group i occupies columns [group_offset(i), group_offset(i) +
// multiplicity[i]).
struct Spectrum {
    std::vector<double> distinct;     // ascending
    std::vector<int> multiplicity;    // same length as distinct, sums to n
    DenseMatrix basis;

    std::size_t dimension() const { return basis.size(); }
    int group_count() const { return static_cast<int>(distinct.size()); }
    int group_offset(int group) const;
    // First basis column of a group.
    DenseVector group_vector(int group) const;
};

// Real Schur structure of a skew-symmetric matrix: an orthogonal Q whose
// consecutive column pairs span the invariant planes of M. Paired blocks
// have width 2 and modulus |m_j| > 0; kernel columns are emitted as width-1
// blocks with modulus 0. Blocks are sorted by modulus, descending.
struct SchurBlocks {
    struct Block {
        int col;         // first column of the block in q
        int width;       // 2 for a rotation pair, 1 for a kernel column
        double modulus;  // |m_j|
    };

    DenseMatrix q;
    std::vector<Block> blocks;

    double max_modulus() const;
    double min_modulus() const;
};

// Relative tolerance used to merge nearby eigenvalues into one distinct
// value; the absolute tolerance is group_tolerance() * max(1, ||A||_2).
double group_tolerance();

// Cyclic Jacobi eigendecomposition. Requires A symmetric within 1e-12.
Spectrum eig_symmetric(const DenseMatrix& A);

// Requires M skew-symmetric within 1e-12. Built by diagonalizing M*M^T and
// pairing each eigenvector q with M q / |m_j|.
SchurBlocks schur_skew(const DenseMatrix& M);

// Q_j Q_j^T v for block j.
DenseVector project_onto_block(const SchurBlocks& blocks, int j, const DenseVector& v);

}  // namespace rkl::spectral
