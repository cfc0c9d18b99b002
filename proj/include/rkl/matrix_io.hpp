#pragma once

#include <iosfwd>
#include <string>

#include "rkl/linalg.hpp"
#include "rkl/rational.hpp"

namespace rkl::io {

// Shared text format: first line n, then n lines of n whitespace-separated
// entries. Entries are decimal ("0.25") or rational ("1/4"); the rational
// form is exact on the exact path and converted by division on the float
// path. Vectors use the same layout with one entry per slot.

linalg::DenseMatrix read_matrix(std::istream& in);
linalg::DenseMatrix read_matrix_file(const std::string& path);
linalg::DenseVector read_vector(std::istream& in);
linalg::DenseVector read_vector_file(const std::string& path);

exact::RationalMatrix read_matrix_exact(std::istream& in);
exact::RationalMatrix read_matrix_exact_file(const std::string& path);
exact::RationalVector read_vector_exact(std::istream& in);

void write_matrix(std::ostream& out, const linalg::DenseMatrix& m);
void write_vector(std::ostream& out, const linalg::DenseVector& v);

double parse_entry(const std::string& token);

}  // namespace rkl::io
