#include "rkl/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rkl::io {

namespace {

std::size_t read_dimension(std::istream& in) {
    long long n = 0;
    if (!(in >> n) || n < 1) throw ParseError("matrix text: bad dimension line");
    return static_cast<std::size_t>(n);
}

std::string next_token(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw ParseError("matrix text: unexpected end of input");
    return tok;
}

std::string format_entry(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

double parse_entry(const std::string& token) {
    const auto parse_number = [&](const std::string& text) {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw ParseError("matrix text: malformed entry '" + token + "'");
        return v;
    };
    try {
        const std::size_t slash = token.find('/');
        if (slash != std::string::npos) {
            const double p = parse_number(token.substr(0, slash));
            const double q = parse_number(token.substr(slash + 1));
            if (q == 0.0) throw ParseError("matrix text: zero denominator in entry");
            return p / q;
        }
        return parse_number(token);
    } catch (const std::invalid_argument&) {
        throw ParseError("matrix text: invalid entry '" + token + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("matrix text: entry out of range '" + token + "'");
    }
}

linalg::DenseMatrix read_matrix(std::istream& in) {
    const std::size_t n = read_dimension(in);
    linalg::DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_entry(next_token(in));
    }
    return m;
}

linalg::DenseMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    return read_matrix(in);
}

linalg::DenseVector read_vector(std::istream& in) {
    const std::size_t n = read_dimension(in);
    linalg::DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = parse_entry(next_token(in));
    return v;
}

linalg::DenseVector read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vector file: " + path);
    return read_vector(in);
}

exact::RationalMatrix read_matrix_exact(std::istream& in) {
    const std::size_t n = read_dimension(in);
    exact::RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = exact::Rational::parse(next_token(in));
    }
    return m;
}

exact::RationalMatrix read_matrix_exact_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    return read_matrix_exact(in);
}

exact::RationalVector read_vector_exact(std::istream& in) {
    const std::size_t n = read_dimension(in);
    exact::RationalVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = exact::Rational::parse(next_token(in));
    return v;
}

void write_matrix(std::ostream& out, const linalg::DenseMatrix& m) {
    out << m.size() << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out << " ";
            out << format_entry(m(i, j));
        }
        out << "\n";
    }
}

void write_vector(std::ostream& out, const linalg::DenseVector& v) {
    out << v.size() << "\n";
    for (std::size_t i = 0; i < v.size(); ++i) out << format_entry(v[i]) << "\n";
}

}  // namespace rkl::io
